// Copyright 2026 The Fourswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "event_sim.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng) {
  return std::generate_canonical<double, 64>(rng);
}

// Draws (w, W) from |f|^2.
class PairSampler {
 public:
  explicit PairSampler(const Jsa& f) : f_(f) {
    if (f.is_gaussian()) {
      const GaussianModel& g = f.gaussian_params();
      gaussian_ = true;
      mean_s_ = g.shift_s;
      mean_i_ = g.shift_i;
      const double det = 1.0 - 4.0 * g.alpha * g.alpha * g.sigma_s * g.sigma_s *
                                   g.sigma_i * g.sigma_i;
      const double css = g.sigma_s * g.sigma_s / det;
      const double cii = g.sigma_i * g.sigma_i / det;
      const double csi = -2.0 * g.alpha * g.sigma_s * g.sigma_s * g.sigma_i *
                         g.sigma_i / det;
      l11_ = std::sqrt(css);
      l21_ = csi / l11_;
      l22_ = std::sqrt(std::max(cii - l21_ * l21_, 0.0));
      return;
    }
    const auto& gs = f.signal_grid();
    const auto& gi = f.idler_grid();
    const auto& s = f.samples();
    ns_ = gs.size();
    ni_ = gi.size();
    cdf_.reserve((ns_ - 1) * (ni_ - 1));
    double acc = 0.0;
    for (std::size_t a = 0; a + 1 < ns_; ++a) {
      for (std::size_t b = 0; b + 1 < ni_; ++b) {
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        acc += 0.25 * (std::norm(s(ia, ib)) + std::norm(s(ia + 1, ib)) +
                       std::norm(s(ia, ib + 1)) + std::norm(s(ia + 1, ib + 1)));
        cdf_.push_back(acc);
      }
    }
    require(acc > 0.0, ErrorCode::kNumeric, "JSA has no weight on its grid");
  }

  std::pair<double, double> operator()(std::mt19937_64& rng) const {
    if (gaussian_) {
      std::normal_distribution<double> n(0.0, 1.0);
      const double z1 = n(rng);
      const double z2 = n(rng);
      return {mean_s_ + l11_ * z1, mean_i_ + l21_ * z1 + l22_ * z2};
    }
    const double u = uniform(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto cell = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    const std::size_t a = cell / (ni_ - 1);
    const std::size_t b = cell % (ni_ - 1);
    const auto& gs = f_.signal_grid();
    const auto& gi = f_.idler_grid();
    const double ws = gs[a] + uniform(rng) * (gs[a + 1] - gs[a]);
    const double wi = gi[b] + uniform(rng) * (gi[b + 1] - gi[b]);
    return {ws, wi};
  }

 private:
  const Jsa& f_;
  bool gaussian_ = false;
  double mean_s_ = 0.0, mean_i_ = 0.0;
  double l11_ = 0.0, l21_ = 0.0, l22_ = 0.0;
  std::size_t ns_ = 0, ni_ = 0;
  std::vector<double> cdf_;
};

struct Photon {
  Channel channel;
  double detuning;
};

struct Click {
  bool fired = false;
  double time = 0.0;
  std::int64_t tag = 0;
};

// Signal outcome index: 0, 1 split with x holding w[index]; 2 xx; 3 yy.
// Idler outcome index: 0, 1 split with c holding W[index]; 2 cc; 3 dd.
cplx port_factor(int outcome, int source1_index, double other_freq,
                 double delay) {
  const cplx e = std::polar(0.5, other_freq * delay);
  switch (outcome) {
    case 0:
    case 1:
      return (outcome == source1_index) ? -e : e;
    case 2:
      return e;
    default:
      return -e;
  }
}

void route_swap(const ExperimentConfig& cfg, const PairSampler& s1,
                const PairSampler& s2, std::mt19937_64& rng,
                std::vector<Photon>& out) {
  const auto [wa, ia] = s1(rng);
  const auto [wb, ib] = s2(rng);
  const double w[2] = {wa, wb};
  const double om[2] = {ia, ib};
  cplx prod[2][2];
  double q = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      prod[a][b] = cfg.source1(w[a], om[b]) * cfg.source2(w[1 - a], om[1 - b]);
      q += std::norm(prod[a][b]);
    }
  }
  double prob[16];
  double total = 0.0;
  for (int so = 0; so < 4; ++so) {
    for (int io = 0; io < 4; ++io) {
      cplx amp = 0.0;
      for (int a = 0; a < 2; ++a) {
        const cplx sf = port_factor(so, a, w[1 - a], cfg.tau_s);
        for (int b = 0; b < 2; ++b) {
          amp += prod[a][b] * sf * port_factor(io, b, om[1 - b], cfg.tau_i);
        }
      }
      prob[so * 4 + io] = q > 0.0 ? std::norm(amp) / q : 0.0625;
      total += prob[so * 4 + io];
    }
  }
  double u = uniform(rng) * total;
  int pick = 15;
  for (int k = 0; k < 16; ++k) {
    if (u < prob[k]) {
      pick = k;
      break;
    }
    u -= prob[k];
  }
  const int so = pick / 4;
  const int io = pick % 4;
  if (so < 2) {
    out.push_back({Channel::kX, w[so]});
    out.push_back({Channel::kY, w[1 - so]});
  } else {
    const Channel ch = so == 2 ? Channel::kX : Channel::kY;
    out.push_back({ch, w[0]});
    out.push_back({ch, w[1]});
  }
  if (io < 2) {
    out.push_back({Channel::kC, om[io]});
    out.push_back({Channel::kD, om[1 - io]});
  } else {
    const Channel ch = io == 2 ? Channel::kC : Channel::kD;
    out.push_back({ch, om[0]});
    out.push_back({ch, om[1]});
  }
}

void route_double(const ExperimentConfig& cfg, const PairSampler& s,
                  double fourfold_probability, std::mt19937_64& rng,
                  std::vector<Photon>& out) {
  const auto [w1, i1] = s(rng);
  const auto [w2, i2] = s(rng);
  // Routing bits: signal 1, signal 2, idler 1, idler 2 (0 = x or c).
  int bits = 0;
  if (cfg.phase_mode == PhaseMode::kAveraged) {
    bits = static_cast<int>(rng() & 0xF);
  } else {
    static constexpr int kSplit[4] = {0b0101, 0b0110, 0b1001, 0b1010};
    static constexpr int kOther[12] = {0b0000, 0b0001, 0b0010, 0b0011,
                                       0b0100, 0b0111, 0b1000, 0b1011,
                                       0b1100, 0b1101, 0b1110, 0b1111};
    if (uniform(rng) < fourfold_probability) {
      bits = kSplit[rng() % 4];
    } else {
      bits = kOther[rng() % 12];
    }
  }
  out.push_back({(bits & 0b1000) ? Channel::kY : Channel::kX, w1});
  out.push_back({(bits & 0b0100) ? Channel::kY : Channel::kX, w2});
  out.push_back({(bits & 0b0010) ? Channel::kD : Channel::kC, i1});
  out.push_back({(bits & 0b0001) ? Channel::kD : Channel::kC, i2});
}

std::size_t index_of(Channel c) { return static_cast<std::size_t>(c); }

}  // namespace

char channel_name(Channel c) {
  static constexpr char kNames[4] = {'c', 'd', 'x', 'y'};
  return kNames[index_of(c)];
}

ExperimentConfig::ExperimentConfig(Jsa s1, Jsa s2)
    : source1(std::move(s1)), source2(std::move(s2)) {
  tofs.fill(TofsConfig::cfbg());
  for (auto& t : tofs) t.lambda0 = source1.lambda0();
}

void ExperimentConfig::validate() const {
  require(eta1 >= 0.0 && eta2 >= 0.0 && eta1 + eta2 > 0.0, ErrorCode::kConfig,
          "experiment: gains must be >= 0 and not both zero");
  require(double_pairs || eta1 * eta2 > 0.0, ErrorCode::kConfig,
          "experiment: no emission class left with these gains");
  for (const double e : efficiency) {
    require(e >= 0.0 && e <= 1.0, ErrorCode::kConfig,
            "experiment: efficiencies must lie in [0, 1]");
  }
  for (const auto& t : tofs) t.validate();
  require(threads >= 1, ErrorCode::kConfig, "experiment: threads must be >= 1");
  require(source1.signal_grid() == source2.signal_grid() &&
              source1.idler_grid() == source2.idler_grid(),
          ErrorCode::kConfig, "experiment: sources must share grids");
}

std::array<double, 3> ExperimentConfig::class_weights() const {
  const double w12 = eta1 * eta2;
  const double w11 = double_pairs ? 0.25 * eta1 * eta1 : 0.0;
  const double w22 = double_pairs ? 0.25 * eta2 * eta2 : 0.0;
  const double s = w12 + w11 + w22;
  return {w12 / s, w11 / s, w22 / s};
}

double ExperimentConfig::emission_weight() const {
  const double d = double_pairs ? 0.25 * (eta1 * eta1 + eta2 * eta2) : 0.0;
  return eta1 * eta2 + d;
}

std::mt19937_64 pulse_rng(std::uint64_t seed, std::uint64_t pulse) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~pulse)));
}

EventStream sample_fourfold(const ExperimentConfig& cfg) {
  cfg.validate();
  const PairSampler s1(cfg.source1);
  const PairSampler s2(cfg.source2);
  const auto weights = cfg.class_weights();
  double fourfold_p = 0.25;
  if (cfg.phase_mode == PhaseMode::kFixed && weights[1] + weights[2] > 0.0) {
    const cplx kappa = double_pair_coherence({cfg.source1, cfg.source2, cfg.pump_phase});
    fourfold_p = double_pair_fourfold_probability(kappa, cfg.eta1, cfg.eta2, cfg.pump_phase);
  }
  const double omega0 = cfg.source1.omega0();
  std::array<double, 4> survive{};
  for (std::size_t c = 0; c < 4; ++c) {
    survive[c] = cfg.efficiency[c] *
                 (cfg.apply_insertion_loss ? cfg.tofs[c].transmission() : 1.0);
  }

  const std::size_t workers = static_cast<std::size_t>(std::max(cfg.threads, 1));
  std::vector<std::vector<TimeTagEvent>> parts(workers);
  std::vector<SimulationSummary> sums(workers);
  const std::size_t n = static_cast<std::size_t>(cfg.pulses);
  std::vector<std::pair<std::size_t, std::size_t>> ranges(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    ranges[w] = {n * w / workers, n * (w + 1) / workers};
  }
  parallel_chunks(workers, cfg.threads, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      auto& events = parts[w];
      auto& sum = sums[w];
      std::vector<Photon> photons;
      for (std::size_t p = ranges[w].first; p < ranges[w].second; ++p) {
        auto rng = pulse_rng(cfg.seed, p);
        photons.clear();
        const double u = uniform(rng);
        EventClass cls = EventClass::kSwap;
        if (u >= weights[0]) {
          cls = (u < weights[0] + weights[1]) ? EventClass::kDouble1 : EventClass::kDouble2;
        }
        ++sum.class_counts[static_cast<std::size_t>(cls)];
        switch (cls) {
          case EventClass::kSwap:
            route_swap(cfg, s1, s2, rng, photons);
            break;
          case EventClass::kDouble1:
            route_double(cfg, s1, fourfold_p, rng, photons);
            break;
          case EventClass::kDouble2:
            route_double(cfg, s2, fourfold_p, rng, photons);
            break;
        }
        std::array<Click, 4> clicks{};
        for (const auto& ph : photons) {
          const std::size_t c = index_of(ph.channel);
          const double lambda = lambda_from_omega(omega0 + ph.detuning);
          const Arrival a = freq_to_time(lambda, cfg.tofs[c], rng);
          const bool kept = uniform(rng) < survive[c];
          if (!a.in_window) {
            ++sum.window_losses;
            continue;
          }
          if (!kept) {
            ++sum.efficiency_losses;
            continue;
          }
          if (clicks[c].fired) {
            ++sum.merged_clicks;
            if (a.time >= clicks[c].time) continue;
          }
          clicks[c] = {true, a.time, a.tag};
        }
        for (std::size_t c = 0; c < 4; ++c) {
          if (clicks[c].fired) {
            events.push_back({p, static_cast<Channel>(c), clicks[c].tag, cls});
          }
        }
      }
      sum.pulses = ranges[w].second - ranges[w].first;
    }
  });

  EventStream out;
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  out.events.reserve(total);
  for (std::size_t w = 0; w < workers; ++w) {
    out.events.insert(out.events.end(), parts[w].begin(), parts[w].end());
    const auto& s = sums[w];
    out.summary.pulses += s.pulses;
    for (std::size_t c = 0; c < 3; ++c) out.summary.class_counts[c] += s.class_counts[c];
    out.summary.window_losses += s.window_losses;
    out.summary.efficiency_losses += s.efficiency_losses;
    out.summary.merged_clicks += s.merged_clicks;
  }
  return out;
}

std::uint64_t CoincidenceHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [k, v] : counts) t += v;
  return t;
}

CoincidenceHistogram CoincidenceHistogram::marginal(
    const std::vector<Channel>& keep) const {
  std::vector<std::size_t> idx;
  CoincidenceHistogram out;
  for (const Channel c : keep) {
    const auto it = std::find(channels.begin(), channels.end(), c);
    require(it != channels.end(), ErrorCode::kInvalidArgument,
            "marginal: channel not in histogram");
    const auto i = static_cast<std::size_t>(it - channels.begin());
    idx.push_back(i);
    out.channels.push_back(c);
    out.axes.push_back(axes[i]);
  }
  for (const auto& [key, v] : counts) {
    std::vector<std::int64_t> k;
    k.reserve(idx.size());
    for (const auto i : idx) k.push_back(key[i]);
    out.counts[k] += v;
  }
  return out;
}

CoincidenceHistogram histogram(const std::vector<TimeTagEvent>& events,
                               const ExperimentConfig& cfg,
                               const std::vector<Channel>& channels,
                               double window_ps) {
  require(!channels.empty(), ErrorCode::kInvalidArgument,
          "histogram: no channels");
  CoincidenceHistogram h;
  h.channels = channels;
  for (const Channel c : channels) {
    const auto& t = cfg.tofs[index_of(c)];
    require(window_ps >= t.tdc_bin, ErrorCode::kInvalidArgument,
            "histogram: coincidence window is smaller than the TDC bin");
    h.axes.emplace_back(t);
  }
  std::size_t i = 0;
  while (i < events.size()) {
    const std::uint64_t pulse = events[i].pulse;
    std::array<const TimeTagEvent*, 4> seen{};
    std::size_t j = i;
    for (; j < events.size() && events[j].pulse == pulse; ++j) {
      require(j == i || events[j].pulse >= events[j - 1].pulse,
              ErrorCode::kInvalidArgument, "histogram: events not sorted");
      seen[index_of(events[j].channel)] = &events[j];
    }
    require(j >= events.size() || events[j].pulse > pulse,
            ErrorCode::kInvalidArgument, "histogram: events not sorted by pulse");
    std::vector<std::int64_t> key;
    key.reserve(channels.size());
    bool all = true;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const TimeTagEvent* e = seen[index_of(channels[c])];
      if (e == nullptr) {
        all = false;
        break;
      }
      key.push_back(h.axes[c].pixel_of_tag(e->tag));
    }
    if (all) ++h.counts[key];
    i = j;
  }
  return h;
}

FringeTrace ScanTrace::conditional() const {
  FringeTrace t;
  t.tau = tau;
  t.meta = meta;
  t.meta.emplace_back("quantity", "fourfold / herald");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double n2 = static_cast<double>(herald[i]);
    const double v = n2 > 0.0 ? static_cast<double>(fourfold[i]) / n2 : 0.0;
    t.value.push_back(v);
    t.error.push_back(n2 > 0.0 ? std::sqrt(std::max(v * (1.0 - v), 1.0 / n2) / n2) : 0.0);
  }
  return t;
}

FringeTrace ScanTrace::rate() const {
  FringeTrace t;
  t.tau = tau;
  t.meta = meta;
  t.meta.emplace_back("quantity", "fourfold per pulse");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double n = static_cast<double>(pulses[i]);
    const double k = static_cast<double>(fourfold[i]);
    t.value.push_back(k / n);
    t.error.push_back(std::sqrt(std::max(k, 1.0)) / n);
  }
  return t;
}

namespace {

void count_pulses(const std::vector<TimeTagEvent>& events,
                  const ExperimentConfig& cfg, const HeraldBins& bins,
                  std::uint64_t& herald, std::uint64_t& fourfold) {
  const PixelMap pc(cfg.tofs[0]);
  const PixelMap pd(cfg.tofs[1]);
  std::size_t i = 0;
  while (i < events.size()) {
    const std::uint64_t pulse = events[i].pulse;
    std::array<const TimeTagEvent*, 4> seen{};
    for (; i < events.size() && events[i].pulse == pulse; ++i) {
      seen[index_of(events[i].channel)] = &events[i];
    }
    if (seen[0] == nullptr || seen[1] == nullptr) continue;
    if (!bins.all_bins && (pc.pixel_of_tag(seen[0]->tag) != bins.j ||
                           pd.pixel_of_tag(seen[1]->tag) != bins.k)) {
      continue;
    }
    ++herald;
    if (seen[2] != nullptr && seen[3] != nullptr) ++fourfold;
  }
}

}  // namespace

ScanTrace scan(const ExperimentConfig& cfg, ScanAxis axis,
               const std::vector<double>& delays, const HeraldBins& bins) {
  ScanTrace s;
  s.meta = {{"axis", axis == ScanAxis::kSignal ? "tau_s_ps" : "tau_i_ps"},
            {"bins", bins.all_bins ? std::string("all")
                                   : fmt::format("{},{}", bins.j, bins.k)},
            {"seed", fmt::format("{}", cfg.seed)},
            {"pulses_per_point", fmt::format("{}", cfg.pulses)}};
  for (std::size_t i = 0; i < delays.size(); ++i) {
    ExperimentConfig c = cfg;
    (axis == ScanAxis::kSignal ? c.tau_s : c.tau_i) = delays[i];
    c.seed = splitmix64(cfg.seed + 0x51ED2701ULL * (i + 1));
    const EventStream ev = sample_fourfold(c);
    std::uint64_t n2 = 0, n4 = 0;
    count_pulses(ev.events, c, bins, n2, n4);
    s.tau.push_back(delays[i]);
    s.herald.push_back(n2);
    s.fourfold.push_back(n4);
    s.pulses.push_back(ev.summary.pulses);
  }
  return s;
}

FringeTrace subtract_background(const ScanTrace& signal,
                                const ScanTrace& blocked1,
                                const ScanTrace& blocked2, double scale1,
                                double scale2) {
  require(signal.tau == blocked1.tau && signal.tau == blocked2.tau,
          ErrorCode::kInvalidArgument,
          "subtract-background: delay axes do not match");
  const FringeTrace s = signal.rate();
  FringeTrace b1 = blocked1.rate();
  FringeTrace b2 = blocked2.rate();
  for (std::size_t i = 0; i < b1.value.size(); ++i) {
    b1.value[i] *= scale1;
    b1.error[i] *= scale1;
    b2.value[i] *= scale2;
    b2.error[i] *= scale2;
  }
  FringeTrace out;
  out.tau = s.tau;
  out.meta = signal.meta;
  out.meta.emplace_back("quantity", "fourfold per pulse, background removed");
  for (std::size_t i = 0; i < s.tau.size(); ++i) {
    out.value.push_back(s.value[i] - b1.value[i] - b2.value[i]);
    out.error.push_back(std::sqrt(s.error[i] * s.error[i] + b1.error[i] * b1.error[i] +
                                  b2.error[i] * b2.error[i]));
  }
  return out;
}

FringeTrace TwofoldCounts::fraction() const {
  FringeTrace t;
  t.tau = phase;
  t.meta = {{"quantity", "P_cc"}, {"axis", "pump_phase_rad"}};
  for (std::size_t i = 0; i < phase.size(); ++i) {
    const double n = static_cast<double>(plus[i] + minus[i]);
    const double v = n > 0.0 ? static_cast<double>(plus[i]) / n : 0.0;
    t.value.push_back(v);
    t.error.push_back(n > 0.0 ? std::sqrt(std::max(v * (1.0 - v), 1.0 / n) / n) : 0.0);
  }
  return t;
}

TwofoldCounts simulate_twofold(const SourcePair& sources,
                               const std::vector<double>& phases,
                               std::uint64_t pulses_per_phase,
                               std::uint64_t seed, int threads) {
  const PairSampler s1(sources.source1);
  const PairSampler s2(sources.source2);
  TwofoldCounts out;
  out.phase = phases;
  out.plus.assign(phases.size(), 0);
  out.minus.assign(phases.size(), 0);
  out.pulses_per_phase = pulses_per_phase;
  parallel_chunks(phases.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::uint64_t phase_seed = splitmix64(seed + 0x2F0F0ULL * (i + 1));
      const cplx ph = std::polar(1.0, phases[i]);
      for (std::uint64_t p = 0; p < pulses_per_phase; ++p) {
        auto rng = pulse_rng(phase_seed, p);
        const bool first = uniform(rng) < 0.5;
        const auto [w, om] = first ? s1(rng) : s2(rng);
        const cplx f1 = sources.source1(w, om);
        const cplx f2 = sources.source2(w, om) * ph;
        const double den = std::norm(f1) + std::norm(f2);
        const double p_plus = den > 0.0 ? 0.5 * (1.0 + 2.0 * (std::conj(f1) * f2).real() / den) : 0.5;
        const bool plus_group = uniform(rng) < p_plus;
        const bool c_port = uniform(rng) < 0.5;
        if (!c_port) continue;
        if (plus_group) {
          ++out.plus[i];
        } else {
          ++out.minus[i];
        }
      }
    }
  });
  return out;
}

ScanTrace fourfold_phase_scan(const ExperimentConfig& cfg,
                              const std::vector<double>& phases) {
  ScanTrace s;
  s.meta = {{"axis", "pump_phase_rad"}, {"seed", fmt::format("{}", cfg.seed)}};
  for (std::size_t i = 0; i < phases.size(); ++i) {
    ExperimentConfig c = cfg;
    c.phase_mode = PhaseMode::kFixed;
    c.pump_phase = phases[i];
    c.seed = splitmix64(cfg.seed + 0x7A11ULL * (i + 1));
    const EventStream ev = sample_fourfold(c);
    std::uint64_t n2 = 0, n4 = 0;
    count_pulses(ev.events, c, HeraldBins{}, n2, n4);
    s.tau.push_back(phases[i]);
    s.herald.push_back(n2);
    s.fourfold.push_back(n4);
    s.pulses.push_back(ev.summary.pulses);
  }
  return s;
}

}  // namespace fsw
