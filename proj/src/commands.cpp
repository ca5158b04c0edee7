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


#include "commands.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <map>

#include "analysis.hpp"
#include "common.hpp"
#include "density.hpp"
#include "distinguishability.hpp"
#include "event_sim.hpp"
#include "heralding.hpp"
#include "instrument.hpp"
#include "io.hpp"
#include "jsa.hpp"
#include "observables_mixed.hpp"
#include "observables_pure.hpp"

namespace fsw {

namespace {

constexpr const char* kVersion = "1.0.0";

struct Ctx {
  const RunConfig& cfg;
  RunOptions opts;
  std::string command;
  std::string hash;
  OutputSet out;
  std::string summary;
  int threads = 1;

  Metadata meta(Metadata extra = {}) const {
    Metadata m = {{"command", command},
                  {"config_hash", hash},
                  {"seed", fmt::format("{}", cfg.integer("sim.seed"))}};
    m.insert(m.end(), extra.begin(), extra.end());
    return m;
  }
};

double lambda0(const RunConfig& c) { return c.real("source.lambda0"); }

// rad/ps per nm at the center wavelength.
double omega_per_nm(const RunConfig& c) {
  const double l = lambda0(c);
  return 2.0 * kPi * kSpeedOfLight / (l * l);
}

// Idler detuning of herald bin index n.
double bin_detuning(const RunConfig& c, std::int64_t n) {
  const double l = lambda0(c) + static_cast<double>(n) * c.real("herald.bin_nm");
  return omega_from_lambda(l) - omega_from_lambda(lambda0(c));
}

Jsa make_source(const RunConfig& c) {
  const GridSpec g{static_cast<std::size_t>(c.integer("grid.count")), c.real("grid.extent")};
  if (c.text("source.model") == "sinc") {
    SincModel m;
    m.pump_bandwidth = c.real("source.pump_bandwidth");
    m.slope_s = c.real("source.slope_s");
    m.slope_i = c.real("source.slope_i");
    m.length = c.real("source.length");
    return Jsa::sinc(m, lambda0(c), g);
  }
  GaussianModel m;
  m.sigma_s = c.real("source.sigma_s");
  m.sigma_i = c.real("source.sigma_i");
  m.alpha = c.real("source.alpha");
  m.shift_s = c.real("source.shift_s");
  m.shift_i = c.real("source.shift_i");
  return Jsa::gaussian(m, lambda0(c), g);
}

Jsa make_source2(const RunConfig& c, const Jsa& f) {
  const double ds = c.real("source2.ds");
  const double di = c.real("source2.di");
  if (ds == 0.0 && di == 0.0) return f;
  require(f.is_gaussian(), ErrorCode::kConfig,
          "config: source2.ds: translations need source.model = gaussian");
  return f.translated(ds, di);
}

TofsConfig make_tofs(const RunConfig& c, const std::string& key) {
  TofsConfig t = c.text(key) == "spool" ? TofsConfig::spool() : TofsConfig::cfbg();
  t.lambda0 = lambda0(c);
  t.jitter_fwhm = c.real("instrument.jitter_fwhm");
  t.validate();
  return t;
}

ExperimentConfig make_experiment(const RunConfig& c, const Jsa& f1, const Jsa& f2, int threads) {
  ExperimentConfig e(f1, f2);
  e.eta1 = c.real("sim.eta1");
  e.eta2 = c.real("sim.eta2");
  e.double_pairs = c.flag("sim.double_pairs");
  e.tau_s = c.real("sim.tau_s");
  e.tau_i = c.real("sim.tau_i");
  e.phase_mode = c.text("sim.phase_mode") == "fixed" ? PhaseMode::kFixed : PhaseMode::kAveraged;
  e.pump_phase = c.real("sim.pump_phase");
  const TofsConfig idler = make_tofs(c, "instrument.idler");
  const TofsConfig signal = make_tofs(c, "instrument.signal");
  e.tofs = {idler, idler, signal, signal};
  e.efficiency.fill(c.real("instrument.efficiency"));
  e.apply_insertion_loss = c.flag("instrument.apply_insertion_loss");
  e.pulses = static_cast<std::uint64_t>(c.integer("sim.pulses"));
  e.seed = static_cast<std::uint64_t>(c.integer("sim.seed"));
  e.threads = threads;
  e.validate();
  return e;
}

std::string indexed(const std::string& base, std::size_t i, std::size_t n) {
  return n == 1 ? base + ".tsv" : fmt::format("{}_{:03}.tsv", base, i);
}

std::string fit_report(const FringeFit& f, const Metadata& extra) {
  std::string s;
  for (const auto& [k, v] : extra) s += fmt::format("{} = {}\n", k, v);
  s += fmt::format("model = {}\n", fit_model_name(f.model));
  s += fmt::format("converged = {}\n", f.converged);
  s += fmt::format("baseline = {}\n", fmt_num(f.baseline));
  s += fmt::format("visibility = {}\n", fmt_num(f.visibility));
  s += fmt::format("frequency = {}\n", fmt_num(f.frequency));
  s += fmt::format("phase = {}\n", fmt_num(f.phase));
  s += fmt::format("width = {}\n", fmt_num(f.width));
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    s += fmt::format("param{} = {} +- {}\n", i, fmt_num(f.params[i]), fmt_num(f.errors[i]));
  }
  s += fmt::format("chi2 = {}\ndof = {}\n", fmt_num(f.chi2), f.dof);
  s += fmt::format("peak = {} +- {}\n", fmt_num(f.peak), fmt_num(f.peak_error));
  s += fmt::format("witness = {}\n", f.witness);
  return s;
}

std::vector<double> tau_i_values(const RunConfig& c) { return c.list("delay.tau_i"); }

// Runs fn(i) for every index on the worker pool; results go to per-index
// slots so the output never depends on scheduling.
void for_each_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  parallel_chunks(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

void cmd_jsa(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  Map2D m;
  m.x_name = "omega_s";
  m.y_name = "omega_i";
  m.x = f.signal_grid().detunings();
  m.y = f.idler_grid().detunings();
  m.values = f.samples().cwiseAbs2();
  m.meta = x.meta({{"quantity", "|f(omega_s, omega_i)|^2"}, {"source", f.describe()}});
  x.out.add("jsa.tsv", format_map(m));
  const Eigen::VectorXd ms = signal_marginal(f);
  const Eigen::VectorXd mi = idler_marginal(f);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    rows.push_back({m.x[i], ms(static_cast<Eigen::Index>(i)), m.y[i],
                    mi(static_cast<Eigen::Index>(i))});
  }
  x.out.add("marginals.tsv",
            format_table(x.meta({{"quantity", "marginal intensities"}}),
                         {"omega_s", "rho_s", "omega_i", "rho_i"}, rows));
  x.summary = fmt::format("jsa: {} x {} grid, {}", m.x.size(), m.y.size(), f.describe());
}

void cmd_schmidt(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const SchmidtResult r = schmidt_decompose(f);
  const double ws = composite_resolution_sigma_nm(make_tofs(x.cfg, "instrument.signal")) *
                    omega_per_nm(x.cfg);
  const double wi = composite_resolution_sigma_nm(make_tofs(x.cfg, "instrument.idler")) *
                    omega_per_nm(x.cfg);
  const double kb = blurred_schmidt_number(f, ws, wi);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index n = 0; n < r.lambdas.size() && n < 64; ++n) {
    rows.push_back({static_cast<double>(n), r.lambdas(n), r.lambdas(n) * r.lambdas(n)});
  }
  Metadata extra = {{"K", fmt_num(r.schmidt_number)}, {"K_blurred", fmt_num(kb)},
                    {"blur_s", fmt_num(ws)}, {"blur_i", fmt_num(wi)}};
  if (f.is_gaussian()) extra.emplace_back("K_analytic", fmt_num(f.gaussian_params().schmidt_number()));
  x.out.add("schmidt.tsv", format_table(x.meta(extra), {"n", "lambda", "lambda_sq"}, rows));
  x.summary = fmt::format("K = {:.6f}\nK_blurred = {:.6f}", r.schmidt_number, kb);
}

void cmd_pjk_map(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto taus = tau_i_values(x.cfg);
  std::vector<Map2D> maps(taus.size());
  for_each_index(taus.size(), x.threads, [&](std::size_t i) { maps[i] = pjk_map(f, taus[i]); });
  for (std::size_t i = 0; i < taus.size(); ++i) {
    maps[i].meta = x.meta({{"quantity", "p_jk"}, {"tau_i_ps", fmt_num(taus[i])}});
    x.out.add(indexed("pjk_map", i, taus.size()), format_map(maps[i]));
  }
  x.summary = fmt::format("pjk-map: {} map(s)", taus.size());
}

HeraldedBellState bins_state(const Ctx& x, const Jsa& f, double tau_i) {
  return herald(f, bin_detuning(x.cfg, x.cfg.integer("herald.j")),
                bin_detuning(x.cfg, x.cfg.integer("herald.k")), tau_i);
}

Metadata bins_meta(const Ctx& x) {
  const auto j = x.cfg.integer("herald.j");
  const auto k = x.cfg.integer("herald.k");
  return {{"bins", fmt::format("{},{}", j, k)},
          {"omega_j", fmt_num(bin_detuning(x.cfg, j))},
          {"omega_k", fmt_num(bin_detuning(x.cfg, k))}};
}

void cmd_herald_jsi(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto taus = tau_i_values(x.cfg);
  std::vector<Map2D> maps(taus.size());
  std::vector<HeraldedBellState> states(taus.size());
  for_each_index(taus.size(), x.threads, [&](std::size_t i) {
    states[i] = bins_state(x, f, taus[i]);
    maps[i] = heralded_jsi(f, states[i]);
  });
  for (std::size_t i = 0; i < taus.size(); ++i) {
    Metadata extra = bins_meta(x);
    extra.insert(extra.end(), {{"quantity", "F_jk"},
                               {"tau_i_ps", fmt_num(taus[i])},
                               {"p_jk", fmt_num(states[i].p)},
                               {"C_jk", fmt_num(states[i].norm_c)},
                               {"theta", fmt_num(states[i].theta)}});
    maps[i].meta = x.meta(extra);
    x.out.add(indexed("herald_jsi", i, taus.size()), format_map(maps[i]));
  }
  x.summary = fmt::format("herald-jsi: p_jk = {}", fmt_num(states[0].p));
}

void cmd_summed_jsi(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto taus = tau_i_values(x.cfg);
  std::vector<Map2D> maps(taus.size());
  for_each_index(taus.size(), x.threads, [&](std::size_t i) { maps[i] = summed_jsi(f, taus[i]); });
  for (std::size_t i = 0; i < taus.size(); ++i) {
    maps[i].meta = x.meta({{"quantity", "F"}, {"tau_i_ps", fmt_num(taus[i])}});
    x.out.add(indexed("summed_jsi", i, taus.size()), format_map(maps[i]));
  }
  x.summary = fmt::format("summed-jsi: {} map(s)", taus.size());
}

// |omega_j - omega_k| of the heralded signal modes: the fringe frequency in
// tau_S for the herald bins.
double signal_separation(const Ctx& x, const Jsa& f) {
  const HeraldedBellState s = bins_state(x, f, 0.0);
  return std::abs(s.mode_j.center - s.mode_k.center);
}

// P_jk(tau_S) for every tau_I, optionally fitted.
struct FringeSet {
  std::vector<double> tau_i;
  std::vector<FringeTrace> traces;
  std::vector<FringeFit> fits;
};

FringeSet compute_fringes(Ctx& x, bool fit) {
  const Jsa f = make_source(x.cfg);
  FringeSet s;
  s.tau_i = tau_i_values(x.cfg);
  const auto& tau_s = x.cfg.list("delay.tau_s");
  s.traces.resize(s.tau_i.size());
  s.fits.resize(s.tau_i.size());
  const double nu = signal_separation(x, f);
  for_each_index(s.tau_i.size(), x.threads, [&](std::size_t i) {
    s.traces[i] = fringes_pjk(f, bins_state(x, f, s.tau_i[i]), tau_s);
    if (fit && tau_s.size() >= 8) {
      FitOptions o;
      o.frequency_guess = nu;
      s.fits[i] = fit_fringes(s.traces[i],
                              s.tau_i[i] == 0.0 ? FitModel::kFarBin : FitModel::kDelayed, o);
    }
  });
  return s;
}

std::string fringe_table(const Ctx& x, const FringeSet& s, const std::string& quantity) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.tau_i.size(); ++i) {
    for (std::size_t t = 0; t < s.traces[i].tau.size(); ++t) {
      rows.push_back({s.tau_i[i], s.traces[i].tau[t], s.traces[i].value[t]});
    }
  }
  Metadata extra = bins_meta(x);
  extra.emplace_back("quantity", quantity);
  return format_table(x.meta(extra), {"tau_i_ps", "tau_s_ps", quantity}, rows);
}

void cmd_fringes(Ctx& x) {
  const FringeSet s = compute_fringes(x, x.opts.emit_fit);
  x.out.add("fringes.tsv", fringe_table(x, s, "P_jk"));
  const double nu = signal_separation(x, make_source(x.cfg));
  x.summary = fmt::format("fringes: {} trace(s), heralded |omega_j - omega_k| = {} rad/ps",
                          s.tau_i.size(), fmt_num(nu));
  if (!x.opts.emit_fit) return;
  std::string report;
  for (std::size_t i = 0; i < s.tau_i.size(); ++i) {
    Metadata extra = bins_meta(x);
    extra.emplace_back("tau_i_ps", fmt_num(s.tau_i[i]));
    extra.emplace_back("expected_frequency", fmt_num(nu));
    report += (i ? "\n" : "") + fit_report(s.fits[i], extra);
  }
  x.out.add("fringes_fit.txt", report);
  x.summary += fmt::format("\nfitted frequency = {} rad/ps, visibility = {}",
                           fmt_num(s.fits[0].frequency), fmt_num(s.fits[0].visibility));
}

void cmd_waterfall(Ctx& x) {
  const FringeSet s = compute_fringes(x, true);
  Map2D m;
  m.x_name = "tau_i";
  m.y_name = "tau_s";
  m.x = s.tau_i;
  m.y = x.cfg.list("delay.tau_s");
  m.values.resize(static_cast<Eigen::Index>(m.x.size()), static_cast<Eigen::Index>(m.y.size()));
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    for (std::size_t t = 0; t < m.y.size(); ++t) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = s.traces[i].value[t];
    }
  }
  Metadata extra = bins_meta(x);
  extra.emplace_back("quantity", "P_jk");
  m.meta = x.meta(extra);
  x.out.add("waterfall.tsv", format_map(m));
  const Jsa f = make_source(x.cfg);
  const bool gauss = f.is_gaussian();
  const double nu = signal_separation(x, f);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.tau_i.size(); ++i) {
    const FringeFit& fit = s.fits[i];
    // Far-bin prediction of the fringe offset, nu tau_I'.
    const double predicted =
        gauss ? std::remainder(nu * scaled_idler_delay(f.gaussian_params(), s.tau_i[i]), 2.0 * kPi)
              : NAN;
    const double phase = fit.model == FitModel::kDelayed ? fit.phase : 0.0;
    const double err = fit.model == FitModel::kDelayed && fit.errors.size() > 4 ? fit.errors[4] : 0.0;
    rows.push_back({s.tau_i[i], phase, err, predicted, fit.visibility, fit.frequency});
  }
  x.out.add("waterfall_phase.tsv",
            format_table(x.meta({{"quantity", "fitted fringe phase"}}),
                         {"tau_i_ps", "phase", "phase_error", "phase_far_bin", "visibility",
                          "frequency"},
                         rows));
  x.summary = fmt::format("waterfall: {} x {} map", m.x.size(), m.y.size());
}

void cmd_peak(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto taus = tau_i_values(x.cfg);
  const auto& tau_s = x.cfg.list("delay.tau_s");
  std::vector<Map2D> maps(taus.size());
  for_each_index(taus.size(), x.threads,
                 [&](std::size_t i) { maps[i] = peak2d(f, tau_s, {taus[i]}); });
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t t = 0; t < tau_s.size(); ++t) {
      rows.push_back({taus[i], tau_s[t], maps[i].values(static_cast<Eigen::Index>(t), 0)});
    }
  }
  x.out.add("peak.tsv", format_table(x.meta({{"quantity", "P"}}), {"tau_i_ps", "tau_s_ps", "P"}, rows));
  if (x.opts.emit_fit) {
    std::string report;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      FringeTrace t;
      t.tau = tau_s;
      for (std::size_t k = 0; k < tau_s.size(); ++k) {
        t.value.push_back(maps[i].values(static_cast<Eigen::Index>(k), 0));
      }
      const FringeFit fit = fit_fringes(t, FitModel::kEnvelope);
      report += (i ? "\n" : "") + fit_report(fit, {{"tau_i_ps", fmt_num(taus[i])}});
    }
    x.out.add("peak_fit.txt", report);
  }
  x.summary = fmt::format("peak: {} trace(s)", taus.size());
}

void cmd_peak2d(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto taus = tau_i_values(x.cfg);
  const auto& tau_s = x.cfg.list("delay.tau_s");
  // One column per worker slot keeps the map independent of scheduling.
  std::vector<Map2D> cols(taus.size());
  for_each_index(taus.size(), x.threads,
                 [&](std::size_t i) { cols[i] = peak2d(f, tau_s, {taus[i]}); });
  Map2D m = cols[0];
  m.y = taus;
  m.values.resize(static_cast<Eigen::Index>(tau_s.size()), static_cast<Eigen::Index>(taus.size()));
  for (std::size_t i = 0; i < taus.size(); ++i) {
    m.values.col(static_cast<Eigen::Index>(i)) = cols[i].values.col(0);
  }
  m.meta = x.meta({{"quantity", "P(tau_s, tau_i)"}});
  x.out.add("peak2d.tsv", format_map(m));
  x.summary = fmt::format("peak2d: {} x {} map", tau_s.size(), taus.size());
}

void cmd_simulate(Ctx& x) {
  const Jsa f1 = make_source(x.cfg);
  const Jsa f2 = make_source2(x.cfg, f1);
  const ExperimentConfig e = make_experiment(x.cfg, f1, f2, x.threads);
  const EventStream ev = sample_fourfold(e);
  std::string tags = format_metadata(x.meta({{"quantity", "time tags"},
                                             {"pulses", fmt::format("{}", e.pulses)},
                                             {"tdc_bin_ps", fmt_num(e.tofs[0].tdc_bin)}}));
  tags += "pulse\tchannel\ttag\n";
  for (const auto& t : ev.events) {
    tags += fmt::format("{}\t{}\t{}\n", t.pulse, channel_name(t.channel), t.tag);
  }
  x.out.add("tags.tsv", std::move(tags));
  const double window = x.cfg.real("sim.window_ps");
  const auto two = histogram(ev.events, e, {Channel::kC, Channel::kD}, window);
  const auto four = histogram(ev.events, e, {Channel::kC, Channel::kD, Channel::kX, Channel::kY},
                              window)
                        .marginal({Channel::kC, Channel::kD});
  std::string co = format_metadata(x.meta({{"quantity", "coincidences by idler pixel"}}));
  co += "pixel_c\tpixel_d\ttwofold\tfourfold\n";
  for (const auto& [key, n] : two.counts) {
    const auto it = four.counts.find(key);
    co += fmt::format("{}\t{}\t{}\t{}\n", key[0], key[1], n, it == four.counts.end() ? 0 : it->second);
  }
  x.out.add("coincidences.tsv", std::move(co));
  const char* names[4] = {"c", "d", "x", "y"};
  for (int ch = 0; ch < 4; ++ch) {
    std::vector<std::vector<double>> rows;
    for (const auto& [p, l] : calibration_table(e.tofs[static_cast<std::size_t>(ch)])) {
      rows.push_back({static_cast<double>(p), l});
    }
    x.out.add(fmt::format("calibration_{}.tsv", names[ch]),
              format_table(x.meta({{"channel", names[ch]},
                                   {"offset_bins", fmt::format("{}", e.tofs[static_cast<std::size_t>(ch)].offset_bins())}}),
                           {"pixel", "lambda_nm"}, rows));
  }
  const auto& s = ev.summary;
  const std::string sum = fmt::format(
      "pulses = {}\nswap_pulses = {}\ndouble1_pulses = {}\ndouble2_pulses = {}\n"
      "window_losses = {}\nefficiency_losses = {}\nmerged_clicks = {}\nevents = {}\n"
      "twofold = {}\nfourfold = {}\n",
      s.pulses, s.class_counts[0], s.class_counts[1], s.class_counts[2], s.window_losses,
      s.efficiency_losses, s.merged_clicks, ev.events.size(), two.total(), four.total());
  x.out.add("simulate_summary.txt", sum);
  x.summary = fmt::format("simulate: {} events, {} fourfold", ev.events.size(), four.total());
}

void cmd_subtract_background(Ctx& x) {
  require(x.cfg.flag("sim.double_pairs"), ErrorCode::kConfig,
          "config: sim.double_pairs: background subtraction needs double pairs");
  const Jsa f1 = make_source(x.cfg);
  const Jsa f2 = make_source2(x.cfg, f1);
  const ExperimentConfig e = make_experiment(x.cfg, f1, f2, x.threads);
  ExperimentConfig b1 = e;
  b1.eta1 = 0.0;
  b1.seed = e.seed ^ 0xB10C1ULL;
  ExperimentConfig b2 = e;
  b2.eta2 = 0.0;
  b2.seed = e.seed ^ 0xB10C2ULL;
  require(e.eta1 > 0.0 && e.eta2 > 0.0, ErrorCode::kConfig,
          "config: sim.eta1: both sources must be on for background subtraction");
  HeraldBins bins;
  bins.all_bins = x.cfg.flag("sim.all_bins");
  const PixelMap pm(e.tofs[0]);
  bins.j = pm.pixel_of_wavelength(lambda0(x.cfg) + x.cfg.integer("herald.j") * x.cfg.real("herald.bin_nm"));
  bins.k = pm.pixel_of_wavelength(lambda0(x.cfg) + x.cfg.integer("herald.k") * x.cfg.real("herald.bin_nm"));
  const auto& delays = x.cfg.list("sim.scan_tau");
  const ScanTrace all = scan(e, ScanAxis::kSignal, delays, bins);
  const ScanTrace s1 = scan(b1, ScanAxis::kSignal, delays, bins);
  const ScanTrace s2 = scan(b2, ScanAxis::kSignal, delays, bins);
  const double k1 = b1.emission_weight() / e.emission_weight();
  const double k2 = b2.emission_weight() / e.emission_weight();
  const FringeTrace net = subtract_background(all, s1, s2, k1, k2);
  const FringeTrace ra = all.rate();
  FringeTrace r1 = s1.rate(), r2 = s2.rate();
  for (std::size_t i = 0; i < delays.size(); ++i) {
    r1.value[i] *= k1;
    r1.error[i] *= k1;
    r2.value[i] *= k2;
    r2.error[i] *= k2;
  }
  std::vector<std::vector<double>> rows;
  double frac_sum = 0.0;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double frac1 = ra.value[i] > 0.0 ? r1.value[i] / ra.value[i] : 0.0;
    const double frac2 = ra.value[i] > 0.0 ? r2.value[i] / ra.value[i] : 0.0;
    frac_sum += frac1 + frac2;
    rows.push_back({delays[i], ra.value[i], ra.error[i], r1.value[i], r1.error[i], r2.value[i],
                    r2.error[i], net.value[i], net.error[i], frac1, frac2});
  }
  Metadata bm = x.meta({{"block1_scale", fmt_num(k1)}, {"block2_scale", fmt_num(k2)}});
  bm.insert(bm.end(), all.meta.begin(), all.meta.end());
  x.out.add("background.tsv",
            format_table(bm, {"tau_s_ps", "rate_all", "error_all", "rate_block1",
                                    "error_block1", "rate_block2", "error_block2",
                                    "rate_net", "error_net", "fraction1", "fraction2"},
                         rows));
  FringeTrace n = net;
  Metadata m = x.meta();
  m.insert(m.end(), n.meta.begin(), n.meta.end());
  n.meta = m;
  x.out.add("subtracted.tsv", format_trace(n, "tau_s_ps", "rate"));
  if (x.opts.emit_fit && delays.size() >= 6) {
    const FringeFit fit = fit_fringes(n, FitModel::kEnvelope);
    x.out.add("subtracted_fit.txt", fit_report(fit, {}));
  }
  x.summary = fmt::format("subtract-background: mean background fraction = {}",
                          fmt_num(frac_sum / static_cast<double>(delays.size())));
}

FilterShape filter_shape(const RunConfig& c) {
  const std::string& s = c.text("filter.shape");
  if (s == "gaussian") return FilterShape::kGaussian;
  if (s == "rectgauss") return FilterShape::kRectGauss;
  return FilterShape::kRect;
}

void cmd_purity(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto& widths = x.cfg.list("filter.widths_nm");
  const double oj = bin_detuning(x.cfg, x.cfg.integer("herald.j"));
  const double ok = bin_detuning(x.cfg, x.cfg.integer("herald.k"));
  const double tau_i = tau_i_values(x.cfg).front();
  const int ps = static_cast<int>(x.cfg.integer("filter.per_segment"));
  const FilterShape shape = filter_shape(x.cfg);
  const double blur = x.cfg.real("filter.blur");
  std::vector<std::vector<double>> rows(widths.size());
  for_each_index(widths.size(), x.threads, [&](std::size_t i) {
    const double w = widths[i] * omega_per_nm(x.cfg);
    const SpectralFilter l{oj, w, shape, blur};
    const SpectralFilter m{ok, w, shape, blur};
    const MixedHeraldedState s = mixed_heralded_state(f, l, m, tau_i, ps);
    rows[i] = {widths[i], s.purity, s.p_lm, hom_purity_bound(f, l, l, ps),
               hom_purity_bound(f, m, m, ps)};
  });
  const double full = hom_purity_bound_full_band(f);
  Metadata extra = bins_meta(x);
  extra.insert(extra.end(), {{"filter_shape", x.cfg.text("filter.shape")},
                             {"filter_blur", fmt_num(blur)},
                             {"band_centers", fmt::format("{},{}", fmt_num(oj), fmt_num(ok))},
                             {"tau_i_ps", fmt_num(tau_i)},
                             {"hom_bound_full_band", fmt_num(full)}});
  x.out.add("purity.tsv", format_table(x.meta(extra), {"width_nm", "purity", "p_lm", "hom_bound_j", "hom_bound_k"}, rows));
  x.summary = fmt::format("purity: full-band HOM bound = {}", fmt_num(full));
}

PortPairing parse_pairing(const std::string& s) {
  if (s == "cy") return PortPairing::kCY;
  if (s == "dx") return PortPairing::kDX;
  if (s == "dy") return PortPairing::kDY;
  return PortPairing::kCX;
}

void cmd_distinguishability(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  require(f.is_gaussian(), ErrorCode::kConfig,
          "config: source.model: distinguishability needs the gaussian model");
  const GaussianModel& g = f.gaussian_params();
  double us = x.cfg.real("dist.direction_s");
  double ui = x.cfg.real("dist.direction_i");
  const double len = std::hypot(us, ui);
  us /= len;
  ui /= len;
  const double target = x.cfg.real("dist.overlap");
  const double l = target < 1.0 ? translation_for_overlap(g, us, ui, target) : 0.0;
  const SourcePair pair = translated_pair(f, l * us, l * ui);
  const cplx o = source_overlap(pair);
  const auto& phases = x.cfg.list("dist.phases");
  const PortPairing pairing = parse_pairing(x.cfg.text("dist.pairing"));
  const FringeTrace analytic = twofold_phase_fringes(pair, phases, pairing);
  const TwofoldCounts counts =
      simulate_twofold(pair, phases, static_cast<std::uint64_t>(x.cfg.integer("dist.pulses_per_phase")),
                       static_cast<std::uint64_t>(x.cfg.integer("sim.seed")), x.threads);
  const FringeTrace mc = counts.fraction();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    rows.push_back({phases[i], analytic.value[i], mc.value[i], mc.error[i],
                    static_cast<double>(counts.plus[i]), static_cast<double>(counts.minus[i])});
  }
  Metadata extra = {{"overlap_re", fmt_num(o.real())}, {"overlap_im", fmt_num(o.imag())},
                    {"translation_s", fmt_num(l * us)}, {"translation_i", fmt_num(l * ui)},
                    {"pairing", x.cfg.text("dist.pairing")}};
  x.out.add("twofold.tsv", format_table(x.meta(extra),
                                        {"pump_phase", "P_cc_model", "P_cc_mc", "error_mc",
                                         "plus", "minus"},
                                        rows));
  const double oj = bin_detuning(x.cfg, x.cfg.integer("herald.j"));
  const double ok = bin_detuning(x.cfg, x.cfg.integer("herald.k"));
  const VjkResult v = vjk(pair, oj, ok);
  const double tau_i = tau_i_values(x.cfg).front();
  const FringeTrace ts = two_source_fringes(pair, oj, ok, tau_i, x.cfg.list("delay.tau_s"));
  Metadata vm = bins_meta(x);
  vm.insert(vm.end(), {{"factor_j", fmt_num(std::abs(v.factor_j))},
                       {"factor_k", fmt_num(std::abs(v.factor_k))},
                       {"V_jk", fmt_num(v.vjk)},
                       {"tau_i_ps", fmt_num(tau_i)},
                       {"quantity", "P_jk two sources"}});
  FringeTrace tsm = ts;
  tsm.meta = x.meta(vm);
  x.out.add("two_source_fringes.tsv", format_trace(tsm, "tau_s_ps", "P_jk"));
  const cplx kappa = double_pair_coherence(pair);
  FringeTrace ff = fourfold_phase_fringes(pair, x.cfg.real("sim.eta1"), x.cfg.real("sim.eta2"), phases);
  ff.meta = x.meta({{"quantity", "double-pair fourfold probability"},
                    {"kappa_abs", fmt_num(std::abs(kappa))},
                    {"kappa_arg", fmt_num(std::arg(kappa))}});
  x.out.add("fourfold_phase.tsv", format_trace(ff, "pump_phase", "P4"));
  std::string summary = fmt::format("distinguishability: overlap = {}, V_jk = {}", fmt_num(std::abs(o)),
                                    fmt_num(v.vjk));
  if (phases.size() >= 6) {
    const FringeFit fit = fit_fringes(mc, FitModel::kSinusoid);
    summary += fmt::format(", fitted two-fold visibility = {} +- {}", fmt_num(fit.visibility),
                           fmt_num(fit.errors.size() > 1 ? fit.errors[1] : 0.0));
    if (x.opts.emit_fit) x.out.add("twofold_fit.txt", fit_report(fit, {{"overlap", fmt_num(std::abs(o))}}));
  }
  x.summary = summary;
}

void cmd_orthomodes(Ctx& x) {
  const Jsa f = make_source(x.cfg);
  const auto lo = x.cfg.integer("ortho.bin_min");
  const auto hi = x.cfg.integer("ortho.bin_max");
  const double tau_i = tau_i_values(x.cfg).front();
  std::vector<std::pair<int, int>> labels;
  for (auto j = lo; j <= hi; ++j) {
    for (auto k = lo; k <= hi; ++k) {
      if (j != k) labels.emplace_back(static_cast<int>(j), static_cast<int>(k));
    }
  }
  std::vector<LabeledMap> maps(labels.size());
  for_each_index(labels.size(), x.threads, [&](std::size_t i) {
    const auto [j, k] = labels[i];
    const HeraldedBellState s = herald(f, bin_detuning(x.cfg, j), bin_detuning(x.cfg, k), tau_i);
    maps[i] = {j, k, heralded_jsi(f, s)};
  });
  const auto modes = symmetrize_jsi(maps);
  const OverlapNorm norm = x.cfg.text("ortho.norm") == "unitsum" ? OverlapNorm::kUnitSum : OverlapNorm::kCosine;
  const OverlapMatrix om = overlap_matrix(modes, norm);
  const double thr = x.cfg.real("ortho.threshold");
  const auto subsets = select_orthogonal(om, thr);
  auto label = [&](std::size_t i) { return fmt::format("{},{}", om.labels[i].first, om.labels[i].second); };
  std::string mat = format_metadata(x.meta({{"quantity", "mode overlap"}, {"norm", x.cfg.text("ortho.norm")}}));
  mat += "mode";
  for (std::size_t i = 0; i < om.labels.size(); ++i) mat += "\t" + label(i);
  mat += "\n";
  for (std::size_t i = 0; i < om.labels.size(); ++i) {
    mat += label(i);
    for (std::size_t j = 0; j < om.labels.size(); ++j) {
      mat += "\t" + fmt_num(om.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    mat += "\n";
  }
  x.out.add("overlaps.tsv", mat);
  std::string sub = format_metadata(x.meta({{"threshold", fmt_num(thr)},
                                            {"subsets", fmt::format("{}", subsets.size())}}));
  std::size_t largest = 0;
  for (std::size_t n = 0; n < subsets.size(); ++n) {
    const auto& s = subsets[n];
    largest = std::max(largest, s.size());
    sub += fmt::format("subset {} size {}:", n, s.size());
    for (const auto i : s) sub += " " + label(i);
    sub += "\n";
    for (const auto a : s) {
      sub += "  " + label(a);
      for (const auto b : s) {
        sub += "\t" + fmt_num(om.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      }
      sub += "\n";
    }
  }
  x.out.add("subsets.txt", sub);
  x.summary = fmt::format("orthomodes: {} modes, {} subsets, largest size {}", om.labels.size(),
                          subsets.size(), largest);
}

using Handler = void (*)(Ctx&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"jsa", cmd_jsa},
      {"schmidt", cmd_schmidt},
      {"pjk-map", cmd_pjk_map},
      {"herald-jsi", cmd_herald_jsi},
      {"summed-jsi", cmd_summed_jsi},
      {"fringes", cmd_fringes},
      {"peak", cmd_peak},
      {"peak2d", cmd_peak2d},
      {"waterfall", cmd_waterfall},
      {"simulate", cmd_simulate},
      {"subtract-background", cmd_subtract_background},
      {"purity", cmd_purity},
      {"distinguishability", cmd_distinguishability},
      {"orthomodes", cmd_orthomodes},
  };
  return h;
}

}  // namespace

const std::vector<CommandInfo>& command_list() {
  static const std::vector<CommandInfo> list = {
      {"jsa", "joint spectral intensity and marginals"},
      {"schmidt", "Schmidt coefficients, K and detector-blurred K"},
      {"pjk-map", "herald probability p_jk over idler detunings"},
      {"herald-jsi", "heralded joint spectral intensity F_jk for --bins"},
      {"summed-jsi", "herald-summed joint spectral intensity F"},
      {"fringes", "coincidence fringes P_jk(tau_s) for --bins"},
      {"peak", "herald-summed coincidence peak P(tau_s)"},
      {"peak2d", "P(tau_s, tau_i) map"},
      {"waterfall", "P_jk over (tau_i, tau_s) with fitted phases"},
      {"simulate", "Monte Carlo time tags, coincidences and calibration"},
      {"subtract-background", "delay scans with each source blocked, background removed"},
      {"purity", "mixed-state purity and HOM purity bound vs filter width"},
      {"distinguishability", "two-fold pump-phase fringes and V_jk for translated sources"},
      {"orthomodes", "heralded-mode overlaps and orthogonal subsets"},
  };
  return list;
}

RunResult run_command(const std::string& name, const RunConfig& cfg, const RunOptions& opts) {
  const auto it = handlers().find(name);
  require(it != handlers().end(), ErrorCode::kInvalidArgument,
          fmt::format("unknown command '{}'", name));
  cfg.validate();
  const std::string dir = cfg.text("out").empty() ? std::string("out") : cfg.text("out");
  Ctx x{cfg, opts, name, cfg.hash(), OutputSet(dir), "", static_cast<int>(cfg.integer("threads"))};
  it->second(x);
  std::string manifest = fmt::format("command = {}\nversion = {}\nconfig_hash = {}\nseed = {}\nemit_fit = {}\n",
                                     name, kVersion, x.hash, cfg.integer("sim.seed"), opts.emit_fit);
  for (const auto& [file, content] : x.out.files()) {
    manifest += fmt::format("file = {} sha256:{}\n", file, sha256_hex(content));
  }
  manifest += "# canonical configuration\n";
  std::string canon = cfg.canonical(true);
  std::size_t pos = 0;
  while (pos < canon.size()) {
    const auto nl = canon.find('\n', pos);
    manifest += "# " + canon.substr(pos, nl - pos) + "\n";
    pos = nl + 1;
  }
  x.out.add(fmt::format("manifest_{}.txt", name), manifest);
  RunResult r;
  r.files = x.out.commit();
  r.summary = x.summary;
  return r;
}

}  // namespace fsw
