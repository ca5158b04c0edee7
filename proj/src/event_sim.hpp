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

#ifndef FOURSWAP_SRC_EVENT_SIM_HPP_
#define FOURSWAP_SRC_EVENT_SIM_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "distinguishability.hpp"
#include "instrument.hpp"
#include "jsa.hpp"
#include "types.hpp"

namespace fsw {

// Output ports: idlers exit at c and d, signals at x and y.
enum class Channel : std::uint8_t { kC = 0, kD = 1, kX = 2, kY = 3 };
char channel_name(Channel c);

enum class PhaseMode { kAveraged, kFixed };

// Emission class of a pulse: one pair from each source, or two pairs from
// source 1 or source 2.
enum class EventClass : std::uint8_t { kSwap = 0, kDouble1 = 1, kDouble2 = 2 };

struct ExperimentConfig {
  ExperimentConfig(Jsa s1, Jsa s2);
  Jsa source1;
  Jsa source2;
  double eta1 = 1.0;
  double eta2 = 1.0;
  // False keeps only the one-pair-per-source term.
  bool double_pairs = true;
  double tau_s = 0.0;  // ps, signal arm 2
  double tau_i = 0.0;  // ps, idler arm 2
  PhaseMode phase_mode = PhaseMode::kAveraged;
  double pump_phase = 0.0;  // rad, kFixed only
  std::array<TofsConfig, 4> tofs;           // indexed by Channel
  std::array<double, 4> efficiency{1.0, 1.0, 1.0, 1.0};
  // Apply each channel's insertion loss as an extra survival factor.
  bool apply_insertion_loss = false;
  std::uint64_t pulses = 0;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
  // Normalized class probabilities for (swap, double 1, double 2).
  std::array<double, 3> class_weights() const;
  // Unnormalized total eta1 eta2 + eta1^2 / 4 + eta2^2 / 4 (double-pair
  // terms only when enabled). Every simulated pulse carries one emission, so
  // per-pulse rates of two configurations compare after scaling by the
  // ratio of these totals.
  double emission_weight() const;
};

struct TimeTagEvent {
  std::uint64_t pulse = 0;
  Channel channel = Channel::kC;
  std::int64_t tag = 0;
  EventClass truth = EventClass::kSwap;  // not exported
};

struct SimulationSummary {
  std::uint64_t pulses = 0;
  std::array<std::uint64_t, 3> class_counts{0, 0, 0};
  std::uint64_t window_losses = 0;
  std::uint64_t efficiency_losses = 0;
  std::uint64_t merged_clicks = 0;  // second photon in an already firing port
};

struct EventStream {
  std::vector<TimeTagEvent> events;  // sorted by (pulse, channel)
  SimulationSummary summary;
};

// Generator seeded from (seed, pulse); independent of scheduling.
std::mt19937_64 pulse_rng(std::uint64_t seed, std::uint64_t pulse);

EventStream sample_fourfold(const ExperimentConfig& cfg);

// Sparse n-fold coincidence counts keyed by the pixel of each listed
// channel.
struct CoincidenceHistogram {
  std::vector<Channel> channels;
  std::vector<PixelMap> axes;
  std::map<std::vector<std::int64_t>, std::uint64_t> counts;
  std::uint64_t total() const;
  // Sum over the listed channels that are not kept.
  CoincidenceHistogram marginal(const std::vector<Channel>& keep) const;
};

// Same-pulse coincidences among `channels`. The window only has to be at
// least one TDC bin of every listed channel.
CoincidenceHistogram histogram(const std::vector<TimeTagEvent>& events,
                               const ExperimentConfig& cfg,
                               const std::vector<Channel>& channels,
                               double window_ps);

// Count trace of a delay scan.
struct ScanTrace {
  std::vector<double> tau;            // scanned delay, ps
  std::vector<std::uint64_t> fourfold;
  std::vector<std::uint64_t> herald;  // c, d coincidences in the bins
  std::vector<std::uint64_t> pulses;
  Metadata meta;

  // Conditional frequency fourfold / herald with binomial errors.
  FringeTrace conditional() const;
  // Four-fold rate per pulse with Poisson errors.
  FringeTrace rate() const;
};

enum class ScanAxis { kSignal, kIdler };

// Herald bins in idler pixel units; `all_bins` ignores them.
struct HeraldBins {
  std::int64_t j = 0;
  std::int64_t k = 0;
  bool all_bins = true;
};

ScanTrace scan(const ExperimentConfig& cfg, ScanAxis axis,
               const std::vector<double>& delays, const HeraldBins& bins);

// Signal scan minus the two blocked-source scans, per-pulse rates with
// errors added in quadrature. Blocked rates are multiplied by scale1 and
// scale2, normally emission_weight(blocked) / emission_weight(full).
FringeTrace subtract_background(const ScanTrace& signal,
                                const ScanTrace& blocked1,
                                const ScanTrace& blocked2, double scale1 = 1.0,
                                double scale2 = 1.0);

// Two-fold pump-phase experiment with both sources coherent.
struct TwofoldCounts {
  std::vector<double> phase;
  std::vector<std::uint64_t> plus;   // (c, x) coincidences
  std::vector<std::uint64_t> minus;  // (c, y) coincidences
  std::uint64_t pulses_per_phase = 0;
  // plus / (plus + minus) with binomial errors.
  FringeTrace fraction() const;
};
TwofoldCounts simulate_twofold(const SourcePair& sources,
                               const std::vector<double>& phases,
                               std::uint64_t pulses_per_phase,
                               std::uint64_t seed, int threads = 1);

// Four-fold (c, d, x, y) count per pulse vs fixed pump phase.
ScanTrace fourfold_phase_scan(const ExperimentConfig& cfg,
                              const std::vector<double>& phases);

}  // namespace fsw

#endif  // FOURSWAP_SRC_EVENT_SIM_HPP_
