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

#ifndef FOURSWAP_SRC_ANALYSIS_HPP_
#define FOURSWAP_SRC_ANALYSIS_HPP_

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace fsw {

enum class FitModel {
  // B [1 + V exp(-t^2 / w^2) cos(nu t)]
  kFarBin,
  // B [1 + V exp(-t^2 / w^2) cos(nu t - phi)]
  kDelayed,
  // B [1 - V (2 (t - t0)^2 / w^2 - 1) exp(-t^2 / w^2)]
  kDegenerate,
  // B [1 + V exp(-t^2 / w^2)], no oscillation
  kEnvelope,
  // B [1 + V cos(nu t - phi)]
  kSinusoid,
};

std::string fit_model_name(FitModel m);

struct FringeFit {
  FitModel model = FitModel::kFarBin;
  double baseline = 0.0;
  double visibility = 0.0;
  double frequency = 0.0;  // rad per unit of the trace axis
  double phase = 0.0;      // rad, or t0 for kDegenerate
  double width = 0.0;      // envelope 1/e half width
  std::vector<double> params;
  std::vector<double> errors;  // one standard error per parameter
  double chi2 = 0.0;
  int dof = 0;
  bool converged = false;
  bool witness = false;  // fitted peak above the witness level by > 3 sigma
  double peak = 0.0;
  double peak_error = 0.0;
  std::string message;

  double evaluate(double t) const;
};

struct FitOptions {
  // Absolute level the fitted peak must exceed for the witness flag.
  double witness_level = 0.5;
  // Optional starting values; zero means estimate from the data.
  double frequency_guess = 0.0;
  double width_guess = 0.0;
  int restarts = 8;
};

double fit_model_value(FitModel m, const std::vector<double>& p, double t);

FringeFit fit_fringes(const FringeTrace& trace, FitModel model,
                      const FitOptions& opts = {});

// (max - min) / (max + min) of the fitted model over the trace span.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};
Estimate visibility(const FringeTrace& trace,
                    FitModel model = FitModel::kSinusoid);

// Peak-to-peak residual after a non-oscillating envelope fit.
double oscillation_amplitude(const FringeTrace& trace);

// Dominant nonzero angular frequency from the FFT of a uniformly sampled
// trace with its mean removed; returns the bin index as well.
struct SpectralPeak {
  std::size_t bin = 0;
  double angular_frequency = 0.0;
};
SpectralPeak dominant_frequency(const FringeTrace& trace);

struct ChiSquare {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
};
// Pearson test of counts against expectations; bins with expected < min
// are pooled into one.
ChiSquare chi_square_test(const std::vector<double>& observed,
                          const std::vector<double>& expected,
                          double min_expected = 5.0, int fitted_params = 0);

// Heralded JSI for herald bins (j, k).
struct LabeledMap {
  int j = 0;
  int k = 0;
  Map2D map;
};
// F_n = (F_jk + F_kj) / 2 for j < k, unit sum; maps missing their partner
// are used as they are.
std::vector<LabeledMap> symmetrize_jsi(const std::vector<LabeledMap>& maps);

enum class OverlapNorm { kCosine, kUnitSum };

struct OverlapMatrix {
  std::vector<std::pair<int, int>> labels;
  Eigen::MatrixXd values;
  OverlapNorm norm = OverlapNorm::kCosine;
};
OverlapMatrix overlap_matrix(const std::vector<LabeledMap>& modes,
                             OverlapNorm norm = OverlapNorm::kCosine);

// Greedy sweeps seeded at every mode; each returned subset is sorted by
// label and listed once.
std::vector<std::vector<std::size_t>> select_orthogonal(
    const OverlapMatrix& m, double threshold);

}  // namespace fsw

#endif  // FOURSWAP_SRC_ANALYSIS_HPP_
