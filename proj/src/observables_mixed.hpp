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

#ifndef FOURSWAP_SRC_OBSERVABLES_MIXED_HPP_
#define FOURSWAP_SRC_OBSERVABLES_MIXED_HPP_

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "jsa.hpp"
#include "types.hpp"

namespace fsw {

enum class FilterShape {
  kRect,
  // Gaussian transmission with FWHM = width.
  kGaussian,
  // Rectangle of full width `width` convolved with a Gaussian of standard
  // deviation `blur` (TDC bin seen through detector jitter).
  kRectGauss,
};

// Intensity transmission |t(W)|^2 of one idler band.
struct SpectralFilter {
  double center = 0.0;  // rad/ps detuning
  double width = 0.0;   // rad/ps
  FilterShape shape = FilterShape::kRect;
  double blur = 0.0;    // rad/ps, kRectGauss only

  double transmission(double omega) const;
  // Interval outside which the transmission is negligible.
  std::pair<double, double> support() const;
};

// Contiguous bins of equal width with centers center + n width for
// n in [first, last].
std::vector<SpectralFilter> filter_bank(double center, double width, int first,
                                        int last,
                                        FilterShape shape = FilterShape::kRect,
                                        double blur = 0.0);

// Quadrature nodes covering a filter, with weights already multiplied by
// the transmission. Each smooth segment gets `per_segment` Gauss-Legendre
// nodes.
struct BandNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};
BandNodes band_nodes(const SpectralFilter& filter, int per_segment = 16);

// Band-integrated herald probability.
double plm(const Jsa& f, const SpectralFilter& l, const SpectralFilter& m,
           double tau_i, int per_segment = 16);

// Weighted ensemble of pure heralded states over the band quadrature nodes.
struct MixedHeraldedState {
  SpectralFilter band_l;
  SpectralFilter band_m;
  double tau_i = 0.0;
  double p_lm = 0.0;
  bool empty = false;
  std::vector<double> nodes_j;
  std::vector<double> nodes_k;
  Eigen::MatrixXcd phi_j;    // signal grid x nodes_j, unit norm columns
  Eigen::MatrixXcd phi_k;    // signal grid x nodes_k
  Eigen::MatrixXd weights;   // ensemble weights, sum to 1
  Eigen::MatrixXd norm_c;    // C per node pair
  Eigen::MatrixXd theta;     // theta per node pair
  // Band average of the pure-state matrix in the {|jk>, |kj>} basis.
  Eigen::Matrix2cd coherence;
  double purity = 0.0;
};

MixedHeraldedState mixed_heralded_state(const Jsa& f, const SpectralFilter& l,
                                        const SpectralFilter& m, double tau_i,
                                        int per_segment = 16);

// F_lm on the signal grid.
Map2D mixed_jsi(const Jsa& f, const MixedHeraldedState& s);
// P_lm(tau_S).
FringeTrace mixed_fringes(const Jsa& f, const MixedHeraldedState& s,
                          const std::vector<double>& tau_s);

// Tr(rho_j rho_k) of the signal states heralded through filters j and k.
double hom_purity_bound(const Jsa& f, const SpectralFilter& j,
                        const SpectralFilter& k, int per_segment = 16);
// Without spectral resolution on the idler: Tr rho_S^2.
double hom_purity_bound_full_band(const Jsa& f);

}  // namespace fsw

#endif  // FOURSWAP_SRC_OBSERVABLES_MIXED_HPP_
