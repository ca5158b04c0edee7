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

#ifndef FOURSWAP_SRC_HERALDING_HPP_
#define FOURSWAP_SRC_HERALDING_HPP_

#include <Eigen/Dense>
#include <vector>

#include "jsa.hpp"
#include "types.hpp"

namespace fsw {

// Signal mode heralded by an idler detected at detuning omega.
struct HeraldedMode {
  Eigen::VectorXcd amplitude;  // on the signal grid, unit norm
  double omega = 0.0;          // heralding idler detuning
  double center = 0.0;         // first moment of |phi|^2
  double weight = 0.0;         // N = rho_I(omega, omega)
  int source = 1;
};

// phi(w) = f(w, W) / sqrt(rho_I(W, W)). Rejects W outside the idler grid or
// where rho_I(W, W) is below 1e-12 of its peak.
HeraldedMode heralded_mode(const Jsa& f, double idler_detuning, int source = 1);

// <a|b> with quadrature weights of the signal grid.
cplx mode_overlap(const Jsa& f, const Eigen::VectorXcd& a,
                  const Eigen::VectorXcd& b);

struct HeraldedBellState {
  HeraldedMode mode_j;
  HeraldedMode mode_k;
  double tau_i = 0.0;
  double theta = 0.0;   // (W_j - W_k) tau_I
  cplx overlap = 0.0;   // <phi_j|phi_k>
  double norm_c = 0.0;  // 1 - |<phi_j|phi_k>|^2 cos theta
  double p = 0.0;       // herald probability density
  // Measure-zero herald (C below 1e-12): observables are defined as 0.
  bool degenerate = false;
};

// Psi(w1, w2) = [phi_j(w1) phi_k(w2) - e^{i theta} phi_k(w1) phi_j(w2)] / sqrt(2C).
HeraldedBellState herald(const Jsa& f, double omega_j, double omega_k,
                         double tau_i);

// Normalized two-photon amplitude of a state at (w1, w2) grid indices.
cplx bell_amplitude(const HeraldedBellState& s, Eigen::Index a, Eigen::Index b);

// Closed-form herald quantities of the gaussian model.
struct GaussianHerald {
  double weight_j = 0.0;
  double weight_k = 0.0;
  double center_j = 0.0;
  double center_k = 0.0;
  double overlap = 0.0;  // real and positive
  double theta = 0.0;
  double norm_c = 0.0;
  double p = 0.0;
};
// norm is the JSA normalization constant C (use the grid-normalized value to
// compare with quadrature).
GaussianHerald herald_gaussian(const GaussianModel& g, double norm,
                               double omega_j, double omega_k, double tau_i);

// p_jk over the idler grid (x = W_j, y = W_k), from the quadrature rho_I.
Map2D pjk_map(const Jsa& f, double tau_i);

// p_jk over explicit idler detunings, from mode overlaps.
Eigen::MatrixXd pjk_on_points(const Jsa& f, const std::vector<double>& omegas,
                              double tau_i);

}  // namespace fsw

#endif  // FOURSWAP_SRC_HERALDING_HPP_
