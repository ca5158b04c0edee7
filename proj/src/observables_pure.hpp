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

#ifndef FOURSWAP_SRC_OBSERVABLES_PURE_HPP_
#define FOURSWAP_SRC_OBSERVABLES_PURE_HPP_

#include <Eigen/Dense>
#include <vector>

#include "heralding.hpp"
#include "jsa.hpp"
#include "types.hpp"

namespace fsw {

// Heralded JSI F_jk(w1, w2) on the signal grid; zero map for degenerate
// heralds.
Map2D heralded_jsi(const Jsa& f, const HeraldedBellState& s);
// Far-bin approximation: two mirror-symmetric spots, cross terms dropped.
Map2D heralded_jsi_far(const Jsa& f, const HeraldedBellState& s);

// F = (1/2)[rho_S(w1,w1) rho_S(w2,w2) - Gamma(w1,w2;tau_I)], Gamma by
// quadrature over the idler axis.
Map2D summed_jsi(const Jsa& f, double tau_i);
// Same from the gaussian closed forms.
Map2D summed_jsi_gaussian(const Jsa& f, double tau_i);
// Explicit sum over heralds: sum_n w_j w_k p_jk F_jk at the given idler
// nodes and weights.
Map2D summed_jsi_from_heralds(const Jsa& f, double tau_i,
                              const std::vector<double>& nodes,
                              const std::vector<double>& weights);

// G_ab(tau) = int phi_a* phi_b e^{i w tau}.
cplx mode_transform(const Jsa& f, const Eigen::VectorXcd& a,
                    const Eigen::VectorXcd& b, double tau);

// Exact P_jk(tau_S) for the state (phi_a(1) phi_b(2) - e^{i theta} phi_c(1)
// phi_d(2)), all cross terms included. a = d = phi_j and b = c = phi_k for
// identical sources.
double coincidence_probability(const Jsa& f, const Eigen::VectorXcd& a,
                               const Eigen::VectorXcd& b,
                               const Eigen::VectorXcd& c,
                               const Eigen::VectorXcd& d, double theta,
                               double tau_s);

FringeTrace fringes_pjk(const Jsa& f, const HeraldedBellState& s,
                        const std::vector<double>& tau_s);
// Gaussian closed form of the exact expression.
FringeTrace fringes_pjk_gaussian(const GaussianModel& g,
                                 const GaussianHerald& h,
                                 const std::vector<double>& tau_s);
// Far-bin approximation (1/2)(1 + e^{-sS^2 tS^2} cos[(w_j - w_k)(tS - tI')]).
FringeTrace fringes_pjk_approx(const GaussianModel& g, double omega_j,
                               double omega_k, double tau_i,
                               const std::vector<double>& tau_s);

enum class LimitForm {
  // Denominator 1 + 2 sS^2 tI'^2, from the j -> k limit of the exact form.
  kDerived,
  // Denominator 1 + 4 (sS tI')^2, the printed expression with tI' measured
  // in units of 1/sS.
  kAsPrinted,
};
FringeTrace fringes_degenerate_limit(const GaussianModel& g, double tau_i,
                                     const std::vector<double>& tau_s,
                                     LimitForm form = LimitForm::kDerived);

// Summed peak P(tau_S, tau_I) by quadrature of its four terms.
Map2D peak2d(const Jsa& f, const std::vector<double>& tau_s,
             const std::vector<double>& tau_i);
Map2D peak2d_gaussian(const GaussianModel& g, const std::vector<double>& tau_s,
                      const std::vector<double>& tau_i);
// Explicit sum_n w_j w_k p_jk P_jk(tau_S) at fixed tau_I.
FringeTrace peak_from_heralds(const Jsa& f, double tau_i,
                              const std::vector<double>& tau_s,
                              const std::vector<double>& nodes,
                              const std::vector<double>& weights);

// tau' = tau_I / (2 alpha sS^2).
double scaled_idler_delay(const GaussianModel& g, double tau_i);

std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace fsw

#endif  // FOURSWAP_SRC_OBSERVABLES_PURE_HPP_
