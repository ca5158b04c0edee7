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

#ifndef FOURSWAP_SRC_JSA_HPP_
#define FOURSWAP_SRC_JSA_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "common.hpp"
#include "grid.hpp"

namespace fsw {

// f(w, W) = C exp[-(w-s)^2/4 sS^2 - (W-i)^2/4 sI^2 - alpha (w-s)(W-i)]
// with (s, i) = (shift_s, shift_i).
struct GaussianModel {
  double sigma_s = 1.0;  // rad/ps
  double sigma_i = 1.0;  // rad/ps
  double alpha = 0.0;    // ps^2
  double shift_s = 0.0;  // rad/ps
  double shift_i = 0.0;  // rad/ps

  // Schmidt number 1/sqrt(1 - 4 alpha^2 sS^2 sI^2).
  double schmidt_number() const;
  double marginal_std_s() const;
  double marginal_std_i() const;
  // Center of the heralded signal mode for idler detuning W.
  double herald_center(double idler_detuning) const;
  // Analytic normalization constant on the infinite plane.
  double analytic_norm() const;
};

// f(w, W) = C exp[-(w+W)^2/4 sp^2] sinc[(ks w + ki W) L / 2].
struct SincModel {
  double pump_bandwidth = 1.0;  // rad/ps
  double slope_s = 0.0;         // ps/mm
  double slope_i = 0.0;         // ps/mm
  double length = 1.0;          // mm

  // Gaussian whose intensity FWHM along the phase-matching argument equals
  // that of sinc^2.
  GaussianModel matched_gaussian() const;
};

enum class JsaKind { kGaussian, kSinc, kGridded };

struct GridSpec {
  std::size_t count = 512;
  // Half width in units of the marginal standard deviation per axis. Values
  // below 5 are refused.
  double extent = 6.0;
};

class Jsa {
 public:
  static Jsa gaussian(const GaussianModel& m, double lambda0_nm,
                      const GridSpec& spec = {});
  static Jsa sinc(const SincModel& m, double lambda0_nm,
                  const GridSpec& spec = {});
  // Samples indexed (signal, idler). Normalized on the grid after a support
  // check of the marginals at the grid edges.
  static Jsa gridded(const Eigen::MatrixXcd& samples, const FrequencyGrid& s,
                     const FrequencyGrid& i, double lambda0_nm);

  // Same analytic model resampled on other grids; refuses grids that cut
  // into the 5-sigma support.
  Jsa on_grids(const FrequencyGrid& s, const FrequencyGrid& i) const;
  // Gaussian model translated by (ds, di), sampled on this JSA's grids.
  Jsa translated(double ds, double di) const;

  JsaKind kind() const { return kind_; }
  bool analytic() const { return kind_ != JsaKind::kGridded; }
  bool is_gaussian() const { return kind_ == JsaKind::kGaussian; }
  const GaussianModel& gaussian_params() const;
  const SincModel& sinc_params() const;
  GaussianModel matched_gaussian() const;

  // Normalized amplitude at detunings (w, W). Gridded models interpolate
  // bilinearly and return 0 outside the grid.
  cplx operator()(double ws, double wi) const;
  // Normalization constant C applied to the raw model.
  double norm_constant() const { return norm_; }
  double lambda0() const { return lambda0_; }
  double omega0() const { return omega_from_lambda(lambda0_); }

  const FrequencyGrid& signal_grid() const { return grid_s_; }
  const FrequencyGrid& idler_grid() const { return grid_i_; }
  const Eigen::MatrixXcd& samples() const { return samples_; }
  // Grid quadrature of |f|^2.
  double grid_norm() const;
  // Largest value of the idler marginal rho_I(W, W) on the grid.
  double idler_marginal_peak() const { return idler_peak_; }
  std::string describe() const;

 private:
  Jsa() = default;
  cplx raw(double ws, double wi) const;
  void sample_and_normalize();

  JsaKind kind_ = JsaKind::kGaussian;
  GaussianModel gauss_;
  SincModel sinc_;
  double lambda0_ = 830.0;
  double norm_ = 1.0;
  double idler_peak_ = 0.0;
  FrequencyGrid grid_s_;
  FrequencyGrid grid_i_;
  Eigen::MatrixXcd samples_;
};

// Marginal intensity along each axis, by quadrature.
Eigen::VectorXd signal_marginal(const Jsa& f);
Eigen::VectorXd idler_marginal(const Jsa& f);

}  // namespace fsw

#endif  // FOURSWAP_SRC_JSA_HPP_
