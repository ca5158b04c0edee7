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

#ifndef FOURSWAP_SRC_DENSITY_HPP_
#define FOURSWAP_SRC_DENSITY_HPP_

#include <Eigen/Dense>

#include "grid.hpp"
#include "jsa.hpp"

namespace fsw {

enum class Party { kSignal, kIdler };

// One-photon spectral kernel rho(x, x') on a grid.
struct ReducedDensity {
  FrequencyGrid grid;
  Eigen::MatrixXcd kernel;

  double trace() const;
  // Tr rho^2 = sum_ij w_i w_j |rho_ij|^2.
  double purity() const;
  // Eigenvalues of W^1/2 rho W^1/2, ascending.
  Eigen::VectorXd eigenvalues() const;
  double hermiticity_error() const;
};

// Kernel from quadrature over the traced variable. Throws kNumeric when the
// trace deviates from 1 by more than 1e-3 (undersampled grid).
ReducedDensity reduced_density(const Jsa& f, Party which);

// Gaussian closed form, using the JSA's own normalization constant.
ReducedDensity reduced_density_closed(const Jsa& f, Party which);

struct SchmidtResult {
  // Normalized so that the squares sum to 1, descending.
  Eigen::VectorXd lambdas;
  double schmidt_number = 1.0;
};

SchmidtResult schmidt_decompose(const Jsa& f);
SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& samples,
                                const FrequencyGrid& s, const FrequencyGrid& i);

// Joint intensity |f|^2 blurred by Gaussians of standard deviation blur_s,
// blur_i (rad/ps) along each axis.
Eigen::MatrixXd blurred_intensity(const Jsa& f, double blur_s, double blur_i);

// Schmidt number of sqrt(blurred intensity), the detector-limited estimate.
double blurred_schmidt_number(const Jsa& f, double blur_s, double blur_i);

}  // namespace fsw

#endif  // FOURSWAP_SRC_DENSITY_HPP_
