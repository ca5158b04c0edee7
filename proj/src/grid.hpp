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

#ifndef FOURSWAP_SRC_GRID_HPP_
#define FOURSWAP_SRC_GRID_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "common.hpp"

namespace fsw {

// Uniform grid of angular detunings (rad/ps) symmetric about an absolute
// center frequency.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  // half_width is in rad/ps; reference_width records what "extent" is
  // measured against (the half width divided by it).
  FrequencyGrid(double center, double half_width, std::size_t count,
                double reference_width = 1.0);

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  double extent() const { return extent_; }
  std::size_t size() const { return detunings_.size(); }
  double operator[](std::size_t i) const { return detunings_[i]; }
  const std::vector<double>& detunings() const { return detunings_; }
  // Simpson weights including the spacing factor.
  const std::vector<double>& weights() const { return weights_; }
  bool operator==(const FrequencyGrid& o) const;

 private:
  double center_ = 0.0;
  double half_width_ = 0.0;
  double spacing_ = 0.0;
  double extent_ = 0.0;
  std::vector<double> detunings_;
  std::vector<double> weights_;
};

// Composite Simpson weights for n uniformly spaced samples. For even n the
// last three intervals use the 3/8 rule.
std::vector<double> simpson_weights(std::size_t n, double h);
std::vector<double> trapezoid_weights(std::size_t n, double h);

// Weighted sum with a NaN/Inf guard.
double integrate(const std::vector<double>& samples,
                 const std::vector<double>& weights);
cplx integrate(const std::vector<cplx>& samples,
               const std::vector<double>& weights);

enum class Rule { kSimpson, kTrapezoid };

struct QuadratureResult {
  cplx value;
  // |I_2N - I_N| from one grid doubling.
  double refinement_delta = 0.0;
};

// Integrates fn over [a, b] with n samples and again on the doubled grid.
QuadratureResult integrate_refined(const std::function<cplx(double)>& fn,
                                   double a, double b, std::size_t n,
                                   Rule rule = Rule::kSimpson);

// Gauss-Legendre nodes and weights on [a, b].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(std::size_t n, double a, double b);

}  // namespace fsw

#endif  // FOURSWAP_SRC_GRID_HPP_
