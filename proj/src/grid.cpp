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

#include "grid.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <string>

namespace fsw {

FrequencyGrid::FrequencyGrid(double center, double half_width,
                             std::size_t count, double reference_width)
    : center_(center), half_width_(half_width) {
  require(count >= 2, ErrorCode::kInvalidArgument,
          "frequency grid needs at least 2 points");
  require(half_width > 0.0 && std::isfinite(half_width),
          ErrorCode::kInvalidArgument, "frequency grid half width must be > 0");
  require(reference_width > 0.0, ErrorCode::kInvalidArgument,
          "grid reference width must be > 0");
  spacing_ = 2.0 * half_width / static_cast<double>(count - 1);
  extent_ = half_width / reference_width;
  detunings_.resize(count);
  // Fill symmetrically so that d[i] == -d[n-1-i] exactly.
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i) - 0.5 * static_cast<double>(count - 1);
    detunings_[i] = k * spacing_;
  }
  weights_ = simpson_weights(count, spacing_);
}

bool FrequencyGrid::operator==(const FrequencyGrid& o) const {
  return center_ == o.center_ && spacing_ == o.spacing_ &&
         detunings_.size() == o.detunings_.size() &&
         (detunings_.empty() || detunings_.front() == o.detunings_.front());
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  require(n >= 2, ErrorCode::kInvalidArgument, "quadrature needs >= 2 samples");
  std::vector<double> w(n, 0.0);
  if (n == 2) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  if (n == 4) {
    // Pure 3/8 rule.
    w[0] = w[3] = 3.0 * h / 8.0;
    w[1] = w[2] = 9.0 * h / 8.0;
    return w;
  }
  // Simpson over the first m points (m odd), 3/8 over the last 4 if n even.
  const std::size_t m = (n % 2 == 1) ? n : n - 3;
  for (std::size_t i = 0; i < m; ++i) {
    double c = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] += c * h / 3.0;
  }
  if (m != n) {
    const double e[4] = {3.0, 9.0, 9.0, 3.0};
    for (std::size_t k = 0; k < 4; ++k) w[m - 1 + k] += e[k] * h / 8.0;
  }
  return w;
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  require(n >= 2, ErrorCode::kInvalidArgument, "quadrature needs >= 2 samples");
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  require(a == b, ErrorCode::kInvalidArgument,
          "sample and weight counts differ");
}

}  // namespace

double integrate(const std::vector<double>& samples,
                 const std::vector<double>& weights) {
  check_sizes(samples.size(), weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(std::isfinite(samples[i]), ErrorCode::kNumeric,
            "non-finite integrand sample at index " + std::to_string(i));
    acc += weights[i] * samples[i];
  }
  return acc;
}

cplx integrate(const std::vector<cplx>& samples,
               const std::vector<double>& weights) {
  check_sizes(samples.size(), weights.size());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(std::isfinite(samples[i].real()) && std::isfinite(samples[i].imag()),
            ErrorCode::kNumeric,
            "non-finite integrand sample at index " + std::to_string(i));
    acc += weights[i] * samples[i];
  }
  return acc;
}

QuadratureResult integrate_refined(const std::function<cplx(double)>& fn,
                                   double a, double b, std::size_t n,
                                   Rule rule) {
  require(b > a, ErrorCode::kInvalidArgument, "empty integration interval");
  auto run = [&](std::size_t m) {
    const double h = (b - a) / static_cast<double>(m - 1);
    std::vector<cplx> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = fn(a + h * static_cast<double>(i));
    const auto w = rule == Rule::kSimpson ? simpson_weights(m, h)
                                          : trapezoid_weights(m, h);
    return integrate(s, w);
  };
  const cplx coarse = run(n);
  const cplx fine = run(2 * n - 1);
  return {fine, std::abs(fine - coarse)};
}

GaussLegendre gauss_legendre(std::size_t n, double a, double b) {
  require(n >= 1, ErrorCode::kInvalidArgument, "Gauss-Legendre needs >= 1 node");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  require(table != nullptr, ErrorCode::kNumeric, "Gauss-Legendre table failed");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(a, b, i, &gl.nodes[i], &gl.weights[i], table);
  }
  gsl_integration_glfixed_table_free(table);
  return gl;
}

}  // namespace fsw
