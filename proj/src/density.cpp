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

#include "density.hpp"

#include <fmt/format.h>

#include <Eigen/SVD>
#include <cmath>

namespace fsw {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double ReducedDensity::trace() const {
  const auto& w = grid.weights();
  double t = 0.0;
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    t += w[static_cast<std::size_t>(i)] * kernel(i, i).real();
  }
  return t;
}

double ReducedDensity::purity() const {
  const auto& w = grid.weights();
  double p = 0.0;
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
      col += w[static_cast<std::size_t>(i)] * std::norm(kernel(i, j));
    }
    p += w[static_cast<std::size_t>(j)] * col;
  }
  return p;
}

Eigen::VectorXd ReducedDensity::eigenvalues() const {
  const Eigen::VectorXd sw = to_eigen(grid.weights()).cwiseSqrt();
  const Eigen::MatrixXcd m = sw.asDiagonal() * kernel * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorCode::kNumeric,
          "density eigen-decomposition failed");
  return es.eigenvalues();
}

double ReducedDensity::hermiticity_error() const {
  return (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();
}

ReducedDensity reduced_density(const Jsa& f, Party which) {
  const auto& m = f.samples();
  ReducedDensity rho;
  if (which == Party::kSignal) {
    rho.grid = f.signal_grid();
    const Eigen::VectorXd w = to_eigen(f.idler_grid().weights());
    rho.kernel = m * w.asDiagonal() * m.adjoint();
  } else {
    rho.grid = f.idler_grid();
    const Eigen::VectorXd w = to_eigen(f.signal_grid().weights());
    // rho_I(W, W') = int dw f(w, W) f*(w, W').
    rho.kernel = m.transpose() * w.asDiagonal() * m.conjugate();
  }
  // Remove rounding asymmetry from the matrix products.
  rho.kernel = 0.5 * (rho.kernel + rho.kernel.adjoint()).eval();
  const double t = rho.trace();
  require(std::abs(t - 1.0) <= 1e-3, ErrorCode::kNumeric,
          fmt::format("reduced density trace {} deviates from 1: grid "
                      "undersampled",
                      t));
  return rho;
}

ReducedDensity reduced_density_closed(const Jsa& f, Party which) {
  const GaussianModel& g = f.gaussian_params();
  const double c2 = f.norm_constant() * f.norm_constant();
  ReducedDensity rho;
  // Traced width and kept width/shift.
  const bool sig = which == Party::kSignal;
  rho.grid = sig ? f.signal_grid() : f.idler_grid();
  const double keep = sig ? g.sigma_s : g.sigma_i;
  const double traced = sig ? g.sigma_i : g.sigma_s;
  const double shift = sig ? g.shift_s : g.shift_i;
  const auto n = static_cast<Eigen::Index>(rho.grid.size());
  rho.kernel.resize(n, n);
  const double pref = c2 * std::sqrt(2.0 * kPi) * traced;
  for (Eigen::Index a = 0; a < n; ++a) {
    const double x = rho.grid[static_cast<std::size_t>(a)] - shift;
    for (Eigen::Index b = 0; b < n; ++b) {
      const double y = rho.grid[static_cast<std::size_t>(b)] - shift;
      const double s = x + y;
      rho.kernel(a, b) =
          pref * std::exp(-(x * x + y * y) / (4.0 * keep * keep) +
                          0.5 * g.alpha * g.alpha * traced * traced * s * s);
    }
  }
  return rho;
}

SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& samples,
                                const FrequencyGrid& s, const FrequencyGrid& i) {
  const Eigen::VectorXd ws = to_eigen(s.weights()).cwiseSqrt();
  const Eigen::VectorXd wi = to_eigen(i.weights()).cwiseSqrt();
  const Eigen::MatrixXcd m = ws.asDiagonal() * samples * wi.asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  SchmidtResult r;
  r.lambdas = svd.singularValues();
  const double total = r.lambdas.squaredNorm();
  require(total > 0.0, ErrorCode::kNumeric, "Schmidt decomposition of zero JSA");
  r.lambdas /= std::sqrt(total);
  r.schmidt_number = 1.0 / r.lambdas.array().pow(4).sum();
  return r;
}

SchmidtResult schmidt_decompose(const Jsa& f) {
  return schmidt_decompose(f.samples(), f.signal_grid(), f.idler_grid());
}

namespace {

// Discrete Gaussian kernel normalized to unit sum.
std::vector<double> blur_kernel(double sigma, double h, int* radius) {
  if (sigma <= 0.0) {
    *radius = 0;
    return {1.0};
  }
  *radius = static_cast<int>(std::ceil(6.0 * sigma / h));
  std::vector<double> k(static_cast<std::size_t>(2 * *radius + 1));
  double sum = 0.0;
  for (int j = -*radius; j <= *radius; ++j) {
    const double x = j * h;
    k[static_cast<std::size_t>(j + *radius)] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(j + *radius)];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

Eigen::MatrixXd blurred_intensity(const Jsa& f, double blur_s, double blur_i) {
  const Eigen::MatrixXd in = f.samples().cwiseAbs2();
  const Eigen::Index ns = in.rows();
  const Eigen::Index ni = in.cols();
  int rs = 0;
  int ri = 0;
  const auto ks = blur_kernel(blur_s, f.signal_grid().spacing(), &rs);
  const auto ki = blur_kernel(blur_i, f.idler_grid().spacing(), &ri);
  Eigen::MatrixXd tmp = Eigen::MatrixXd::Zero(ns, ni);
  for (Eigen::Index a = 0; a < ns; ++a) {
    for (int j = -rs; j <= rs; ++j) {
      const Eigen::Index src = a + j;
      if (src < 0 || src >= ns) continue;
      tmp.row(a) += ks[static_cast<std::size_t>(j + rs)] * in.row(src);
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ns, ni);
  for (Eigen::Index b = 0; b < ni; ++b) {
    for (int j = -ri; j <= ri; ++j) {
      const Eigen::Index src = b + j;
      if (src < 0 || src >= ni) continue;
      out.col(b) += ki[static_cast<std::size_t>(j + ri)] * tmp.col(src);
    }
  }
  return out;
}

double blurred_schmidt_number(const Jsa& f, double blur_s, double blur_i) {
  const Eigen::MatrixXcd amp =
      blurred_intensity(f, blur_s, blur_i).cwiseMax(0.0).cwiseSqrt().cast<cplx>();
  return schmidt_decompose(amp, f.signal_grid(), f.idler_grid()).schmidt_number;
}

}  // namespace fsw
