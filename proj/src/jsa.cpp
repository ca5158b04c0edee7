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

#include "jsa.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fsw {

namespace {

// sinc^2(x) = 1/2 at this argument.
constexpr double kSincHalfPoint = 1.3915573782515103;
// Edge marginal relative to peak allowed for gridded input. A Gaussian
// marginal truncated at 5 sigma sits at exp(-12.5) ~ 3.7e-6.
constexpr double kEdgeTolerance = 1e-5;

double quadratic_det(const GaussianModel& m) {
  return 1.0 / (4.0 * m.sigma_s * m.sigma_s * m.sigma_i * m.sigma_i) -
         m.alpha * m.alpha;
}

void validate(const GaussianModel& m) {
  require(m.sigma_s > 0.0 && std::isfinite(m.sigma_s), ErrorCode::kDomain,
          "gaussian JSA: sigma_s must be > 0");
  require(m.sigma_i > 0.0 && std::isfinite(m.sigma_i), ErrorCode::kDomain,
          "gaussian JSA: sigma_i must be > 0");
  require(std::isfinite(m.alpha), ErrorCode::kDomain,
          "gaussian JSA: alpha must be finite");
  // The exponent's Hessian is -[[1/2sS^2, a], [a, 1/2sI^2]].
  require(quadratic_det(m) > 0.0, ErrorCode::kDomain,
          "gaussian JSA: quadratic form is not negative definite "
          "(need 4 sigma_s^2 sigma_i^2 alpha^2 < 1)");
}

double sinc_fn(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

bool covers(const FrequencyGrid& g, double center, double half) {
  const double lo = g[0];
  const double hi = g[g.size() - 1];
  const double slack = 1e-9 * (hi - lo);
  return lo <= center - half + slack && hi >= center + half - slack;
}

}  // namespace

double GaussianModel::schmidt_number() const {
  return 1.0 / std::sqrt(1.0 - 4.0 * alpha * alpha * sigma_s * sigma_s *
                                   sigma_i * sigma_i);
}

double GaussianModel::marginal_std_s() const {
  return schmidt_number() * sigma_s;
}

double GaussianModel::marginal_std_i() const {
  return schmidt_number() * sigma_i;
}

double GaussianModel::herald_center(double idler_detuning) const {
  return shift_s - 2.0 * alpha * sigma_s * sigma_s * (idler_detuning - shift_i);
}

double GaussianModel::analytic_norm() const {
  return std::sqrt(std::sqrt(quadratic_det(*this)) / kPi);
}

GaussianModel SincModel::matched_gaussian() const {
  require(pump_bandwidth > 0.0, ErrorCode::kDomain,
          "sinc JSA: pump bandwidth must be > 0");
  require(length > 0.0, ErrorCode::kDomain, "sinc JSA: length must be > 0");
  const double gamma = std::log(2.0) / (2.0 * kSincHalfPoint * kSincHalfPoint);
  const double p = 1.0 / (4.0 * pump_bandwidth * pump_bandwidth);
  const double q = gamma * length * length / 4.0;
  GaussianModel g;
  g.sigma_s = 1.0 / std::sqrt(4.0 * (p + q * slope_s * slope_s));
  g.sigma_i = 1.0 / std::sqrt(4.0 * (p + q * slope_i * slope_i));
  g.alpha = 2.0 * p + 2.0 * q * slope_s * slope_i;
  return g;
}

Jsa Jsa::gaussian(const GaussianModel& m, double lambda0_nm,
                  const GridSpec& spec) {
  validate(m);
  require(spec.extent >= 5.0, ErrorCode::kDomain,
          fmt::format("grid extent {} sigma is too small to contain the "
                      "5-sigma support",
                      spec.extent));
  require(lambda0_nm > 0.0, ErrorCode::kDomain, "lambda0 must be > 0");
  Jsa f;
  f.kind_ = JsaKind::kGaussian;
  f.gauss_ = m;
  f.lambda0_ = lambda0_nm;
  const double ms = m.marginal_std_s();
  const double mi = m.marginal_std_i();
  f.grid_s_ = FrequencyGrid(f.omega0(), spec.extent * ms + std::abs(m.shift_s),
                            spec.count, ms);
  f.grid_i_ = FrequencyGrid(f.omega0(), spec.extent * mi + std::abs(m.shift_i),
                            spec.count, mi);
  f.sample_and_normalize();
  return f;
}

Jsa Jsa::sinc(const SincModel& m, double lambda0_nm, const GridSpec& spec) {
  const GaussianModel g = m.matched_gaussian();
  validate(g);
  require(spec.extent >= 5.0, ErrorCode::kDomain,
          fmt::format("grid extent {} sigma is too small to contain the "
                      "5-sigma support",
                      spec.extent));
  Jsa f;
  f.kind_ = JsaKind::kSinc;
  f.sinc_ = m;
  f.lambda0_ = lambda0_nm;
  const double ms = g.marginal_std_s();
  const double mi = g.marginal_std_i();
  f.grid_s_ = FrequencyGrid(f.omega0(), spec.extent * ms, spec.count, ms);
  f.grid_i_ = FrequencyGrid(f.omega0(), spec.extent * mi, spec.count, mi);
  f.sample_and_normalize();
  return f;
}

Jsa Jsa::gridded(const Eigen::MatrixXcd& samples, const FrequencyGrid& s,
                 const FrequencyGrid& i, double lambda0_nm) {
  require(static_cast<std::size_t>(samples.rows()) == s.size() &&
              static_cast<std::size_t>(samples.cols()) == i.size(),
          ErrorCode::kInvalidArgument, "gridded JSA: shape does not match grids");
  require(samples.allFinite(), ErrorCode::kNumeric,
          "gridded JSA: non-finite samples");
  Jsa f;
  f.kind_ = JsaKind::kGridded;
  f.lambda0_ = lambda0_nm;
  f.grid_s_ = s;
  f.grid_i_ = i;
  f.samples_ = samples;
  const Eigen::VectorXd ms = signal_marginal(f);
  const Eigen::VectorXd mi = idler_marginal(f);
  const double ps = ms.maxCoeff();
  const double pi = mi.maxCoeff();
  require(ps > 0.0 && pi > 0.0, ErrorCode::kDomain, "gridded JSA is zero");
  const bool inside = ms(0) <= kEdgeTolerance * ps &&
                      ms(ms.size() - 1) <= kEdgeTolerance * ps &&
                      mi(0) <= kEdgeTolerance * pi &&
                      mi(mi.size() - 1) <= kEdgeTolerance * pi;
  require(inside, ErrorCode::kDomain,
          "gridded JSA: grid too small to contain the 5-sigma support "
          "(edge marginal above 1e-5 of peak)");
  const double n = f.grid_norm();
  f.norm_ = 1.0 / std::sqrt(n);
  f.samples_ *= f.norm_;
  f.idler_peak_ = idler_marginal(f).maxCoeff();
  return f;
}

Jsa Jsa::on_grids(const FrequencyGrid& s, const FrequencyGrid& i) const {
  if (kind_ == JsaKind::kGridded) {
    require(s == grid_s_ && i == grid_i_, ErrorCode::kInvalidArgument,
            "gridded JSA cannot be resampled on different grids");
    return *this;
  }
  const GaussianModel g = matched_gaussian();
  const bool ok = covers(s, g.shift_s, 5.0 * g.marginal_std_s()) &&
                  covers(i, g.shift_i, 5.0 * g.marginal_std_i());
  require(ok, ErrorCode::kDomain,
          "grid too small to contain the 5-sigma support of the JSA");
  Jsa f = *this;
  f.grid_s_ = s;
  f.grid_i_ = i;
  f.sample_and_normalize();
  return f;
}

Jsa Jsa::translated(double ds, double di) const {
  require(kind_ == JsaKind::kGaussian, ErrorCode::kInvalidArgument,
          "translation is implemented for the gaussian model");
  Jsa f = *this;
  f.gauss_.shift_s += ds;
  f.gauss_.shift_i += di;
  return f.on_grids(grid_s_, grid_i_);
}

const GaussianModel& Jsa::gaussian_params() const {
  require(kind_ == JsaKind::kGaussian, ErrorCode::kInvalidArgument,
          "JSA is not gaussian");
  return gauss_;
}

const SincModel& Jsa::sinc_params() const {
  require(kind_ == JsaKind::kSinc, ErrorCode::kInvalidArgument,
          "JSA is not sinc");
  return sinc_;
}

GaussianModel Jsa::matched_gaussian() const {
  switch (kind_) {
    case JsaKind::kGaussian:
      return gauss_;
    case JsaKind::kSinc:
      return sinc_.matched_gaussian();
    case JsaKind::kGridded:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "gridded JSA has no matched gaussian");
}

cplx Jsa::raw(double ws, double wi) const {
  if (kind_ == JsaKind::kGaussian) {
    const double x = ws - gauss_.shift_s;
    const double y = wi - gauss_.shift_i;
    return std::exp(-x * x / (4.0 * gauss_.sigma_s * gauss_.sigma_s) -
                    y * y / (4.0 * gauss_.sigma_i * gauss_.sigma_i) -
                    gauss_.alpha * x * y);
  }
  const double sp = sinc_.pump_bandwidth;
  const double sum = ws + wi;
  return std::exp(-sum * sum / (4.0 * sp * sp)) *
         sinc_fn(0.5 * sinc_.length * (sinc_.slope_s * ws + sinc_.slope_i * wi));
}

cplx Jsa::operator()(double ws, double wi) const {
  if (kind_ != JsaKind::kGridded) return norm_ * raw(ws, wi);
  const double hs = grid_s_.spacing();
  const double hi = grid_i_.spacing();
  const double u = (ws - grid_s_[0]) / hs;
  const double v = (wi - grid_i_[0]) / hi;
  const double us = static_cast<double>(grid_s_.size() - 1);
  const double vs = static_cast<double>(grid_i_.size() - 1);
  if (u < 0.0 || v < 0.0 || u > us || v > vs) return 0.0;
  const auto a = static_cast<Eigen::Index>(std::min(std::floor(u), us - 1.0));
  const auto b = static_cast<Eigen::Index>(std::min(std::floor(v), vs - 1.0));
  const double tu = u - static_cast<double>(a);
  const double tv = v - static_cast<double>(b);
  return (1 - tu) * (1 - tv) * samples_(a, b) + tu * (1 - tv) * samples_(a + 1, b) +
         (1 - tu) * tv * samples_(a, b + 1) + tu * tv * samples_(a + 1, b + 1);
}

void Jsa::sample_and_normalize() {
  const std::size_t ns = grid_s_.size();
  const std::size_t ni = grid_i_.size();
  samples_.resize(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni));
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < ni; ++b) {
      samples_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          raw(grid_s_[a], grid_i_[b]);
    }
  }
  const double n = grid_norm();
  require(n > 0.0 && std::isfinite(n), ErrorCode::kNumeric,
          "JSA has zero or non-finite norm on the grid");
  norm_ = 1.0 / std::sqrt(n);
  samples_ *= norm_;
  idler_peak_ = idler_marginal(*this).maxCoeff();
}

double Jsa::grid_norm() const {
  const auto& ws = grid_s_.weights();
  const auto& wi = grid_i_.weights();
  double acc = 0.0;
  for (Eigen::Index b = 0; b < samples_.cols(); ++b) {
    double col = 0.0;
    for (Eigen::Index a = 0; a < samples_.rows(); ++a) {
      col += ws[static_cast<std::size_t>(a)] * std::norm(samples_(a, b));
    }
    acc += wi[static_cast<std::size_t>(b)] * col;
  }
  return acc;
}

std::string Jsa::describe() const {
  switch (kind_) {
    case JsaKind::kGaussian:
      return fmt::format("gaussian sigma_s={} sigma_i={} alpha={} shift_s={} "
                         "shift_i={}",
                         gauss_.sigma_s, gauss_.sigma_i, gauss_.alpha,
                         gauss_.shift_s, gauss_.shift_i);
    case JsaKind::kSinc:
      return fmt::format("sinc pump_bandwidth={} slope_s={} slope_i={} length={}",
                         sinc_.pump_bandwidth, sinc_.slope_s, sinc_.slope_i,
                         sinc_.length);
    case JsaKind::kGridded:
      break;
  }
  return "gridded";
}

Eigen::VectorXd signal_marginal(const Jsa& f) {
  const auto& wi = f.idler_grid().weights();
  const auto& m = f.samples();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      out(a) += wi[static_cast<std::size_t>(b)] * std::norm(m(a, b));
    }
  }
  return out;
}

Eigen::VectorXd idler_marginal(const Jsa& f) {
  const auto& ws = f.signal_grid().weights();
  const auto& m = f.samples();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m.cols());
  for (Eigen::Index b = 0; b < m.cols(); ++b) {
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      out(b) += ws[static_cast<std::size_t>(a)] * std::norm(m(a, b));
    }
  }
  return out;
}

}  // namespace fsw
