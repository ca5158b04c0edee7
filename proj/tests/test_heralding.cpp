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


#include <gtest/gtest.h>

#include <cmath>

#include "density.hpp"
#include "heralding.hpp"
#include "jsa.hpp"

namespace fsw {
namespace {

constexpr double kSigmaS = 0.34174702166286053;
constexpr double kSigmaI = 3.0;
constexpr double kAlpha = 0.4778368378778232;

Jsa fitted(std::size_t n = 256) {
  GaussianModel g;
  g.sigma_s = kSigmaS;
  g.sigma_i = kSigmaI;
  g.alpha = kAlpha;
  return Jsa::gaussian(g, 830.0, GridSpec{n, 6.0});
}

double bin_omega(int n) { return omega_from_lambda(830.0 + 2.0 * n) - omega_from_lambda(830.0); }

TEST(HeraldedMode, UnitNormAndCenterOnTheCorrelationLine) {
  const Jsa f = fitted();
  for (const int n : {-3, -1, 0, 2}) {
    const HeraldedMode m = heralded_mode(f, bin_omega(n));
    EXPECT_NEAR(std::abs(mode_overlap(f, m.amplitude, m.amplitude)), 1.0, 1e-9);
    EXPECT_NEAR(m.center, -2.0 * kAlpha * kSigmaS * kSigmaS * bin_omega(n), 1e-8);
  }
}

TEST(HeraldedMode, RejectsIdlerOutsideGrid) {
  const Jsa f = fitted();
  EXPECT_THROW(heralded_mode(f, 10.0 * f.idler_grid().half_width()), Error);
}

TEST(HeraldedMode, OverlapEqualsNormalizedIdlerCoherence) {
  const Jsa f = fitted();
  const ReducedDensity ri = reduced_density(f, Party::kIdler);
  const auto& w = f.idler_grid().detunings();
  for (const auto& [a, b] : std::vector<std::pair<std::size_t, std::size_t>>{{100, 140}, {128, 129}, {90, 170}}) {
    const HeraldedMode mj = heralded_mode(f, w[a]);
    const HeraldedMode mk = heralded_mode(f, w[b]);
    const cplx lhs = mode_overlap(f, mj.amplitude, mk.amplitude);
    const cplx rhs = ri.kernel(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) /
                     std::sqrt(mj.weight * mk.weight);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-6);
    EXPECT_NEAR(mj.weight, ri.kernel(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real(), 1e-9);
  }
}

// |<phi_j|phi_k>|^2 = exp[-(w_j - w_k)^2 / 4 sS^2] for modes of intensity
// width sS, the term entering C_jk.
TEST(HeraldedMode, GaussianOverlapSquaredIsGaussianInCenterDistance) {
  const Jsa f = fitted();
  for (const auto& [j, k] : std::vector<std::pair<int, int>>{{1, 0}, {2, -2}, {1, -1}}) {
    const HeraldedMode mj = heralded_mode(f, bin_omega(j));
    const HeraldedMode mk = heralded_mode(f, bin_omega(k));
    const double d = mj.center - mk.center;
    EXPECT_NEAR(std::norm(mode_overlap(f, mj.amplitude, mk.amplitude)),
                std::exp(-d * d / (4.0 * kSigmaS * kSigmaS)), 1e-6);
  }
}

TEST(Herald, BellStateQuantitiesMatchDefinitions) {
  const Jsa f = fitted();
  const double oj = bin_omega(1), ok = bin_omega(0), ti = 0.3;
  const HeraldedBellState s = herald(f, oj, ok, ti);
  EXPECT_NEAR(s.theta, (oj - ok) * ti, 1e-14);
  EXPECT_NEAR(s.norm_c, 1.0 - std::norm(s.overlap) * std::cos(s.theta), 1e-12);
  // p = N_j N_k C / 2 with N the idler marginal.
  EXPECT_NEAR(s.p, 0.5 * s.mode_j.weight * s.mode_k.weight * s.norm_c, 1e-12);
  // Unit norm of the two-photon state on the signal grid.
  const auto& wts = f.signal_grid().weights();
  double norm = 0.0;
  for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(wts.size()); ++a) {
    for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(wts.size()); ++b) {
      norm += wts[static_cast<std::size_t>(a)] * wts[static_cast<std::size_t>(b)] * std::norm(bell_amplitude(s, a, b));
    }
  }
  EXPECT_NEAR(norm, 1.0, 1e-9);
}

TEST(Herald, DegenerateHeraldIsFlagged) {
  const Jsa f = fitted();
  const HeraldedBellState s = herald(f, bin_omega(1), bin_omega(1), 0.0);
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.p, 0.0);
}

TEST(Herald, GaussianClosedFormAgrees) {
  const Jsa f = fitted(512);
  const GaussianModel& g = f.gaussian_params();
  for (const double ti : {0.0, 0.12, -0.4}) {
    const HeraldedBellState s = herald(f, bin_omega(2), bin_omega(-1), ti);
    const GaussianHerald h = herald_gaussian(g, f.norm_constant(), bin_omega(2), bin_omega(-1), ti);
    EXPECT_NEAR(s.p / h.p, 1.0, 1e-6);
    EXPECT_NEAR(s.norm_c, h.norm_c, 1e-8);
    EXPECT_NEAR(std::abs(s.overlap), h.overlap, 1e-8);
    EXPECT_NEAR(s.mode_j.center, h.center_j, 1e-8);
  }
}

TEST(PjkMap, NonNegativeZeroDiagonalAndTimeReversal) {
  const Jsa f = fitted(128);
  const Map2D a = pjk_map(f, 0.0);
  EXPECT_GE(a.values.minCoeff(), 0.0);
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) EXPECT_NEAR(a.values(i, i), 0.0, 1e-15);
  const Map2D p = pjk_map(f, 0.25);
  const Map2D m = pjk_map(f, -0.25);
  EXPECT_GE(p.values.minCoeff(), 0.0);
  EXPECT_LT((p.values - m.values.transpose()).cwiseAbs().maxCoeff(), 1e-14 * p.values.maxCoeff());
}

TEST(PjkMap, IntegratesToHalfOneMinusIdlerPurity) {
  const Jsa f = fitted(256);
  const Map2D a = pjk_map(f, 0.0);
  const auto& w = f.idler_grid().weights();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
      sum += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * a.values(i, j);
    }
  }
  const double purity = reduced_density(f, Party::kIdler).purity();
  EXPECT_NEAR(sum, 0.5 * (1.0 - purity), 1e-6);
}

TEST(PjkMap, PeriodicInIdlerDelay) {
  const Jsa f = fitted();
  const double oj = bin_omega(2), ok = bin_omega(-1);
  const Eigen::MatrixXd p0 = pjk_on_points(f, {oj, ok}, 0.0);
  const Eigen::MatrixXd p1 = pjk_on_points(f, {oj, ok}, 2.0 * kPi / (oj - ok));
  EXPECT_NEAR(p0(0, 1), p1(0, 1), 1e-12 * p0(0, 1));
  EXPECT_NEAR(p0(0, 1), herald(f, oj, ok, 0.0).p, 1e-12);
}

}  // namespace
}  // namespace fsw
