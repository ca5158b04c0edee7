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
#include "observables_mixed.hpp"
#include "observables_pure.hpp"

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

double omega_per_nm() { return 2.0 * kPi * kSpeedOfLight / (830.0 * 830.0); }
double bin_omega(int n) { return omega_from_lambda(830.0 + 2.0 * n) - omega_from_lambda(830.0); }

TEST(Filter, BankIsPartitionOfUnity) {
  const double w = 0.7;
  for (const FilterShape shape : {FilterShape::kRect, FilterShape::kRectGauss}) {
    const auto bank = filter_bank(0.0, w, -20, 20, shape, shape == FilterShape::kRect ? 0.0 : 0.15);
    for (double x = -5.0; x <= 5.0; x += 0.0913) {
      double s = 0.0;
      for (const auto& b : bank) s += b.transmission(x);
      EXPECT_NEAR(s, 1.0, 1e-6) << x;
    }
  }
}

TEST(Filter, BandNodesIntegrateTheTransmission) {
  const SpectralFilter rect{1.0, 0.4, FilterShape::kRect, 0.0};
  const SpectralFilter gauss{1.0, 0.4, FilterShape::kGaussian, 0.0};
  const SpectralFilter rg{1.0, 0.4, FilterShape::kRectGauss, 0.1};
  for (const auto& [f, area] : std::vector<std::pair<SpectralFilter, double>>{
           {rect, 0.4}, {gauss, 0.4 / kFwhmPerSigma * std::sqrt(2.0 * kPi)}, {rg, 0.4}}) {
    const BandNodes b = band_nodes(f, 16);
    double s = 0.0;
    for (const double w : b.weights) s += w;
    EXPECT_NEAR(s, area, 1e-9);
  }
}

TEST(Mixed, NarrowBandsRecoverThePureState) {
  const Jsa f = fitted();
  const double oj = bin_omega(2), ok = bin_omega(-2);
  const double w = 1e-4;
  const MixedHeraldedState s = mixed_heralded_state(f, {oj, w}, {ok, w}, 0.0);
  const HeraldedBellState pure = herald(f, oj, ok, 0.0);
  EXPECT_NEAR(s.purity, 1.0, 1e-6);
  EXPECT_NEAR(s.p_lm / (w * w), pure.p, 1e-6 * pure.p);
  const Map2D a = mixed_jsi(f, s);
  const Map2D b = heralded_jsi(f, pure);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-5 * b.values.maxCoeff());
}

TEST(Mixed, PurityNonIncreasingInWidth) {
  const Jsa f = fitted();
  double prev = 1.0 + 1e-12;
  for (double w = 0.05; w <= 3.0; w *= 1.6) {
    const double wr = w * omega_per_nm();
    const MixedHeraldedState s = mixed_heralded_state(f, {bin_omega(1), wr}, {bin_omega(-2), wr}, 0.0);
    EXPECT_LE(s.purity, prev + 1e-9) << w;
    prev = s.purity;
  }
}

TEST(Mixed, CoherenceMatrixIsPositive) {
  const Jsa f = fitted();
  for (const double ti : {0.0, 0.1, 0.7}) {
    const double wr = 2.0 * omega_per_nm();
    const MixedHeraldedState s = mixed_heralded_state(f, {bin_omega(2), wr}, {bin_omega(-1), wr}, ti);
    const Eigen::Matrix2cd& c = s.coherence;
    EXPECT_LE(std::abs(c(0, 1)), std::sqrt(c(0, 0).real() * c(1, 1).real()) + 1e-12);
    EXPECT_NEAR(std::abs(c(0, 1) - std::conj(c(1, 0))), 0.0, 1e-12);
    EXPECT_GE(s.purity, 0.0);
    EXPECT_LE(s.purity, 1.0 + 1e-9);
  }
}

TEST(Mixed, BandSumReconstructsSummedJsi) {
  const Jsa f = fitted(64);
  const double w = 6.0;
  const auto bank = filter_bank(0.0, w, -16, 16);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(64, 64);
  for (std::size_t l = 0; l < bank.size(); ++l) {
    for (std::size_t m = 0; m < bank.size(); ++m) {
      const MixedHeraldedState s = mixed_heralded_state(f, bank[l], bank[m], 0.0, 12);
      if (s.empty) continue;
      sum += s.p_lm * mixed_jsi(f, s).values;
    }
  }
  const Map2D ref = summed_jsi_gaussian(f, 0.0);
  EXPECT_LT((sum - ref.values).cwiseAbs().maxCoeff(), 1e-5 * ref.values.maxCoeff());
}

TEST(Mixed, BandAveragingRemovesIdlerDelayFringes) {
  const Jsa f = fitted();
  const double wr = 2.0 * omega_per_nm();
  // Fringe term at tau_S = 0 followed along tau_I.
  auto fringe = [&](double ti) {
    const MixedHeraldedState s = mixed_heralded_state(f, {bin_omega(2), wr}, {bin_omega(-2), wr}, ti);
    return std::abs(mixed_fringes(f, s, {0.0}).value[0] - 0.5);
  };
  const double at0 = fringe(0.0);
  EXPECT_GT(at0, 0.3);
  for (double ti = 3.0 / kSigmaI; ti <= 4.0 / kSigmaI; ti += 0.05) EXPECT_LT(fringe(ti), 0.1 * at0) << ti;
}

TEST(HomBound, NarrowSameBandIsPureFullBandIsInverseK) {
  const Jsa f = fitted();
  const SpectralFilter narrow{bin_omega(1), 1e-3};
  EXPECT_NEAR(hom_purity_bound(f, narrow, narrow), 1.0, 1e-6);
  const double k = schmidt_decompose(f).schmidt_number;
  EXPECT_NEAR(hom_purity_bound_full_band(f), 1.0 / k, 1e-6);
  EXPECT_NEAR(hom_purity_bound_full_band(f), 0.2, 0.05);
}

TEST(HomBound, WideningTheFilterLowersTheBound) {
  const Jsa f = fitted();
  double prev = 1.0 + 1e-12;
  for (const double nm : {0.05, 0.1, 0.5, 2.0, 8.0}) {
    const SpectralFilter b{0.0, nm * omega_per_nm()};
    const double v = hom_purity_bound(f, b, b);
    EXPECT_LE(v, prev) << nm;
    prev = v;
  }
}

}  // namespace
}  // namespace fsw
