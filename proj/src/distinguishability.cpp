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

#include "distinguishability.hpp"

#include <fmt/format.h>

#include <cmath>

#include "density.hpp"
#include "heralding.hpp"
#include "observables_pure.hpp"

namespace fsw {

namespace {

void require_common_grids(const SourcePair& p) {
  require(p.source1.signal_grid() == p.source2.signal_grid() &&
              p.source1.idler_grid() == p.source2.idler_grid(),
          ErrorCode::kInvalidArgument, "source pair must share grids");
}

Eigen::MatrixXd weight_matrix(const Jsa& f) {
  const auto& ws = f.signal_grid().weights();
  const auto& wi = f.idler_grid().weights();
  Eigen::MatrixXd w(static_cast<Eigen::Index>(ws.size()),
                    static_cast<Eigen::Index>(wi.size()));
  for (std::size_t a = 0; a < ws.size(); ++a) {
    for (std::size_t b = 0; b < wi.size(); ++b) {
      w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = ws[a] * wi[b];
    }
  }
  return w;
}

}  // namespace

SourcePair translated_pair(const Jsa& base, double ds, double di,
                           double delta_phi) {
  return {base, base.translated(ds, di), delta_phi};
}

cplx source_overlap(const SourcePair& p) {
  require_common_grids(p);
  const Eigen::MatrixXd w = weight_matrix(p.source1);
  return (p.source1.samples().conjugate().cwiseProduct(p.source2.samples()))
      .cwiseProduct(w.cast<cplx>())
      .sum();
}

double source_overlap_gaussian(const GaussianModel& g, double ds, double di) {
  const double q = ds * ds / (4.0 * g.sigma_s * g.sigma_s) +
                   g.alpha * ds * di + di * di / (4.0 * g.sigma_i * g.sigma_i);
  return std::exp(-0.5 * q);
}

double translation_for_overlap(const GaussianModel& g, double us, double ui,
                               double target) {
  require(target > 0.0 && target <= 1.0, ErrorCode::kDomain,
          "target overlap must lie in (0, 1]");
  const double n = std::hypot(us, ui);
  require(n > 0.0, ErrorCode::kInvalidArgument, "zero translation direction");
  us /= n;
  ui /= n;
  const double q = us * us / (4.0 * g.sigma_s * g.sigma_s) + g.alpha * us * ui +
                   ui * ui / (4.0 * g.sigma_i * g.sigma_i);
  return std::sqrt(-2.0 * std::log(target) / q);
}

VjkResult vjk(const SourcePair& p, double omega_j, double omega_k) {
  require_common_grids(p);
  const HeraldedMode j1 = heralded_mode(p.source1, omega_j, 1);
  const HeraldedMode j2 = heralded_mode(p.source2, omega_j, 2);
  const HeraldedMode k1 = heralded_mode(p.source1, omega_k, 1);
  const HeraldedMode k2 = heralded_mode(p.source2, omega_k, 2);
  VjkResult r;
  r.factor_j = mode_overlap(p.source1, j1.amplitude, j2.amplitude);
  r.factor_k = mode_overlap(p.source1, k1.amplitude, k2.amplitude);
  r.vjk = std::abs(r.factor_j) * std::abs(r.factor_k);
  return r;
}

double bin_factor_gaussian(const GaussianModel& g, double ds, double di) {
  const double d = ds + 2.0 * g.alpha * g.sigma_s * g.sigma_s * di;
  return std::exp(-d * d / (8.0 * g.sigma_s * g.sigma_s));
}

FringeTrace two_source_fringes(const SourcePair& p, double omega_j,
                               double omega_k, double tau_i,
                               const std::vector<double>& tau_s) {
  require_common_grids(p);
  const HeraldedMode j1 = heralded_mode(p.source1, omega_j, 1);
  const HeraldedMode j2 = heralded_mode(p.source2, omega_j, 2);
  const HeraldedMode k1 = heralded_mode(p.source1, omega_k, 1);
  const HeraldedMode k2 = heralded_mode(p.source2, omega_k, 2);
  const double theta = (omega_j - omega_k) * tau_i;
  FringeTrace t;
  t.tau = tau_s;
  t.value.resize(tau_s.size());
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    t.value[i] = coincidence_probability(p.source1, j1.amplitude, k2.amplitude,
                                         k1.amplitude, j2.amplitude, theta,
                                         tau_s[i]);
  }
  t.meta = {{"quantity", "P_jk two-source"},
            {"omega_j", fmt::format("{}", omega_j)},
            {"omega_k", fmt::format("{}", omega_k)},
            {"tau_i_ps", fmt::format("{}", tau_i)}};
  return t;
}

int pairing_sign(PortPairing pairing) {
  return (pairing == PortPairing::kCX || pairing == PortPairing::kDY) ? 1 : -1;
}

FringeTrace twofold_phase_fringes(const SourcePair& p,
                                  const std::vector<double>& phases,
                                  PortPairing pairing) {
  const cplx o = source_overlap(p);
  const double s = pairing_sign(pairing);
  FringeTrace t;
  t.tau = phases;
  t.value.resize(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    t.value[i] = 0.5 * (1.0 + s * (o * std::polar(1.0, phases[i])).real());
  }
  t.meta = {{"quantity", "P_cc"},
            {"axis", "pump_phase_rad"},
            {"pairing_sign", fmt::format("{}", s)},
            {"overlap_abs", fmt::format("{}", std::abs(o))}};
  return t;
}

cplx double_pair_coherence(const SourcePair& p) {
  require_common_grids(p);
  const auto& f1 = p.source1.samples();
  const auto& f2 = p.source2.samples();
  const auto& ws = p.source1.signal_grid().weights();
  const auto& wi = p.source1.idler_grid().weights();
  const Eigen::Map<const Eigen::VectorXd> vs(ws.data(), static_cast<Eigen::Index>(ws.size()));
  const Eigen::Map<const Eigen::VectorXd> vi(wi.data(), static_cast<Eigen::Index>(wi.size()));
  // A(W, W') = sum_w w_s f1*(w, W) f2(w, W').
  const Eigen::MatrixXcd a = f1.adjoint() * vs.asDiagonal() * f2;
  const Eigen::MatrixXcd wa = vi.asDiagonal() * a;
  const cplx tr_aa = (wa * wa).trace();
  const cplx o = source_overlap(p);
  const double p1 = reduced_density(p.source1, Party::kIdler).purity();
  const double p2 = reduced_density(p.source2, Party::kIdler).purity();
  return (o * o + tr_aa) / std::sqrt((1.0 + p1) * (1.0 + p2));
}

double double_pair_fourfold_probability(cplx kappa, double eta1, double eta2,
                                        double delta_phi) {
  const double denom = eta1 * eta1 + eta2 * eta2;
  if (denom <= 0.0) return 0.25;
  const double m = 2.0 * eta1 * eta2 * std::abs(kappa) / denom;
  return 0.25 * (1.0 + m * std::cos(2.0 * delta_phi + std::arg(kappa)));
}

FringeTrace fourfold_phase_fringes(const SourcePair& p, double eta1,
                                   double eta2,
                                   const std::vector<double>& phases) {
  const cplx kappa = double_pair_coherence(p);
  FringeTrace t;
  t.tau = phases;
  t.value.resize(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    t.value[i] = double_pair_fourfold_probability(kappa, eta1, eta2, phases[i]);
  }
  t.meta = {{"quantity", "double-pair four-fold probability"},
            {"axis", "pump_phase_rad"},
            {"kappa_abs", fmt::format("{}", std::abs(kappa))}};
  return t;
}

}  // namespace fsw
