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

#include "heralding.hpp"

#include <fmt/format.h>

#include <cmath>

#include "density.hpp"

namespace fsw {

namespace {

constexpr double kDegenerateNorm = 1e-12;

Eigen::VectorXcd column(const Jsa& f, double wi) {
  const auto& g = f.signal_grid();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t a = 0; a < g.size(); ++a) {
    v(static_cast<Eigen::Index>(a)) = f(g[a], wi);
  }
  return v;
}

}  // namespace

cplx mode_overlap(const Jsa& f, const Eigen::VectorXcd& a,
                  const Eigen::VectorXcd& b) {
  const auto& w = f.signal_grid().weights();
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    acc += w[static_cast<std::size_t>(i)] * std::conj(a(i)) * b(i);
  }
  return acc;
}

HeraldedMode heralded_mode(const Jsa& f, double idler_detuning, int source) {
  const auto& gi = f.idler_grid();
  require(idler_detuning >= gi[0] && idler_detuning <= gi[gi.size() - 1],
          ErrorCode::kDomain,
          fmt::format("heralding detuning {} rad/ps outside the idler grid",
                      idler_detuning));
  HeraldedMode m;
  m.omega = idler_detuning;
  m.source = source;
  m.amplitude = column(f, idler_detuning);
  m.weight = mode_overlap(f, m.amplitude, m.amplitude).real();
  require(m.weight > 1e-12 * f.idler_marginal_peak(), ErrorCode::kDomain,
          fmt::format("heralded mode undefined at {} rad/ps: idler marginal "
                      "vanishes",
                      idler_detuning));
  m.amplitude /= std::sqrt(m.weight);
  const auto& gs = f.signal_grid();
  const auto& w = gs.weights();
  double c = 0.0;
  for (std::size_t a = 0; a < gs.size(); ++a) {
    c += w[a] * gs[a] * std::norm(m.amplitude(static_cast<Eigen::Index>(a)));
  }
  m.center = c;
  return m;
}

HeraldedBellState herald(const Jsa& f, double omega_j, double omega_k,
                         double tau_i) {
  HeraldedBellState s;
  s.mode_j = heralded_mode(f, omega_j);
  s.mode_k = heralded_mode(f, omega_k);
  s.tau_i = tau_i;
  s.theta = (omega_j - omega_k) * tau_i;
  s.overlap = mode_overlap(f, s.mode_j.amplitude, s.mode_k.amplitude);
  s.norm_c = 1.0 - std::norm(s.overlap) * std::cos(s.theta);
  // p = (1/2)[N_j N_k - |rho_I(j,k)|^2 cos theta] = (1/2) N_j N_k C.
  s.p = 0.5 * s.mode_j.weight * s.mode_k.weight * s.norm_c;
  s.degenerate = s.norm_c < kDegenerateNorm;
  if (s.degenerate) s.p = std::max(s.p, 0.0);
  return s;
}

cplx bell_amplitude(const HeraldedBellState& s, Eigen::Index a, Eigen::Index b) {
  if (s.degenerate) return 0.0;
  const auto& pj = s.mode_j.amplitude;
  const auto& pk = s.mode_k.amplitude;
  return (pj(a) * pk(b) - std::polar(1.0, s.theta) * pk(a) * pj(b)) /
         std::sqrt(2.0 * s.norm_c);
}

GaussianHerald herald_gaussian(const GaussianModel& g, double norm,
                               double omega_j, double omega_k, double tau_i) {
  GaussianHerald h;
  const double ss = g.sigma_s;
  const double si = g.sigma_i;
  const double a = g.alpha;
  // rho_I(W, W) = C^2 sqrt(2 pi) sS exp[-y^2/2sI^2 + 2 a^2 sS^2 y^2].
  auto diag = [&](double w) {
    const double y = w - g.shift_i;
    return norm * norm * std::sqrt(2.0 * kPi) * ss *
           std::exp(-y * y / (2.0 * si * si) + 2.0 * a * a * ss * ss * y * y);
  };
  h.weight_j = diag(omega_j);
  h.weight_k = diag(omega_k);
  h.center_j = g.herald_center(omega_j);
  h.center_k = g.herald_center(omega_k);
  const double d = h.center_j - h.center_k;
  h.overlap = std::exp(-d * d / (8.0 * ss * ss));
  h.theta = (omega_j - omega_k) * tau_i;
  h.norm_c = 1.0 - h.overlap * h.overlap * std::cos(h.theta);
  h.p = 0.5 * h.weight_j * h.weight_k * h.norm_c;
  return h;
}

Map2D pjk_map(const Jsa& f, double tau_i) {
  const ReducedDensity rho = reduced_density(f, Party::kIdler);
  const auto& g = f.idler_grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  Map2D m;
  m.x_name = "omega_j";
  m.y_name = "omega_k";
  m.x = g.detunings();
  m.y = g.detunings();
  m.values.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double th = (g[static_cast<std::size_t>(a)] - g[static_cast<std::size_t>(b)]) * tau_i;
      const double v = 0.5 * (rho.kernel(a, a).real() * rho.kernel(b, b).real() -
                              std::norm(rho.kernel(a, b)) * std::cos(th));
      m.values(a, b) = std::max(v, 0.0);
    }
  }
  m.meta = {{"quantity", "p_jk"}, {"tau_i_ps", fmt::format("{}", tau_i)}};
  return m;
}

Eigen::MatrixXd pjk_on_points(const Jsa& f, const std::vector<double>& omegas,
                              double tau_i) {
  const auto n = static_cast<Eigen::Index>(omegas.size());
  Eigen::MatrixXcd cols(static_cast<Eigen::Index>(f.signal_grid().size()), n);
  for (Eigen::Index j = 0; j < n; ++j) cols.col(j) = column(f, omegas[static_cast<std::size_t>(j)]);
  Eigen::VectorXd w(cols.rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = f.signal_grid().weights()[static_cast<std::size_t>(i)];
  const Eigen::MatrixXcd gram = cols.adjoint() * w.asDiagonal() * cols;
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double th = (omegas[static_cast<std::size_t>(a)] - omegas[static_cast<std::size_t>(b)]) * tau_i;
      p(a, b) = std::max(0.0, 0.5 * (gram(a, a).real() * gram(b, b).real() -
                                     std::norm(gram(a, b)) * std::cos(th)));
    }
  }
  return p;
}

}  // namespace fsw
