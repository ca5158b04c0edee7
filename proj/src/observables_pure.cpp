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

#include "observables_pure.hpp"

#include <fmt/format.h>

#include <cmath>

#include "density.hpp"

namespace fsw {

namespace {

Eigen::VectorXd weights_of(const FrequencyGrid& g) {
  return Eigen::Map<const Eigen::VectorXd>(g.weights().data(),
                                           static_cast<Eigen::Index>(g.size()));
}

Map2D signal_map(const Jsa& f, const char* quantity) {
  Map2D m;
  m.x_name = "omega_1";
  m.y_name = "omega_2";
  m.x = f.signal_grid().detunings();
  m.y = f.signal_grid().detunings();
  const auto n = static_cast<Eigen::Index>(m.x.size());
  m.values = Eigen::MatrixXd::Zero(n, n);
  m.meta = {{"quantity", quantity}};
  return m;
}

// Normalized mode columns and their weights N at the given idler detunings.
struct ModeColumns {
  Eigen::MatrixXcd phi;
  Eigen::VectorXd weight;
};

ModeColumns mode_columns(const Jsa& f, const std::vector<double>& omegas) {
  const auto& gs = f.signal_grid();
  const auto n = static_cast<Eigen::Index>(omegas.size());
  ModeColumns mc;
  mc.phi.resize(static_cast<Eigen::Index>(gs.size()), n);
  mc.weight.resize(n);
  const Eigen::VectorXd w = weights_of(gs);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (std::size_t a = 0; a < gs.size(); ++a) {
      mc.phi(static_cast<Eigen::Index>(a), j) = f(gs[a], omegas[static_cast<std::size_t>(j)]);
    }
    const double nj = (mc.phi.col(j).cwiseAbs2().array() * w.array()).sum();
    mc.weight(j) = nj;
    if (nj > 0.0) mc.phi.col(j) /= std::sqrt(nj);
  }
  return mc;
}

}  // namespace

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

double scaled_idler_delay(const GaussianModel& g, double tau_i) {
  require(g.alpha != 0.0, ErrorCode::kDomain,
          "scaled idler delay undefined for alpha = 0");
  return tau_i / (2.0 * g.alpha * g.sigma_s * g.sigma_s);
}

Map2D heralded_jsi(const Jsa& f, const HeraldedBellState& s) {
  Map2D m = signal_map(f, "F_jk");
  m.meta.emplace_back("omega_j", fmt::format("{}", s.mode_j.omega));
  m.meta.emplace_back("omega_k", fmt::format("{}", s.mode_k.omega));
  m.meta.emplace_back("tau_i_ps", fmt::format("{}", s.tau_i));
  if (s.degenerate) {
    m.meta.emplace_back("degenerate", "1");
    return m;
  }
  const auto n = m.values.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      m.values(a, b) = std::norm(bell_amplitude(s, a, b));
    }
  }
  return m;
}

Map2D heralded_jsi_far(const Jsa& f, const HeraldedBellState& s) {
  Map2D m = signal_map(f, "F_jk_far");
  const auto& pj = s.mode_j.amplitude;
  const auto& pk = s.mode_k.amplitude;
  const auto n = m.values.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      m.values(a, b) = 0.5 * (std::norm(pj(a) * pk(b)) + std::norm(pk(a) * pj(b)));
    }
  }
  return m;
}

Map2D summed_jsi(const Jsa& f, double tau_i) {
  Map2D m = signal_map(f, "F");
  m.meta.emplace_back("tau_i_ps", fmt::format("{}", tau_i));
  const auto& gi = f.idler_grid();
  Eigen::VectorXcd phase(static_cast<Eigen::Index>(gi.size()));
  Eigen::VectorXd wabs(static_cast<Eigen::Index>(gi.size()));
  for (std::size_t b = 0; b < gi.size(); ++b) {
    phase(static_cast<Eigen::Index>(b)) = gi.weights()[b] * std::polar(1.0, gi[b] * tau_i);
    wabs(static_cast<Eigen::Index>(b)) = gi.weights()[b];
  }
  const auto& s = f.samples();
  // g(w1, w2) = int dW f(w1, W) f*(w2, W) e^{i W tau}.
  const Eigen::MatrixXcd g = s * phase.asDiagonal() * s.adjoint();
  const Eigen::VectorXd diag = (s.cwiseAbs2() * wabs);
  const auto n = m.values.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      m.values(a, b) = 0.5 * (diag(a) * diag(b) - std::norm(g(a, b)));
    }
  }
  return m;
}

Map2D summed_jsi_gaussian(const Jsa& f, double tau_i) {
  const GaussianModel& g = f.gaussian_params();
  Map2D m = signal_map(f, "F");
  m.meta.emplace_back("tau_i_ps", fmt::format("{}", tau_i));
  const ReducedDensity rho = reduced_density_closed(f, Party::kSignal);
  const double c2 = f.norm_constant() * f.norm_constant();
  const double si = g.sigma_i;
  const double ss = g.sigma_s;
  const auto n = m.values.rows();
  const auto& x = m.x;
  for (Eigen::Index a = 0; a < n; ++a) {
    const double x1 = x[static_cast<std::size_t>(a)] - g.shift_s;
    for (Eigen::Index b = 0; b < n; ++b) {
      const double x2 = x[static_cast<std::size_t>(b)] - g.shift_s;
      const double sum = x1 + x2;
      const double gamma =
          c2 * c2 * 2.0 * kPi * si * si *
          std::exp(-(x1 * x1 + x2 * x2) / (2.0 * ss * ss) +
                   si * si * (g.alpha * g.alpha * sum * sum - tau_i * tau_i));
      m.values(a, b) =
          0.5 * (rho.kernel(a, a).real() * rho.kernel(b, b).real() - gamma);
    }
  }
  return m;
}

Map2D summed_jsi_from_heralds(const Jsa& f, double tau_i,
                              const std::vector<double>& nodes,
                              const std::vector<double>& weights) {
  require(nodes.size() == weights.size(), ErrorCode::kInvalidArgument,
          "herald nodes and weights differ in length");
  Map2D m = signal_map(f, "F");
  m.meta.emplace_back("tau_i_ps", fmt::format("{}", tau_i));
  const ModeColumns mc = mode_columns(f, nodes);
  const Eigen::VectorXd w = weights_of(f.signal_grid());
  const Eigen::MatrixXcd gram = mc.phi.adjoint() * w.asDiagonal() * mc.phi;
  const auto n = m.values.rows();
  const auto h = static_cast<Eigen::Index>(nodes.size());
  for (Eigen::Index j = 0; j < h; ++j) {
    for (Eigen::Index k = 0; k < h; ++k) {
      const double theta = (nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(k)]) * tau_i;
      const double c = 1.0 - std::norm(gram(j, k)) * std::cos(theta);
      if (c < 1e-12) continue;  // degenerate herald contributes nothing
      const double p = 0.5 * mc.weight(j) * mc.weight(k) * c;
      const double scale = weights[static_cast<std::size_t>(j)] * weights[static_cast<std::size_t>(k)] * p / (2.0 * c);
      const cplx e = std::polar(1.0, theta);
      const auto pj = mc.phi.col(j);
      const auto pk = mc.phi.col(k);
      for (Eigen::Index a = 0; a < n; ++a) {
        const cplx ja = pj(a);
        const cplx ka = e * pk(a);
        for (Eigen::Index b = 0; b < n; ++b) {
          m.values(a, b) += scale * std::norm(ja * pk(b) - ka * pj(b));
        }
      }
    }
  }
  return m;
}

cplx mode_transform(const Jsa& f, const Eigen::VectorXcd& a,
                    const Eigen::VectorXcd& b, double tau) {
  const auto& g = f.signal_grid();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    acc += g.weights()[i] * std::conj(a(ii)) * b(ii) * std::polar(1.0, g[i] * tau);
  }
  return acc;
}

double coincidence_probability(const Jsa& f, const Eigen::VectorXcd& a,
                               const Eigen::VectorXcd& b,
                               const Eigen::VectorXcd& c,
                               const Eigen::VectorXcd& d, double theta,
                               double tau_s) {
  const cplx e = std::polar(1.0, theta);
  const double norm =
      2.0 - 2.0 * (e * mode_overlap(f, a, c) * mode_overlap(f, b, d)).real();
  if (norm < 2e-12) return 0.0;
  auto g = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, double t) {
    return mode_transform(f, x, y, t);
  };
  const cplx x = g(a, b, tau_s) * g(b, a, -tau_s) -
                 e * g(a, d, tau_s) * g(b, c, -tau_s) -
                 std::conj(e) * g(c, b, tau_s) * g(d, a, -tau_s) +
                 g(c, d, tau_s) * g(d, c, -tau_s);
  return 0.5 * (1.0 - x.real() / norm);
}

FringeTrace fringes_pjk(const Jsa& f, const HeraldedBellState& s,
                        const std::vector<double>& tau_s) {
  FringeTrace t;
  t.tau = tau_s;
  t.value.assign(tau_s.size(), 0.0);
  t.meta = {{"quantity", "P_jk"},
            {"model", "exact"},
            {"omega_j", fmt::format("{}", s.mode_j.omega)},
            {"omega_k", fmt::format("{}", s.mode_k.omega)},
            {"tau_i_ps", fmt::format("{}", s.tau_i)}};
  if (s.degenerate) {
    t.meta.emplace_back("degenerate", "1");
    return t;
  }
  const auto& pj = s.mode_j.amplitude;
  const auto& pk = s.mode_k.amplitude;
  const cplx e = std::polar(1.0, s.theta);
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    const double tau = tau_s[i];
    const cplx gjk = mode_transform(f, pj, pk, tau);
    const cplx gkj = mode_transform(f, pk, pj, tau);
    const cplx gjj = mode_transform(f, pj, pj, tau);
    const cplx gkk = mode_transform(f, pk, pk, tau);
    const double v = (s.norm_c - 0.5 * (std::norm(gjk) + std::norm(gkj)) +
                      (e * gjj * std::conj(gkk)).real()) /
                     (2.0 * s.norm_c);
    t.value[i] = v;
  }
  return t;
}

FringeTrace fringes_pjk_gaussian(const GaussianModel& g,
                                 const GaussianHerald& h,
                                 const std::vector<double>& tau_s) {
  FringeTrace t;
  t.tau = tau_s;
  t.value.resize(tau_s.size());
  t.meta = {{"quantity", "P_jk"}, {"model", "gaussian"}};
  const double s2 = g.sigma_s * g.sigma_s;
  const double o2 = h.overlap * h.overlap;
  const double dw = h.center_j - h.center_k;
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    const double tau = tau_s[i];
    const double env = std::exp(-s2 * tau * tau);
    t.value[i] = (1.0 + env * std::cos(dw * tau + h.theta) -
                  o2 * (env + std::cos(h.theta))) /
                 (2.0 * h.norm_c);
  }
  return t;
}

FringeTrace fringes_pjk_approx(const GaussianModel& g, double omega_j,
                               double omega_k, double tau_i,
                               const std::vector<double>& tau_s) {
  FringeTrace t;
  t.tau = tau_s;
  t.value.resize(tau_s.size());
  t.meta = {{"quantity", "P_jk"}, {"model", "far-bin"}};
  const double dw = g.herald_center(omega_j) - g.herald_center(omega_k);
  const double tp = g.alpha == 0.0 ? 0.0 : scaled_idler_delay(g, tau_i);
  const double s2 = g.sigma_s * g.sigma_s;
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    const double tau = tau_s[i];
    t.value[i] = 0.5 * (1.0 + std::exp(-s2 * tau * tau) * std::cos(dw * (tau - tp)));
  }
  return t;
}

FringeTrace fringes_degenerate_limit(const GaussianModel& g, double tau_i,
                                     const std::vector<double>& tau_s,
                                     LimitForm form) {
  FringeTrace t;
  t.tau = tau_s;
  t.value.resize(tau_s.size());
  t.meta = {{"quantity", "P_jj"},
            {"model", form == LimitForm::kDerived ? "degenerate-derived"
                                                  : "degenerate-as-printed"}};
  const double s2 = g.sigma_s * g.sigma_s;
  const double tp = tau_i == 0.0 ? 0.0 : scaled_idler_delay(g, tau_i);
  const double den = form == LimitForm::kDerived ? 1.0 + 2.0 * s2 * tp * tp
                                                 : 1.0 + 4.0 * s2 * tp * tp;
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    const double tau = tau_s[i];
    const double u = tau - tp;
    t.value[i] = 0.5 - 0.5 * (2.0 * s2 * u * u - 1.0) / den * std::exp(-s2 * tau * tau);
  }
  return t;
}

Map2D peak2d(const Jsa& f, const std::vector<double>& tau_s,
             const std::vector<double>& tau_i) {
  const auto& gs = f.signal_grid();
  const auto& gi = f.idler_grid();
  const auto ns = static_cast<Eigen::Index>(gs.size());
  const auto ni = static_cast<Eigen::Index>(gi.size());
  const auto ts = static_cast<Eigen::Index>(tau_s.size());
  const auto ti = static_cast<Eigen::Index>(tau_i.size());
  const Eigen::MatrixXd jsi = f.samples().cwiseAbs2();
  Eigen::MatrixXcd es(ts, ns);
  for (Eigen::Index t = 0; t < ts; ++t) {
    for (Eigen::Index a = 0; a < ns; ++a) {
      es(t, a) = gs.weights()[static_cast<std::size_t>(a)] *
                 std::polar(1.0, gs[static_cast<std::size_t>(a)] * tau_s[static_cast<std::size_t>(t)]);
    }
  }
  Eigen::MatrixXcd ei(ni, ti);
  for (Eigen::Index b = 0; b < ni; ++b) {
    for (Eigen::Index t = 0; t < ti; ++t) {
      ei(b, t) = gi.weights()[static_cast<std::size_t>(b)] *
                 std::polar(1.0, gi[static_cast<std::size_t>(b)] * tau_i[static_cast<std::size_t>(t)]);
    }
  }
  const Eigen::MatrixXcd ft = es * jsi.cast<cplx>() * ei;

  // Overlap integrals int |rho(x,x')|^2 e^{i(x-x')tau} for each party.
  auto hom_term = [](const ReducedDensity& rho, const std::vector<double>& taus) {
    const auto n = static_cast<Eigen::Index>(rho.grid.size());
    const Eigen::MatrixXd r2 = rho.kernel.cwiseAbs2();
    std::vector<double> out(taus.size());
    for (std::size_t t = 0; t < taus.size(); ++t) {
      Eigen::VectorXcd e(n);
      for (Eigen::Index a = 0; a < n; ++a) {
        e(a) = rho.grid.weights()[static_cast<std::size_t>(a)] *
               std::polar(1.0, rho.grid[static_cast<std::size_t>(a)] * taus[t]);
      }
      out[t] = (e.adjoint() * r2.cast<cplx>() * e)(0, 0).real();
    }
    return out;
  };
  const auto t4 = hom_term(reduced_density(f, Party::kSignal), tau_s);
  const auto t3 = hom_term(reduced_density(f, Party::kIdler), tau_i);

  Map2D m;
  m.x_name = "tau_s";
  m.y_name = "tau_i";
  m.x = tau_s;
  m.y = tau_i;
  m.values.resize(ts, ti);
  for (Eigen::Index a = 0; a < ts; ++a) {
    for (Eigen::Index b = 0; b < ti; ++b) {
      m.values(a, b) = 0.25 * (1.0 + std::norm(ft(a, b)) - t3[static_cast<std::size_t>(b)] -
                               t4[static_cast<std::size_t>(a)]);
    }
  }
  m.meta = {{"quantity", "P"}, {"model", "quadrature"}};
  return m;
}

Map2D peak2d_gaussian(const GaussianModel& g, const std::vector<double>& tau_s,
                      const std::vector<double>& tau_i) {
  const double k = g.schmidt_number();
  const double ss2 = g.sigma_s * g.sigma_s;
  const double si2 = g.sigma_i * g.sigma_i;
  Map2D m;
  m.x_name = "tau_s";
  m.y_name = "tau_i";
  m.x = tau_s;
  m.y = tau_i;
  m.values.resize(static_cast<Eigen::Index>(tau_s.size()),
                  static_cast<Eigen::Index>(tau_i.size()));
  for (std::size_t a = 0; a < tau_s.size(); ++a) {
    const double x = tau_s[a];
    for (std::size_t b = 0; b < tau_i.size(); ++b) {
      const double y = tau_i[b];
      const double q = k * k * (ss2 * x * x + si2 * y * y -
                                4.0 * g.alpha * ss2 * si2 * x * y);
      m.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          0.25 * (1.0 + std::exp(-q) - std::exp(-si2 * y * y) / k -
                  std::exp(-ss2 * x * x) / k);
    }
  }
  m.meta = {{"quantity", "P"}, {"model", "gaussian"}};
  return m;
}

FringeTrace peak_from_heralds(const Jsa& f, double tau_i,
                              const std::vector<double>& tau_s,
                              const std::vector<double>& nodes,
                              const std::vector<double>& weights) {
  require(nodes.size() == weights.size(), ErrorCode::kInvalidArgument,
          "herald nodes and weights differ in length");
  const ModeColumns mc = mode_columns(f, nodes);
  const Eigen::VectorXd w = weights_of(f.signal_grid());
  const auto& gs = f.signal_grid();
  const auto h = static_cast<Eigen::Index>(nodes.size());
  const Eigen::MatrixXcd gram = mc.phi.adjoint() * w.asDiagonal() * mc.phi;
  FringeTrace t;
  t.tau = tau_s;
  t.value.assign(tau_s.size(), 0.0);
  t.meta = {{"quantity", "P"}, {"model", "herald-sum"},
            {"tau_i_ps", fmt::format("{}", tau_i)}};
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    Eigen::VectorXcd e(w.size());
    for (Eigen::Index a = 0; a < w.size(); ++a) {
      e(a) = w(a) * std::polar(1.0, gs[static_cast<std::size_t>(a)] * tau_s[i]);
    }
    // gt(j, k) = G_jk(tau) = int phi_j* phi_k e^{i w tau}.
    const Eigen::MatrixXcd gt = mc.phi.adjoint() * e.asDiagonal() * mc.phi;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < h; ++j) {
      for (Eigen::Index k = 0; k < h; ++k) {
        const double theta = (nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(k)]) * tau_i;
        const double c = 1.0 - std::norm(gram(j, k)) * std::cos(theta);
        if (c < 1e-12) continue;
        const double p = 0.5 * mc.weight(j) * mc.weight(k) * c;
        const double pjk = (c - 0.5 * (std::norm(gt(j, k)) + std::norm(gt(k, j))) +
                            (std::polar(1.0, theta) * gt(j, j) * std::conj(gt(k, k))).real()) /
                           (2.0 * c);
        acc += weights[static_cast<std::size_t>(j)] * weights[static_cast<std::size_t>(k)] * p * pjk;
      }
    }
    t.value[i] = acc;
  }
  return t;
}

}  // namespace fsw
