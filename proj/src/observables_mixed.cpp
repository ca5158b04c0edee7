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

#include "observables_mixed.hpp"

#include <fmt/format.h>

#include <cmath>

#include "density.hpp"
#include "grid.hpp"

namespace fsw {

namespace {

Eigen::VectorXd signal_weights(const Jsa& f) {
  const auto& g = f.signal_grid();
  return Eigen::Map<const Eigen::VectorXd>(g.weights().data(),
                                           static_cast<Eigen::Index>(g.size()));
}

// Unnormalized columns f(., W) for each node.
Eigen::MatrixXcd raw_columns(const Jsa& f, const std::vector<double>& nodes) {
  const auto& gs = f.signal_grid();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(gs.size()),
                     static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t a = 0; a < gs.size(); ++a) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) = f(gs[a], nodes[j]);
    }
  }
  return m;
}

}  // namespace

double SpectralFilter::transmission(double omega) const {
  const double x = omega - center;
  switch (shape) {
    case FilterShape::kRect:
      return std::abs(x) <= 0.5 * width ? 1.0 : 0.0;
    case FilterShape::kGaussian: {
      const double s = width / kFwhmPerSigma;
      return std::exp(-x * x / (2.0 * s * s));
    }
    case FilterShape::kRectGauss: {
      if (blur <= 0.0) return std::abs(x) <= 0.5 * width ? 1.0 : 0.0;
      const double r = std::sqrt(2.0) * blur;
      return 0.5 * (std::erf((x + 0.5 * width) / r) - std::erf((x - 0.5 * width) / r));
    }
  }
  return 0.0;
}

std::pair<double, double> SpectralFilter::support() const {
  switch (shape) {
    case FilterShape::kRect:
      return {center - 0.5 * width, center + 0.5 * width};
    case FilterShape::kGaussian: {
      const double s = width / kFwhmPerSigma;
      return {center - 7.0 * s, center + 7.0 * s};
    }
    case FilterShape::kRectGauss:
      return {center - 0.5 * width - 7.0 * blur, center + 0.5 * width + 7.0 * blur};
  }
  return {center, center};
}

std::vector<SpectralFilter> filter_bank(double center, double width, int first,
                                        int last, FilterShape shape,
                                        double blur) {
  require(width > 0.0, ErrorCode::kInvalidArgument, "filter width must be > 0");
  require(last >= first, ErrorCode::kInvalidArgument, "empty filter bank");
  std::vector<SpectralFilter> bank;
  for (int n = first; n <= last; ++n) {
    bank.push_back({center + n * width, width, shape, blur});
  }
  return bank;
}

BandNodes band_nodes(const SpectralFilter& filter, int per_segment) {
  require(filter.width > 0.0, ErrorCode::kInvalidArgument,
          "filter width must be > 0");
  std::vector<std::pair<double, double>> segments;
  const double lo = filter.center - 0.5 * filter.width;
  const double hi = filter.center + 0.5 * filter.width;
  const auto sup = filter.support();
  switch (filter.shape) {
    case FilterShape::kRect:
      segments = {{lo, hi}};
      break;
    case FilterShape::kGaussian:
      segments = {{sup.first, filter.center}, {filter.center, sup.second}};
      break;
    case FilterShape::kRectGauss:
      if (filter.blur <= 0.0) {
        segments = {{lo, hi}};
      } else {
        segments = {{sup.first, lo}, {lo, hi}, {hi, sup.second}};
      }
      break;
  }
  BandNodes out;
  for (const auto& [a, b] : segments) {
    const GaussLegendre gl = gauss_legendre(static_cast<std::size_t>(per_segment), a, b);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      out.nodes.push_back(gl.nodes[i]);
      out.weights.push_back(gl.weights[i] * filter.transmission(gl.nodes[i]));
    }
  }
  return out;
}

double plm(const Jsa& f, const SpectralFilter& l, const SpectralFilter& m,
           double tau_i, int per_segment) {
  const BandNodes bl = band_nodes(l, per_segment);
  const BandNodes bm = band_nodes(m, per_segment);
  const Eigen::VectorXd w = signal_weights(f);
  const Eigen::MatrixXcd cl = raw_columns(f, bl.nodes);
  const Eigen::MatrixXcd cm = raw_columns(f, bm.nodes);
  const Eigen::MatrixXcd glm = cl.adjoint() * w.asDiagonal() * cm;
  const Eigen::VectorXd nl = (cl.cwiseAbs2().transpose() * w);
  const Eigen::VectorXd nm = (cm.cwiseAbs2().transpose() * w);
  double acc = 0.0;
  for (std::size_t a = 0; a < bl.nodes.size(); ++a) {
    for (std::size_t b = 0; b < bm.nodes.size(); ++b) {
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      const double th = (bl.nodes[a] - bm.nodes[b]) * tau_i;
      const double p = 0.5 * (nl(ia) * nm(ib) - std::norm(glm(ia, ib)) * std::cos(th));
      acc += bl.weights[a] * bm.weights[b] * std::max(p, 0.0);
    }
  }
  return acc;
}

MixedHeraldedState mixed_heralded_state(const Jsa& f, const SpectralFilter& l,
                                        const SpectralFilter& m, double tau_i,
                                        int per_segment) {
  MixedHeraldedState s;
  s.band_l = l;
  s.band_m = m;
  s.tau_i = tau_i;
  const BandNodes bl = band_nodes(l, per_segment);
  const BandNodes bm = band_nodes(m, per_segment);
  s.nodes_j = bl.nodes;
  s.nodes_k = bm.nodes;
  const Eigen::VectorXd w = signal_weights(f);
  s.phi_j = raw_columns(f, bl.nodes);
  s.phi_k = raw_columns(f, bm.nodes);
  const Eigen::VectorXd nj = (s.phi_j.cwiseAbs2().transpose() * w);
  const Eigen::VectorXd nk = (s.phi_k.cwiseAbs2().transpose() * w);
  for (Eigen::Index a = 0; a < nj.size(); ++a) {
    if (nj(a) > 0.0) s.phi_j.col(a) /= std::sqrt(nj(a));
  }
  for (Eigen::Index b = 0; b < nk.size(); ++b) {
    if (nk(b) > 0.0) s.phi_k.col(b) /= std::sqrt(nk(b));
  }
  const Eigen::MatrixXcd gjj = s.phi_j.adjoint() * w.asDiagonal() * s.phi_j;
  const Eigen::MatrixXcd gkk = s.phi_k.adjoint() * w.asDiagonal() * s.phi_k;
  const Eigen::MatrixXcd gjk = s.phi_j.adjoint() * w.asDiagonal() * s.phi_k;
  const auto na = nj.size();
  const auto nb = nk.size();
  s.weights = Eigen::MatrixXd::Zero(na, nb);
  s.norm_c = Eigen::MatrixXd::Zero(na, nb);
  s.theta = Eigen::MatrixXd::Zero(na, nb);
  s.coherence = Eigen::Matrix2cd::Zero();
  double total = 0.0;
  for (Eigen::Index a = 0; a < na; ++a) {
    for (Eigen::Index b = 0; b < nb; ++b) {
      const double th = (bl.nodes[static_cast<std::size_t>(a)] - bm.nodes[static_cast<std::size_t>(b)]) * tau_i;
      const double c = 1.0 - std::norm(gjk(a, b)) * std::cos(th);
      s.theta(a, b) = th;
      s.norm_c(a, b) = c;
      if (c < 1e-12) continue;
      const double p = 0.5 * nj(a) * nk(b) * c;
      const double wt = bl.weights[static_cast<std::size_t>(a)] * bm.weights[static_cast<std::size_t>(b)] * p;
      s.weights(a, b) = wt;
      total += wt;
      const cplx e = std::polar(1.0, th);
      Eigen::Matrix2cd pure;
      pure << 1.0, -std::conj(e), -e, 1.0;
      s.coherence += (wt / (2.0 * c)) * pure;
    }
  }
  s.p_lm = total;
  if (!(total > 0.0)) {
    s.empty = true;
    return s;
  }
  s.weights /= total;
  s.coherence /= total;

  // Tr rho^2 = sum W_ab W_cd |<Psi_ab|Psi_cd>|^2.
  double purity = 0.0;
  for (Eigen::Index a = 0; a < na; ++a) {
    for (Eigen::Index b = 0; b < nb; ++b) {
      const double wab = s.weights(a, b);
      if (wab == 0.0) continue;
      const double tab = s.theta(a, b);
      const double cab = s.norm_c(a, b);
      for (Eigen::Index c = 0; c < na; ++c) {
        for (Eigen::Index d = 0; d < nb; ++d) {
          const double wcd = s.weights(c, d);
          if (wcd == 0.0) continue;
          const double tcd = s.theta(c, d);
          const cplx inner =
              (gjj(a, c) * gkk(b, d) * (1.0 + std::polar(1.0, tcd - tab)) -
               gjk(a, d) * std::conj(gjk(c, b)) *
                   (std::polar(1.0, tcd) + std::polar(1.0, -tab))) /
              (2.0 * std::sqrt(cab * s.norm_c(c, d)));
          purity += wab * wcd * std::norm(inner);
        }
      }
    }
  }
  s.purity = purity;
  return s;
}

Map2D mixed_jsi(const Jsa& f, const MixedHeraldedState& s) {
  Map2D m;
  m.x_name = "omega_1";
  m.y_name = "omega_2";
  m.x = f.signal_grid().detunings();
  m.y = m.x;
  const auto n = static_cast<Eigen::Index>(m.x.size());
  m.values = Eigen::MatrixXd::Zero(n, n);
  m.meta = {{"quantity", "F_lm"},
            {"band_l_center", fmt::format("{}", s.band_l.center)},
            {"band_m_center", fmt::format("{}", s.band_m.center)},
            {"band_width", fmt::format("{}", s.band_l.width)},
            {"tau_i_ps", fmt::format("{}", s.tau_i)}};
  if (s.empty) return m;
  for (Eigen::Index a = 0; a < s.weights.rows(); ++a) {
    for (Eigen::Index b = 0; b < s.weights.cols(); ++b) {
      const double wt = s.weights(a, b);
      if (wt == 0.0) continue;
      const double scale = wt / (2.0 * s.norm_c(a, b));
      const cplx e = std::polar(1.0, s.theta(a, b));
      const auto pj = s.phi_j.col(a);
      const auto pk = s.phi_k.col(b);
      for (Eigen::Index x = 0; x < n; ++x) {
        const cplx jx = pj(x);
        const cplx kx = e * pk(x);
        for (Eigen::Index y = 0; y < n; ++y) {
          m.values(x, y) += scale * std::norm(jx * pk(y) - kx * pj(y));
        }
      }
    }
  }
  return m;
}

FringeTrace mixed_fringes(const Jsa& f, const MixedHeraldedState& s,
                          const std::vector<double>& tau_s) {
  FringeTrace t;
  t.tau = tau_s;
  t.value.assign(tau_s.size(), 0.0);
  t.meta = {{"quantity", "P_lm"},
            {"band_l_center", fmt::format("{}", s.band_l.center)},
            {"band_m_center", fmt::format("{}", s.band_m.center)},
            {"band_width", fmt::format("{}", s.band_l.width)},
            {"tau_i_ps", fmt::format("{}", s.tau_i)}};
  if (s.empty) return t;
  const Eigen::VectorXd w = signal_weights(f);
  const auto& gs = f.signal_grid();
  for (std::size_t i = 0; i < tau_s.size(); ++i) {
    Eigen::VectorXcd e(w.size());
    for (Eigen::Index a = 0; a < w.size(); ++a) {
      e(a) = w(a) * std::polar(1.0, gs[static_cast<std::size_t>(a)] * tau_s[i]);
    }
    const Eigen::MatrixXcd ejk = s.phi_j.adjoint() * e.asDiagonal() * s.phi_k;
    const Eigen::MatrixXcd ekj = s.phi_k.adjoint() * e.asDiagonal() * s.phi_j;
    const Eigen::VectorXcd ejj = (s.phi_j.conjugate().cwiseProduct(s.phi_j)).transpose() * e;
    const Eigen::VectorXcd ekk = (s.phi_k.conjugate().cwiseProduct(s.phi_k)).transpose() * e;
    double acc = 0.0;
    for (Eigen::Index a = 0; a < s.weights.rows(); ++a) {
      for (Eigen::Index b = 0; b < s.weights.cols(); ++b) {
        const double wt = s.weights(a, b);
        if (wt == 0.0) continue;
        const double c = s.norm_c(a, b);
        const double p = (c - 0.5 * (std::norm(ejk(a, b)) + std::norm(ekj(b, a))) +
                          (std::polar(1.0, s.theta(a, b)) * ejj(a) * std::conj(ekk(b))).real()) /
                         (2.0 * c);
        acc += wt * p;
      }
    }
    t.value[i] = acc;
  }
  return t;
}

double hom_purity_bound(const Jsa& f, const SpectralFilter& j,
                        const SpectralFilter& k, int per_segment) {
  const BandNodes bj = band_nodes(j, per_segment);
  const BandNodes bk = band_nodes(k, per_segment);
  const Eigen::VectorXd w = signal_weights(f);
  const Eigen::MatrixXcd cj = raw_columns(f, bj.nodes);
  const Eigen::MatrixXcd ck = raw_columns(f, bk.nodes);
  const Eigen::MatrixXcd g = cj.adjoint() * w.asDiagonal() * ck;
  const Eigen::VectorXd nj = (cj.cwiseAbs2().transpose() * w);
  const Eigen::VectorXd nk = (ck.cwiseAbs2().transpose() * w);
  const Eigen::Map<const Eigen::VectorXd> gj(bj.weights.data(), static_cast<Eigen::Index>(bj.weights.size()));
  const Eigen::Map<const Eigen::VectorXd> gk(bk.weights.data(), static_cast<Eigen::Index>(bk.weights.size()));
  const double zj = gj.dot(nj);
  const double zk = gk.dot(nk);
  require(zj > 0.0 && zk > 0.0, ErrorCode::kDomain,
          "purity bound: filter passes no idler weight");
  const double v = gj.transpose() * g.cwiseAbs2() * gk;
  return v / (zj * zk);
}

double hom_purity_bound_full_band(const Jsa& f) {
  return reduced_density(f, Party::kSignal).purity();
}

}  // namespace fsw
