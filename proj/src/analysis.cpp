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

#include "analysis.hpp"

#include <fftw3.h>
#include <gsl/gsl_blas.h>
#include <gsl/gsl_cdf.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "common.hpp"

namespace fsw {

namespace {

std::size_t param_count(FitModel m) {
  switch (m) {
    case FitModel::kFarBin:
      return 4;
    case FitModel::kDelayed:
      return 5;
    case FitModel::kDegenerate:
      return 4;
    case FitModel::kEnvelope:
      return 3;
    case FitModel::kSinusoid:
      return 4;
  }
  return 0;
}

struct FitData {
  FitModel model;
  const std::vector<double>* t;
  const std::vector<double>* y;
  std::vector<double> sqrt_w;
};

int residuals(const gsl_vector* x, void* raw, gsl_vector* f) {
  const auto* d = static_cast<const FitData*>(raw);
  std::vector<double> p(x->size);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = gsl_vector_get(x, i);
  for (std::size_t i = 0; i < d->t->size(); ++i) {
    const double m = fit_model_value(d->model, p, (*d->t)[i]);
    gsl_vector_set(f, i, d->sqrt_w[i] * (m - (*d->y)[i]));
  }
  return GSL_SUCCESS;
}

struct RawFit {
  std::vector<double> p;
  std::vector<double> err;
  double chi2 = 0.0;
  bool ok = false;
  std::string message;
};

RawFit run_lm(const FitData& data, const std::vector<double>& start,
              bool weighted) {
  RawFit r;
  const std::size_t n = data.t->size();
  const std::size_t np = start.size();
  const gsl_multifit_nlinear_type* type = gsl_multifit_nlinear_trust;
  gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
  params.trs = gsl_multifit_nlinear_trs_lm;
  gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(type, &params, n, np);
  gsl_multifit_nlinear_fdf fdf;
  fdf.f = residuals;
  fdf.df = nullptr;
  fdf.fvv = nullptr;
  fdf.n = n;
  fdf.p = np;
  fdf.params = const_cast<FitData*>(&data);
  gsl_vector* x = gsl_vector_alloc(np);
  for (std::size_t i = 0; i < np; ++i) gsl_vector_set(x, i, start[i]);
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  int info = 0;
  int status = gsl_multifit_nlinear_init(x, &fdf, w);
  if (status == GSL_SUCCESS) {
    status = gsl_multifit_nlinear_driver(400, 1e-14, 1e-14, 1e-14, nullptr, nullptr, &info, w);
  }
  const gsl_vector* xf = gsl_multifit_nlinear_position(w);
  const gsl_vector* res = gsl_multifit_nlinear_residual(w);
  double chi2 = 0.0;
  gsl_blas_ddot(res, res, &chi2);
  r.p.resize(np);
  for (std::size_t i = 0; i < np; ++i) r.p[i] = gsl_vector_get(xf, i);
  r.chi2 = chi2;
  r.ok = std::isfinite(chi2) && (status == GSL_SUCCESS || status == GSL_EMAXITER ||
                                 status == GSL_ENOPROG);
  r.message = gsl_strerror(status);
  gsl_matrix* covar = gsl_matrix_alloc(np, np);
  const gsl_matrix* jac = gsl_multifit_nlinear_jac(w);
  gsl_multifit_nlinear_covar(jac, 0.0, covar);
  const double dof = static_cast<double>(n) - static_cast<double>(np);
  const double scale = weighted ? 1.0 : (dof > 0.0 ? chi2 / dof : 0.0);
  r.err.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    r.err[i] = std::sqrt(std::max(gsl_matrix_get(covar, i, i) * scale, 0.0));
  }
  gsl_set_error_handler(old);
  gsl_matrix_free(covar);
  gsl_vector_free(x);
  gsl_multifit_nlinear_free(w);
  return r;
}

// Uniform resampling so the FFT sees equal steps.
std::vector<double> uniform_samples(const std::vector<double>& t,
                                    const std::vector<double>& y,
                                    double& step) {
  const std::size_t n = t.size();
  step = (t.back() - t.front()) / static_cast<double>(n - 1);
  std::vector<double> out(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = t.front() + step * static_cast<double>(i);
    while (k + 2 < n && t[k + 1] < ti) ++k;
    const double a = (ti - t[k]) / (t[k + 1] - t[k]);
    out[i] = y[k] + std::clamp(a, 0.0, 1.0) * (y[k + 1] - y[k]);
  }
  return out;
}

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Power spectrum of real samples with zero padding by `pad`.
std::vector<double> power_spectrum(const std::vector<double>& v, std::size_t pad) {
  const std::size_t n = v.size() * pad;
  std::vector<double> in(n, 0.0);
  std::copy(v.begin(), v.end(), in.begin());
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> p(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    p[i] = out[i][0] * out[i][0] + out[i][1] * out[i][1];
  }
  return p;
}

// Largest local maxima of the padded spectrum, as angular frequencies.
std::vector<double> frequency_candidates(const std::vector<double>& t,
                                         const std::vector<double>& r,
                                         std::size_t count) {
  double step = 0.0;
  std::vector<double> u = uniform_samples(t, r, step);
  const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
  for (auto& v : u) v -= mean;
  constexpr std::size_t kPad = 8;
  const std::vector<double> p = power_spectrum(u, kPad);
  std::vector<std::pair<double, std::size_t>> peaks;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] >= p[i - 1] && p[i] >= p[i + 1]) peaks.emplace_back(p[i], i);
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  const double n = static_cast<double>(u.size() * kPad);
  std::vector<double> out;
  for (std::size_t i = 0; i < std::min(count, peaks.size()); ++i) {
    out.push_back(2.0 * kPi * static_cast<double>(peaks[i].second) / (n * step));
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void canonicalize(FitModel m, std::vector<double>& p) {
  switch (m) {
    case FitModel::kFarBin:
      p[2] = std::abs(p[2]);
      p[3] = std::abs(p[3]);
      break;
    case FitModel::kDelayed:
      p[2] = std::abs(p[2]);
      if (p[3] < 0.0) {
        p[3] = -p[3];
        p[4] = -p[4];
      }
      if (p[1] < 0.0) {
        p[1] = -p[1];
        p[4] += kPi;
      }
      p[4] = std::remainder(p[4], 2.0 * kPi);
      break;
    case FitModel::kDegenerate:
    case FitModel::kEnvelope:
      p[2] = std::abs(p[2]);
      break;
    case FitModel::kSinusoid:
      if (p[2] < 0.0) {
        p[2] = -p[2];
        p[3] = -p[3];
      }
      if (p[1] < 0.0) {
        p[1] = -p[1];
        p[3] += kPi;
      }
      p[3] = std::remainder(p[3], 2.0 * kPi);
      break;
  }
}

}  // namespace

std::string fit_model_name(FitModel m) {
  switch (m) {
    case FitModel::kFarBin:
      return "far-bin";
    case FitModel::kDelayed:
      return "delayed";
    case FitModel::kDegenerate:
      return "degenerate";
    case FitModel::kEnvelope:
      return "envelope";
    case FitModel::kSinusoid:
      return "sinusoid";
  }
  return "unknown";
}

double fit_model_value(FitModel m, const std::vector<double>& p, double t) {
  switch (m) {
    case FitModel::kFarBin:
      return p[0] * (1.0 + p[1] * std::exp(-t * t / (p[2] * p[2])) * std::cos(p[3] * t));
    case FitModel::kDelayed:
      return p[0] * (1.0 + p[1] * std::exp(-t * t / (p[2] * p[2])) * std::cos(p[3] * t - p[4]));
    case FitModel::kDegenerate: {
      const double u = t - p[3];
      return p[0] * (1.0 - p[1] * (2.0 * u * u / (p[2] * p[2]) - 1.0) *
                               std::exp(-t * t / (p[2] * p[2])));
    }
    case FitModel::kEnvelope:
      return p[0] * (1.0 + p[1] * std::exp(-t * t / (p[2] * p[2])));
    case FitModel::kSinusoid:
      return p[0] * (1.0 + p[1] * std::cos(p[2] * t - p[3]));
  }
  return 0.0;
}

double FringeFit::evaluate(double t) const { return fit_model_value(model, params, t); }

FringeFit fit_fringes(const FringeTrace& trace, FitModel model,
                      const FitOptions& opts) {
  const std::size_t n = trace.tau.size();
  const std::size_t np = param_count(model);
  require(n == trace.value.size(), ErrorCode::kInvalidArgument,
          "fit: tau and value sizes differ");
  require(n >= np + 2, ErrorCode::kInvalidArgument, "fit: too few points");
  require(std::is_sorted(trace.tau.begin(), trace.tau.end()),
          ErrorCode::kInvalidArgument, "fit: tau must be increasing");

  FitData data{model, &trace.tau, &trace.value, std::vector<double>(n, 1.0)};
  const bool weighted = trace.error.size() == n &&
                        std::all_of(trace.error.begin(), trace.error.end(),
                                    [](double e) { return e > 0.0; });
  if (weighted) {
    for (std::size_t i = 0; i < n; ++i) data.sqrt_w[i] = 1.0 / trace.error[i];
  }

  // Starting values.
  const double span = trace.tau.back() - trace.tau.front();
  std::vector<std::pair<double, double>> by_dist;
  for (std::size_t i = 0; i < n; ++i) by_dist.emplace_back(std::abs(trace.tau[i]), trace.value[i]);
  std::sort(by_dist.begin(), by_dist.end());
  std::vector<double> outer;
  for (std::size_t i = n - std::max<std::size_t>(n / 5, 2); i < n; ++i) outer.push_back(by_dist[i].second);
  double base = model == FitModel::kSinusoid
                    ? std::accumulate(trace.value.begin(), trace.value.end(), 0.0) / static_cast<double>(n)
                    : median(outer);
  if (base == 0.0) base = 1e-12;
  std::vector<double> r(n);
  double rmax = 0.0, s0 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = trace.value[i] / base - 1.0;
    rmax = std::max(rmax, std::abs(r[i]));
    s0 += r[i] * r[i];
    s2 += r[i] * r[i] * trace.tau[i] * trace.tau[i];
  }
  double width = opts.width_guess > 0.0 ? opts.width_guess
                                        : (s0 > 0.0 ? 2.0 * std::sqrt(s2 / s0) : 0.25 * span);
  if (!(width > 0.0)) width = 0.25 * span;
  std::vector<double> freqs;
  if (opts.frequency_guess > 0.0) freqs.push_back(opts.frequency_guess);
  if (model == FitModel::kFarBin || model == FitModel::kDelayed ||
      model == FitModel::kSinusoid) {
    for (const double f : frequency_candidates(trace.tau, r, 3)) freqs.push_back(f);
  }
  if (freqs.empty()) freqs.push_back(0.0);

  std::vector<std::vector<double>> starts;
  const double vis0 = std::max(rmax, 1e-3);
  const std::vector<double> wscale = {1.0, 0.5, 2.0};
  const std::vector<double> phases = {0.0, 0.5 * kPi, kPi, 1.5 * kPi};
  for (const double f : freqs) {
    for (const double ws : wscale) {
      switch (model) {
        case FitModel::kFarBin:
          starts.push_back({base, vis0, width * ws, f});
          break;
        case FitModel::kDelayed:
          for (const double ph : phases) starts.push_back({base, vis0, width * ws, f, ph});
          break;
        case FitModel::kDegenerate:
          starts.push_back({base, vis0, width * ws, 0.0});
          break;
        case FitModel::kEnvelope:
          starts.push_back({base, r[0] >= 0 ? vis0 : -vis0, width * ws});
          starts.push_back({base, -vis0, width * ws});
          break;
        case FitModel::kSinusoid:
          if (ws == 1.0) {
            for (const double ph : phases) starts.push_back({base, vis0, f, ph});
          }
          break;
      }
    }
  }
  if (static_cast<int>(starts.size()) > opts.restarts * 8) {
    starts.resize(static_cast<std::size_t>(opts.restarts) * 8);
  }

  RawFit best;
  best.chi2 = INFINITY;
  for (const auto& s : starts) {
    RawFit f = run_lm(data, s, weighted);
    if (f.ok && f.chi2 < best.chi2) best = f;
  }

  FringeFit out;
  out.model = model;
  out.dof = static_cast<int>(n) - static_cast<int>(np);
  if (!std::isfinite(best.chi2)) {
    out.converged = false;
    out.message = "no restart converged";
    return out;
  }
  canonicalize(model, best.p);
  out.params = best.p;
  out.errors = best.err;
  out.chi2 = best.chi2;
  out.converged = true;
  out.message = best.message;
  out.baseline = best.p[0];
  out.visibility = best.p[1];
  switch (model) {
    case FitModel::kFarBin:
      out.width = best.p[2];
      out.frequency = best.p[3];
      break;
    case FitModel::kDelayed:
      out.width = best.p[2];
      out.frequency = best.p[3];
      out.phase = best.p[4];
      break;
    case FitModel::kDegenerate:
      out.width = best.p[2];
      out.phase = best.p[3];
      break;
    case FitModel::kEnvelope:
      out.width = best.p[2];
      break;
    case FitModel::kSinusoid:
      out.frequency = best.p[2];
      out.phase = best.p[3];
      break;
  }

  // Peak of the fitted model and its delta-method error.
  constexpr int kDense = 4001;
  double tpk = trace.tau.front();
  double peak = -INFINITY;
  for (int i = 0; i < kDense; ++i) {
    const double t = trace.tau.front() + span * i / (kDense - 1);
    const double v = out.evaluate(t);
    if (v > peak) {
      peak = v;
      tpk = t;
    }
  }
  double var = 0.0;
  for (std::size_t k = 0; k < np; ++k) {
    std::vector<double> q = out.params;
    const double h = 1e-6 * std::max(std::abs(q[k]), 1e-6);
    q[k] += h;
    const double g = (fit_model_value(model, q, tpk) - peak) / h;
    var += g * g * out.errors[k] * out.errors[k];
  }
  out.peak = peak;
  out.peak_error = std::sqrt(var);
  out.witness = peak - opts.witness_level > 3.0 * out.peak_error &&
                peak > opts.witness_level;
  return out;
}

Estimate visibility(const FringeTrace& trace, FitModel model) {
  const FringeFit f = fit_fringes(trace, model);
  require(f.converged, ErrorCode::kNumeric, "visibility: fit did not converge");
  if (model == FitModel::kSinusoid) return {f.visibility, f.errors[1]};
  const double span = trace.tau.back() - trace.tau.front();
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < 4001; ++i) {
    const double v = f.evaluate(trace.tau.front() + span * i / 4000.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {(hi - lo) / (hi + lo), f.errors[1]};
}

double oscillation_amplitude(const FringeTrace& trace) {
  const FringeFit f = fit_fringes(trace, FitModel::kEnvelope);
  require(f.converged, ErrorCode::kNumeric, "envelope fit did not converge");
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < trace.tau.size(); ++i) {
    const double res = trace.value[i] - f.evaluate(trace.tau[i]);
    lo = std::min(lo, res);
    hi = std::max(hi, res);
  }
  return hi - lo;
}

SpectralPeak dominant_frequency(const FringeTrace& trace) {
  const std::size_t n = trace.tau.size();
  require(n >= 4, ErrorCode::kInvalidArgument, "spectrum: too few points");
  const double step = (trace.tau.back() - trace.tau.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    require(std::abs(trace.tau[i] - trace.tau[i - 1] - step) < 1e-9 * std::max(std::abs(step), 1.0),
            ErrorCode::kInvalidArgument, "spectrum: samples must be uniform");
  }
  std::vector<double> v = trace.value;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  for (auto& x : v) x -= mean;
  const std::vector<double> p = power_spectrum(v, 1);
  std::size_t best = 1;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return {best, 2.0 * kPi * static_cast<double>(best) / (static_cast<double>(n) * step)};
}

ChiSquare chi_square_test(const std::vector<double>& observed,
                          const std::vector<double>& expected,
                          double min_expected, int fitted_params) {
  require(observed.size() == expected.size(), ErrorCode::kInvalidArgument,
          "chi-square: size mismatch");
  ChiSquare c;
  double pool_o = 0.0, pool_e = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < min_expected) {
      pool_o += observed[i];
      pool_e += expected[i];
      continue;
    }
    const double d = observed[i] - expected[i];
    c.chi2 += d * d / expected[i];
    ++bins;
  }
  if (pool_e > 0.0) {
    const double d = pool_o - pool_e;
    c.chi2 += d * d / pool_e;
    ++bins;
  }
  c.dof = std::max(bins - 1 - fitted_params, 1);
  c.p_value = gsl_cdf_chisq_Q(c.chi2, c.dof);
  return c;
}

std::vector<LabeledMap> symmetrize_jsi(const std::vector<LabeledMap>& maps) {
  require(!maps.empty(), ErrorCode::kInvalidArgument, "symmetrize: no maps");
  std::map<std::pair<int, int>, const LabeledMap*> by_label;
  for (const auto& m : maps) {
    require(m.map.x == maps.front().map.x && m.map.y == maps.front().map.y,
            ErrorCode::kInvalidArgument, "symmetrize: axes differ");
    by_label[{m.j, m.k}] = &m;
  }
  std::vector<LabeledMap> out;
  for (const auto& [key, m] : by_label) {
    const auto [j, k] = key;
    if (j == k) continue;
    const int lo = std::min(j, k);
    const int hi = std::max(j, k);
    if (j != lo && by_label.count({lo, hi})) continue;
    LabeledMap s;
    s.j = lo;
    s.k = hi;
    s.map = m->map;
    const auto it = by_label.find({hi, lo});
    const auto it2 = by_label.find({lo, hi});
    if (it != by_label.end() && it2 != by_label.end()) {
      s.map.values = 0.5 * (it->second->map.values + it2->second->map.values);
    }
    const double sum = s.map.values.sum();
    require(sum > 0.0, ErrorCode::kDomain, "symmetrize: empty map");
    s.map.values /= sum;
    out.push_back(std::move(s));
  }
  return out;
}

OverlapMatrix overlap_matrix(const std::vector<LabeledMap>& modes,
                             OverlapNorm norm) {
  require(!modes.empty(), ErrorCode::kInvalidArgument, "overlap: no modes");
  OverlapMatrix m;
  m.norm = norm;
  const auto n = static_cast<Eigen::Index>(modes.size());
  m.values.resize(n, n);
  for (const auto& md : modes) m.labels.emplace_back(md.j, md.k);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const auto& fa = modes[static_cast<std::size_t>(a)].map.values;
      const auto& fb = modes[static_cast<std::size_t>(b)].map.values;
      require(fa.rows() == fb.rows() && fa.cols() == fb.cols(),
              ErrorCode::kInvalidArgument, "overlap: map shapes differ");
      double v = fa.cwiseProduct(fb).sum();
      if (norm == OverlapNorm::kCosine) {
        const double d = std::sqrt(fa.squaredNorm() * fb.squaredNorm());
        v = d > 0.0 ? v / d : 0.0;
      }
      m.values(a, b) = v;
      m.values(b, a) = v;
    }
  }
  return m;
}

std::vector<std::vector<std::size_t>> select_orthogonal(
    const OverlapMatrix& m, double threshold) {
  const std::size_t n = m.labels.size();
  require(n > 0, ErrorCode::kInvalidArgument, "select: no modes");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return m.labels[a] < m.labels[b]; });
  auto ov = [&](std::size_t a, std::size_t b) {
    return m.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  std::set<std::vector<std::pair<int, int>>> seen;
  std::vector<std::vector<std::size_t>> out;
  for (const std::size_t seed : order) {
    std::vector<std::size_t> chosen = {seed};
    while (true) {
      std::size_t pick = n;
      double pick_max = INFINITY;
      for (const std::size_t c : order) {
        if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
        double worst = 0.0;
        bool ok = true;
        for (const std::size_t s : chosen) {
          const double o = ov(c, s);
          if (!(o < threshold)) {
            ok = false;
            break;
          }
          worst = std::max(worst, o);
        }
        if (!ok) continue;
        // Strict comparison keeps the first label in sorted order on ties.
        if (worst < pick_max) {
          pick = c;
          pick_max = worst;
        }
      }
      if (pick == n) break;
      chosen.push_back(pick);
    }
    std::sort(chosen.begin(), chosen.end(),
              [&](std::size_t a, std::size_t b) { return m.labels[a] < m.labels[b]; });
    std::vector<std::pair<int, int>> key;
    for (const auto c : chosen) key.push_back(m.labels[c]);
    if (seen.insert(key).second) out.push_back(chosen);
  }
  return out;
}

}  // namespace fsw
