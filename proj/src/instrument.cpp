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

#include "instrument.hpp"

#include <cmath>

#include "common.hpp"

namespace fsw {

TofsConfig TofsConfig::cfbg() {
  TofsConfig c;
  c.dispersion = 1000.0;
  c.tdc_bin = 100.0;
  c.window = 10.0;
  c.insertion_loss_db = 10.0;
  return c;
}

TofsConfig TofsConfig::spool() {
  TofsConfig c;
  c.dispersion = 50.0;
  c.tdc_bin = 100.0;
  c.window = 40.0;
  c.insertion_loss_db = 1.0;
  return c;
}

void TofsConfig::validate() const {
  require(dispersion > 0.0, ErrorCode::kConfig, "tofs: dispersion must be > 0");
  require(tdc_bin > 0.0, ErrorCode::kConfig, "tofs: tdc_bin must be > 0");
  require(window > 0.0, ErrorCode::kConfig, "tofs: window must be > 0");
  require(jitter_fwhm >= 0.0, ErrorCode::kConfig, "tofs: jitter_fwhm must be >= 0");
  require(lambda0 > 0.0, ErrorCode::kConfig, "tofs: lambda0 must be > 0");
  require(insertion_loss_db >= 0.0, ErrorCode::kConfig,
          "tofs: insertion_loss_db must be >= 0");
}

double TofsConfig::jitter_sigma() const { return jitter_fwhm / kFwhmPerSigma; }

std::int64_t TofsConfig::offset_bins() const {
  const double span = 0.5 * dispersion * window + 10.0 * jitter_sigma();
  return static_cast<std::int64_t>(std::ceil(span / tdc_bin)) + 1;
}

double TofsConfig::transmission() const {
  return std::pow(10.0, -insertion_loss_db / 10.0);
}

double spectral_resolution(const TofsConfig& cfg) {
  cfg.validate();
  return cfg.tdc_bin / cfg.dispersion;
}

double composite_resolution_sigma_nm(const TofsConfig& cfg) {
  cfg.validate();
  const double s = cfg.jitter_sigma();
  return std::sqrt(s * s + cfg.tdc_bin * cfg.tdc_bin / 12.0) / cfg.dispersion;
}

double dispersion_delay(double lambda_nm, const TofsConfig& cfg) {
  return cfg.dispersion * (lambda_nm - cfg.lambda0);
}

Arrival freq_to_time(double lambda_nm, const TofsConfig& cfg,
                     std::mt19937_64& rng) {
  Arrival a;
  if (std::abs(lambda_nm - cfg.lambda0) > 0.5 * cfg.window) return a;
  a.in_window = true;
  double t = dispersion_delay(lambda_nm, cfg);
  if (cfg.jitter_fwhm > 0.0) {
    std::normal_distribution<double> jitter(0.0, cfg.jitter_sigma());
    t += jitter(rng);
  }
  a.time = t + (static_cast<double>(cfg.offset_bins()) + 0.5) * cfg.tdc_bin;
  a.tag = static_cast<std::int64_t>(std::floor(a.time / cfg.tdc_bin));
  if (a.tag < 0) a.tag = 0;
  return a;
}

PixelMap::PixelMap(const TofsConfig& cfg)
    : lambda0_(cfg.lambda0),
      pitch_(spectral_resolution(cfg)),
      window_(cfg.window),
      offset_(cfg.offset_bins()) {}

std::int64_t PixelMap::pixel_of_wavelength(double lambda_nm) const {
  return static_cast<std::int64_t>(std::floor((lambda_nm - lambda0_) / pitch_ + 0.5));
}

double PixelMap::wavelength(std::int64_t pixel) const {
  return lambda0_ + static_cast<double>(pixel) * pitch_;
}

double PixelMap::detuning(std::int64_t pixel) const {
  return omega_from_lambda(wavelength(pixel)) - omega_from_lambda(lambda0_);
}

std::pair<double, double> PixelMap::bounds_nm(std::int64_t pixel) const {
  const double c = wavelength(pixel);
  return {c - 0.5 * pitch_, c + 0.5 * pitch_};
}

std::int64_t PixelMap::first_pixel() const {
  return pixel_of_wavelength(lambda0_ - 0.5 * window_);
}

std::int64_t PixelMap::last_pixel() const {
  return pixel_of_wavelength(lambda0_ + 0.5 * window_);
}

std::vector<std::int64_t> pixelize(const std::vector<std::int64_t>& tags,
                                   const TofsConfig& cfg) {
  const PixelMap map(cfg);
  std::vector<std::int64_t> out;
  out.reserve(tags.size());
  for (const auto t : tags) out.push_back(map.pixel_of_tag(t));
  return out;
}

std::vector<std::pair<std::int64_t, double>> calibration_table(
    const TofsConfig& cfg) {
  const PixelMap map(cfg);
  std::vector<std::pair<std::int64_t, double>> rows;
  for (auto p = map.first_pixel(); p <= map.last_pixel(); ++p) {
    rows.emplace_back(p, map.wavelength(p));
  }
  return rows;
}

}  // namespace fsw
