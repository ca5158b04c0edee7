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

#ifndef FOURSWAP_SRC_INSTRUMENT_HPP_
#define FOURSWAP_SRC_INSTRUMENT_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace fsw {

// Time-of-flight spectrometer channel.
struct TofsConfig {
  double dispersion = 1000.0;     // ps/nm
  double lambda0 = 830.0;         // nm
  double jitter_fwhm = 20.0;      // ps, gaussian
  double tdc_bin = 100.0;         // ps
  double window = 10.0;           // nm, full width centered on lambda0
  double insertion_loss_db = 0.0;

  static TofsConfig cfbg();   // 1000 ps/nm, 100 ps bins
  static TofsConfig spool();  // 50 ps/nm, 100 ps bins

  void validate() const;
  double jitter_sigma() const;
  // Clock offset, in TDC bins, keeping every in-window tag nonnegative.
  std::int64_t offset_bins() const;
  // Survival probability implied by the insertion loss.
  double transmission() const;
};

// T / D in nm.
double spectral_resolution(const TofsConfig& cfg);
// Wavelength standard deviation of jitter plus TDC quantization, the latter
// counted as a uniform T^2 / 12 variance.
double composite_resolution_sigma_nm(const TofsConfig& cfg);

// Result of pushing one photon through the spectrometer.
struct Arrival {
  bool in_window = false;
  double time = 0.0;       // ps, before quantization, offset included
  std::int64_t tag = 0;    // TDC bin index
};
Arrival freq_to_time(double lambda_nm, const TofsConfig& cfg,
                     std::mt19937_64& rng);
// Deterministic part: D (lambda - lambda0) in ps.
double dispersion_delay(double lambda_nm, const TofsConfig& cfg);

// Pixel index <-> wavelength <-> detuning, pixel 0 at lambda0.
class PixelMap {
 public:
  explicit PixelMap(const TofsConfig& cfg);
  double pitch_nm() const { return pitch_; }
  std::int64_t pixel_of_tag(std::int64_t tag) const { return tag - offset_; }
  std::int64_t pixel_of_wavelength(double lambda_nm) const;
  double wavelength(std::int64_t pixel) const;
  // Angular detuning from omega(lambda0), rad/ps.
  double detuning(std::int64_t pixel) const;
  // Half-open wavelength interval covered by a pixel.
  std::pair<double, double> bounds_nm(std::int64_t pixel) const;
  // Pixels spanning the spectral window.
  std::int64_t first_pixel() const;
  std::int64_t last_pixel() const;

 private:
  double lambda0_ = 0.0;
  double pitch_ = 0.0;
  double window_ = 0.0;
  std::int64_t offset_ = 0;
};

std::vector<std::int64_t> pixelize(const std::vector<std::int64_t>& tags,
                                   const TofsConfig& cfg);

// Pixel, wavelength (nm) rows across the spectral window.
std::vector<std::pair<std::int64_t, double>> calibration_table(
    const TofsConfig& cfg);

}  // namespace fsw

#endif  // FOURSWAP_SRC_INSTRUMENT_HPP_
