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


#include "config.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common.hpp"

namespace fsw {

namespace {

KeySpec real_key(std::string name, std::string def, std::string doc) {
  return {std::move(name), KeyType::kReal, std::move(def), std::move(doc), {}, true};
}
KeySpec int_key(std::string name, std::string def, std::string doc) {
  return {std::move(name), KeyType::kInt, std::move(def), std::move(doc), {}, true};
}
KeySpec bool_key(std::string name, std::string def, std::string doc) {
  return {std::move(name), KeyType::kBool, std::move(def), std::move(doc), {}, true};
}
KeySpec list_key(std::string name, std::string def, std::string doc) {
  return {std::move(name), KeyType::kList, std::move(def), std::move(doc), {}, true};
}
KeySpec choice_key(std::string name, std::string def, std::string doc,
                   std::vector<std::string> choices) {
  return {std::move(name), KeyType::kChoice, std::move(def), std::move(doc),
          std::move(choices), true};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

const KeySpec& spec_of(const std::string& key) {
  for (const auto& k : config_schema()) {
    if (k.name == key) return k;
  }
  fail(ErrorCode::kConfig, fmt::format("config: unknown key '{}'", key));
}

ConfigValue convert(const KeySpec& k, const std::string& raw) {
  const std::string v = trim(raw);
  switch (k.type) {
    case KeyType::kReal: {
      double d = 0.0;
      require(parse_real(v, d), ErrorCode::kConfig,
              fmt::format("config: {}: expected a real number, got '{}'", k.name, v));
      return d;
    }
    case KeyType::kInt: {
      std::int64_t i = 0;
      require(parse_int(v, i), ErrorCode::kConfig,
              fmt::format("config: {}: expected an integer, got '{}'", k.name, v));
      return i;
    }
    case KeyType::kBool:
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      fail(ErrorCode::kConfig,
           fmt::format("config: {}: expected true or false, got '{}'", k.name, v));
    case KeyType::kChoice: {
      const bool ok = std::find(k.choices.begin(), k.choices.end(), v) != k.choices.end();
      std::string all;
      for (const auto& c : k.choices) all += (all.empty() ? "" : ", ") + c;
      require(ok, ErrorCode::kConfig,
              fmt::format("config: {}: '{}' is not one of {}", k.name, v, all));
      return v;
    }
    case KeyType::kList:
      try {
        return parse_list(v);
      } catch (const Error& e) {
        fail(ErrorCode::kConfig, fmt::format("config: {}: {}", k.name, e.what()));
      }
    case KeyType::kText:
      return v;
  }
  fail(ErrorCode::kInternal, "config: bad key type");
}

std::string format_value(const ConfigValue& v) {
  struct Visitor {
    std::string operator()(double d) const { return fmt::format("{:.17g}", d); }
    std::string operator()(std::int64_t i) const { return fmt::format("{}", i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const std::vector<double>& l) const {
      std::string out;
      for (std::size_t i = 0; i < l.size(); ++i) {
        out += fmt::format("{}{:.17g}", i ? "," : "", l[i]);
      }
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = [] {
    std::vector<KeySpec> s = {
        choice_key("source.model", "gaussian", "JSA model", {"gaussian", "sinc"}),
        real_key("source.lambda0", "830", "center wavelength, nm"),
        real_key("source.sigma_s", "0.34174702166286053", "signal width sigma_S, rad/ps"),
        real_key("source.sigma_i", "3.0", "idler width sigma_I, rad/ps"),
        real_key("source.alpha", "0.4778368378778232", "correlation alpha, ps^2"),
        real_key("source.shift_s", "0", "signal center shift, rad/ps"),
        real_key("source.shift_i", "0", "idler center shift, rad/ps"),
        real_key("source.pump_bandwidth", "1", "sinc model pump bandwidth, rad/ps"),
        real_key("source.slope_s", "0", "sinc model signal slope, ps/mm"),
        real_key("source.slope_i", "0", "sinc model idler slope, ps/mm"),
        real_key("source.length", "1", "sinc model crystal length, mm"),
        real_key("source2.ds", "0", "source 2 signal translation, rad/ps"),
        real_key("source2.di", "0", "source 2 idler translation, rad/ps"),
        int_key("grid.count", "512", "samples per frequency axis"),
        real_key("grid.extent", "6", "grid half width in marginal standard deviations"),
        real_key("herald.bin_nm", "2", "wavelength step between herald bin indices, nm"),
        int_key("herald.j", "2", "first herald bin index"),
        int_key("herald.k", "-2", "second herald bin index"),
        list_key("delay.tau_s", "-3:3:301", "signal delays, ps"),
        list_key("delay.tau_i", "0", "idler delays, ps"),
        choice_key("filter.shape", "rect", "idler band shape", {"rect", "gaussian", "rectgauss"}),
        list_key("filter.widths_nm", "2,1,0.5,0.25,0.125,0.0625,0.03125", "band widths, nm"),
        real_key("filter.blur", "0", "rectgauss blur, rad/ps"),
        int_key("filter.per_segment", "16", "Gauss-Legendre nodes per band segment"),
        choice_key("instrument.signal", "cfbg", "signal spectrometer preset", {"cfbg", "spool"}),
        choice_key("instrument.idler", "cfbg", "idler spectrometer preset", {"cfbg", "spool"}),
        real_key("instrument.jitter_fwhm", "20", "detector jitter FWHM, ps"),
        bool_key("instrument.apply_insertion_loss", "false", "apply preset insertion losses"),
        real_key("instrument.efficiency", "1", "detection efficiency of every channel"),
        int_key("sim.pulses", "100000", "pulses per simulated run or scan point"),
        int_key("sim.seed", "1", "random seed"),
        real_key("sim.eta1", "1", "source 1 pair amplitude gain"),
        real_key("sim.eta2", "1", "source 2 pair amplitude gain"),
        bool_key("sim.double_pairs", "true", "include double-pair emission"),
        choice_key("sim.phase_mode", "averaged", "pump phase treatment", {"averaged", "fixed"}),
        real_key("sim.pump_phase", "0", "fixed pump phase, rad"),
        real_key("sim.window_ps", "100", "coincidence window, ps"),
        real_key("sim.tau_s", "0", "signal delay of a simulate run, ps"),
        real_key("sim.tau_i", "0", "idler delay of a simulate run, ps"),
        list_key("sim.scan_tau", "-3:3:25", "background scan delays, ps"),
        bool_key("sim.all_bins", "true", "count heralds in every bin pair"),
        real_key("dist.overlap", "0.8", "target source overlap"),
        real_key("dist.direction_s", "1", "translation direction, signal component"),
        real_key("dist.direction_i", "0", "translation direction, idler component"),
        list_key("dist.phases", "0:6.283185307179586:41", "pump phases, rad"),
        choice_key("dist.pairing", "cx", "port pairing", {"cx", "cy", "dx", "dy"}),
        int_key("dist.pulses_per_phase", "20000", "Monte Carlo pulses per phase"),
        int_key("ortho.bin_min", "-3", "lowest herald bin index"),
        int_key("ortho.bin_max", "3", "highest herald bin index"),
        real_key("ortho.threshold", "0.15", "overlap threshold"),
        choice_key("ortho.norm", "cosine", "overlap normalization", {"cosine", "unitsum"}),
    };
    KeySpec threads = int_key("threads", "1", "worker threads");
    threads.hashed = false;
    KeySpec out = {"out", KeyType::kText, "", "output directory", {}, false};
    s.push_back(threads);
    s.push_back(out);
    return s;
  }();
  return schema;
}

std::vector<double> parse_list(const std::string& text) {
  const std::string t = trim(text);
  require(!t.empty(), ErrorCode::kInvalidArgument, "empty list");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(trim(p));
    double a = 0.0, b = 0.0;
    std::int64_t n = 0;
    require(parts.size() == 3 && parse_real(parts[0], a) && parse_real(parts[1], b) &&
                parse_int(parts[2], n) && n >= 1,
            ErrorCode::kInvalidArgument,
            fmt::format("expected start:stop:count, got '{}'", t));
    require(n > 1 || a == b, ErrorCode::kInvalidArgument,
            "a range with one point needs start == stop");
    for (std::int64_t i = 0; i < n; ++i) {
      out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
  }
  std::stringstream ss(t);
  std::string p;
  while (std::getline(ss, p, ',')) {
    double d = 0.0;
    require(parse_real(trim(p), d), ErrorCode::kInvalidArgument,
            fmt::format("expected a number, got '{}'", trim(p)));
    out.push_back(d);
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) == 1,
          ErrorCode::kInternal, "sha256 failed");
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

RunConfig::RunConfig() {
  for (const auto& k : config_schema()) values_[k.name] = convert(k, k.default_value);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec& k = spec_of(key);
  values_[key] = convert(k, value);
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  std::map<std::string, int> seen;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::kConfig,
            fmt::format("{}:{}: expected key = value", origin, number));
    const std::string key = trim(line.substr(0, eq));
    const auto prev = seen.find(key);
    if (prev != seen.end()) {
      fail(ErrorCode::kConfig, fmt::format("{}:{}: {}: repeated key (first at line {})", origin,
                                           number, key, prev->second));
    }
    seen[key] = number;
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const Error& e) {
      fail(e.code(), fmt::format("{}:{}: {}", origin, number, e.what()));
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, fmt::format("cannot read config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const ConfigValue& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  require(it != values_.end(), ErrorCode::kConfig, fmt::format("config: unknown key '{}'", key));
  return it->second;
}

double RunConfig::real(const std::string& key) const {
  const auto* v = std::get_if<double>(&get(key));
  require(v != nullptr, ErrorCode::kInternal, fmt::format("config: {} is not real", key));
  return *v;
}

std::int64_t RunConfig::integer(const std::string& key) const {
  const auto* v = std::get_if<std::int64_t>(&get(key));
  require(v != nullptr, ErrorCode::kInternal, fmt::format("config: {} is not an integer", key));
  return *v;
}

bool RunConfig::flag(const std::string& key) const {
  const auto* v = std::get_if<bool>(&get(key));
  require(v != nullptr, ErrorCode::kInternal, fmt::format("config: {} is not a flag", key));
  return *v;
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto* v = std::get_if<std::string>(&get(key));
  require(v != nullptr, ErrorCode::kInternal, fmt::format("config: {} is not text", key));
  return *v;
}

const std::vector<double>& RunConfig::list(const std::string& key) const {
  const auto* v = std::get_if<std::vector<double>>(&get(key));
  require(v != nullptr, ErrorCode::kInternal, fmt::format("config: {} is not a list", key));
  return *v;
}

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& key, const std::string& what) {
    require(ok, ErrorCode::kConfig, fmt::format("config: {}: {}", key, what));
  };
  check(real("source.lambda0") > 0.0, "source.lambda0", "must be > 0");
  check(real("source.sigma_s") > 0.0, "source.sigma_s", "must be > 0");
  check(real("source.sigma_i") > 0.0, "source.sigma_i", "must be > 0");
  const double c = 2.0 * real("source.alpha") * real("source.sigma_s") * real("source.sigma_i");
  check(std::abs(c) < 1.0, "source.alpha",
        "2 |alpha| sigma_s sigma_i must be < 1 for a normalizable JSA");
  check(real("source.pump_bandwidth") > 0.0, "source.pump_bandwidth", "must be > 0");
  check(real("source.length") > 0.0, "source.length", "must be > 0");
  if (text("source.model") == "sinc") {
    check(real("source.slope_s") != 0.0 || real("source.slope_i") != 0.0, "source.slope_s",
          "sinc model needs a nonzero slope");
  }
  check(integer("grid.count") >= 16 && integer("grid.count") <= 8192, "grid.count",
        "must lie in [16, 8192]");
  check(real("grid.extent") >= 5.0, "grid.extent", "must be >= 5");
  check(real("herald.bin_nm") > 0.0, "herald.bin_nm", "must be > 0");
  check(integer("herald.j") != integer("herald.k"), "herald.j",
        "must differ from herald.k");
  for (const auto* key : {"filter.widths_nm"}) {
    for (const double w : list(key)) check(w > 0.0, key, "widths must be > 0");
  }
  check(real("filter.blur") >= 0.0, "filter.blur", "must be >= 0");
  check(text("filter.shape") != "rectgauss" || real("filter.blur") > 0.0, "filter.blur",
        "rectgauss needs blur > 0");
  check(integer("filter.per_segment") >= 2 && integer("filter.per_segment") <= 256,
        "filter.per_segment", "must lie in [2, 256]");
  check(real("instrument.jitter_fwhm") >= 0.0, "instrument.jitter_fwhm", "must be >= 0");
  check(real("instrument.efficiency") >= 0.0 && real("instrument.efficiency") <= 1.0,
        "instrument.efficiency", "must lie in [0, 1]");
  check(integer("sim.pulses") >= 1, "sim.pulses", "must be >= 1");
  check(integer("sim.seed") >= 0, "sim.seed", "must be >= 0");
  check(real("sim.eta1") >= 0.0, "sim.eta1", "must be >= 0");
  check(real("sim.eta2") >= 0.0, "sim.eta2", "must be >= 0");
  check(real("sim.eta1") + real("sim.eta2") > 0.0, "sim.eta1", "sim.eta1 and sim.eta2 are both 0");
  check(flag("sim.double_pairs") || real("sim.eta1") * real("sim.eta2") > 0.0,
        "sim.double_pairs", "no emission class left with these gains");
  check(real("sim.window_ps") > 0.0, "sim.window_ps", "must be > 0");
  check(real("dist.overlap") > 0.0 && real("dist.overlap") <= 1.0, "dist.overlap",
        "must lie in (0, 1]");
  check(real("dist.direction_s") != 0.0 || real("dist.direction_i") != 0.0, "dist.direction_s",
        "direction must be nonzero");
  check(integer("dist.pulses_per_phase") >= 1, "dist.pulses_per_phase", "must be >= 1");
  check(integer("ortho.bin_min") < integer("ortho.bin_max"), "ortho.bin_min",
        "must be < ortho.bin_max");
  check(integer("ortho.bin_max") - integer("ortho.bin_min") <= 24, "ortho.bin_max",
        "at most 25 bins");
  check(real("ortho.threshold") > 0.0, "ortho.threshold", "must be > 0");
  check(integer("threads") >= 1 && integer("threads") <= 1024, "threads", "must lie in [1, 1024]");
}

std::string RunConfig::canonical(bool hashed_only) const {
  std::string out;
  std::vector<const KeySpec*> keys;
  for (const auto& k : config_schema()) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(),
            [](const KeySpec* a, const KeySpec* b) { return a->name < b->name; });
  for (const KeySpec* k : keys) {
    if (hashed_only && !k->hashed) continue;
    out += fmt::format("{} = {}\n", k->name, format_value(values_.at(k->name)));
  }
  return out;
}

std::string RunConfig::hash() const { return sha256_hex(canonical(true)); }

}  // namespace fsw
