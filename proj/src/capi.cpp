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


#include "fourswap/fourswap.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "config.hpp"
#include "density.hpp"
#include "heralding.hpp"
#include "instrument.hpp"
#include "jsa.hpp"
#include "observables_pure.hpp"

struct fsw_config {
  fsw::RunConfig cfg;
};

struct fsw_result {
  fsw::RunResult result;
};

struct fsw_source {
  fsw::Jsa jsa;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
int guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FSW_OK;
  } catch (const fsw::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FSW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FSW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FSW_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  fsw::require(p != nullptr, fsw::ErrorCode::kInvalidArgument,
               std::string(what) + " must not be null");
}

fsw::Jsa source_from(const fsw::RunConfig& c) {
  const fsw::GridSpec g{static_cast<std::size_t>(c.integer("grid.count")), c.real("grid.extent")};
  if (c.text("source.model") == "sinc") {
    fsw::SincModel m;
    m.pump_bandwidth = c.real("source.pump_bandwidth");
    m.slope_s = c.real("source.slope_s");
    m.slope_i = c.real("source.slope_i");
    m.length = c.real("source.length");
    return fsw::Jsa::sinc(m, c.real("source.lambda0"), g);
  }
  fsw::GaussianModel m;
  m.sigma_s = c.real("source.sigma_s");
  m.sigma_i = c.real("source.sigma_i");
  m.alpha = c.real("source.alpha");
  m.shift_s = c.real("source.shift_s");
  m.shift_i = c.real("source.shift_i");
  return fsw::Jsa::gaussian(m, c.real("source.lambda0"), g);
}

}  // namespace

extern "C" {

const char* fsw_version(void) { return "1.0.0"; }

const char* fsw_last_error(void) { return g_last_error.c_str(); }

const char* fsw_status_name(int status) {
  switch (status) {
    case FSW_OK:
      return "ok";
    case FSW_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case FSW_ERR_CONFIG:
      return "configuration error";
    case FSW_ERR_DOMAIN:
      return "domain error";
    case FSW_ERR_NUMERIC:
      return "numerical error";
    case FSW_ERR_IO:
      return "i/o error";
    case FSW_ERR_INTERNAL:
      return "internal error";
    default:
      return "unknown status";
  }
}

int fsw_config_new(fsw_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new fsw_config{};
  });
}

int fsw_config_load(const char* path, fsw_config** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new fsw_config{fsw::RunConfig::load(path)};
  });
}

int fsw_config_parse(const char* text, fsw_config** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new fsw_config{fsw::RunConfig::parse(text)};
  });
}

int fsw_config_set(fsw_config* cfg, const char* key, const char* value) {
  return guard([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    cfg->cfg.set(key, value);
  });
}

int fsw_config_validate(const fsw_config* cfg) {
  return guard([&] {
    need(cfg, "cfg");
    cfg->cfg.validate();
  });
}

int fsw_config_hash(const fsw_config* cfg, char* buf, size_t len) {
  return guard([&] {
    need(cfg, "cfg");
    need(buf, "buf");
    const std::string h = cfg->cfg.hash();
    fsw::require(len > h.size(), fsw::ErrorCode::kInvalidArgument, "hash buffer too small");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

void fsw_config_free(fsw_config* cfg) { delete cfg; }

size_t fsw_config_key_count(void) { return fsw::config_schema().size(); }

const char* fsw_config_key_name(size_t i) {
  return i < fsw::config_schema().size() ? fsw::config_schema()[i].name.c_str() : nullptr;
}

const char* fsw_config_key_default(size_t i) {
  return i < fsw::config_schema().size() ? fsw::config_schema()[i].default_value.c_str() : nullptr;
}

const char* fsw_config_key_doc(size_t i) {
  return i < fsw::config_schema().size() ? fsw::config_schema()[i].doc.c_str() : nullptr;
}

size_t fsw_command_count(void) { return fsw::command_list().size(); }

const char* fsw_command_name(size_t i) {
  return i < fsw::command_list().size() ? fsw::command_list()[i].name.c_str() : nullptr;
}

const char* fsw_command_doc(size_t i) {
  return i < fsw::command_list().size() ? fsw::command_list()[i].doc.c_str() : nullptr;
}

int fsw_run(const fsw_config* cfg, const char* command, int emit_fit, fsw_result** out) {
  return guard([&] {
    need(cfg, "cfg");
    need(command, "command");
    need(out, "out");
    fsw::RunOptions opts;
    opts.emit_fit = emit_fit != 0;
    *out = new fsw_result{fsw::run_command(command, cfg->cfg, opts)};
  });
}

const char* fsw_result_summary(const fsw_result* r) {
  return r ? r->result.summary.c_str() : nullptr;
}

size_t fsw_result_file_count(const fsw_result* r) { return r ? r->result.files.size() : 0; }

const char* fsw_result_file(const fsw_result* r, size_t i) {
  return r && i < r->result.files.size() ? r->result.files[i].c_str() : nullptr;
}

void fsw_result_free(fsw_result* r) { delete r; }

int fsw_source_new(const fsw_config* cfg, fsw_source** out) {
  return guard([&] {
    need(cfg, "cfg");
    need(out, "out");
    cfg->cfg.validate();
    *out = new fsw_source{source_from(cfg->cfg)};
  });
}

int fsw_source_schmidt_number(const fsw_source* s, double* k) {
  return guard([&] {
    need(s, "source");
    need(k, "k");
    *k = fsw::schmidt_decompose(s->jsa).schmidt_number;
  });
}

int fsw_source_herald_probability(const fsw_source* s, double omega_j, double omega_k,
                                  double tau_i, double* p) {
  return guard([&] {
    need(s, "source");
    need(p, "p");
    *p = fsw::herald(s->jsa, omega_j, omega_k, tau_i).p;
  });
}

int fsw_source_fringes(const fsw_source* s, double omega_j, double omega_k, double tau_i,
                       const double* tau_s, size_t n, double* out) {
  return guard([&] {
    need(s, "source");
    need(tau_s, "tau_s");
    need(out, "out");
    const std::vector<double> taus(tau_s, tau_s + n);
    const auto t = fsw::fringes_pjk(s->jsa, fsw::herald(s->jsa, omega_j, omega_k, tau_i), taus);
    std::copy(t.value.begin(), t.value.end(), out);
  });
}

void fsw_source_free(fsw_source* s) { delete s; }

int fsw_tofs_resolution(const char* preset, double* nm) {
  return guard([&] {
    need(preset, "preset");
    need(nm, "nm");
    const std::string p = preset;
    fsw::require(p == "cfbg" || p == "spool", fsw::ErrorCode::kInvalidArgument,
                 "preset must be cfbg or spool");
    *nm = fsw::spectral_resolution(p == "cfbg" ? fsw::TofsConfig::cfbg() : fsw::TofsConfig::spool());
  });
}

}  // extern "C"
