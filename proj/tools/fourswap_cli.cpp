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


// Command-line front end. Links only against the C API.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fourswap/fourswap.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string seed;
  std::string threads;
  std::string grid;
  std::string bins;
  std::string tau_s;
  std::string tau_i;
  std::vector<std::string> sets;
  bool emit_fit = false;
};

int report(int status, const std::string& context) {
  std::cerr << "fourswap: " << context << ": " << fsw_status_name(status) << ": "
            << fsw_last_error() << "\n";
  return status;
}

int apply(fsw_config* cfg, const char* key, const std::string& value) {
  if (value.empty()) return FSW_OK;
  return fsw_config_set(cfg, key, value.c_str());
}

int run(const std::string& command, const Flags& f) {
  fsw_config* cfg = nullptr;
  int st = f.config.empty() ? fsw_config_new(&cfg) : fsw_config_load(f.config.c_str(), &cfg);
  if (st != FSW_OK) return report(st, "config");
  std::string out = f.out;
  if (out.empty()) {
    const char* env = std::getenv("FOURSWAP_OUT");
    out = env && *env ? env : "out";
  }
  std::string bins_j, bins_k;
  if (!f.bins.empty()) {
    const auto comma = f.bins.find(',');
    if (comma == std::string::npos) {
      fsw_config_free(cfg);
      std::cerr << "fourswap: --bins: expected j,k\n";
      return FSW_ERR_INVALID_ARGUMENT;
    }
    bins_j = f.bins.substr(0, comma);
    bins_k = f.bins.substr(comma + 1);
  }
  const std::vector<std::pair<const char*, std::string>> overrides = {
      {"out", out},          {"sim.seed", f.seed},      {"threads", f.threads},
      {"grid.count", f.grid}, {"herald.j", bins_j},      {"herald.k", bins_k},
      {"delay.tau_s", f.tau_s}, {"delay.tau_i", f.tau_i}};
  for (const auto& [key, value] : overrides) {
    st = apply(cfg, key, value);
    if (st != FSW_OK) {
      fsw_config_free(cfg);
      return report(st, "flags");
    }
  }
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    st = eq == std::string::npos
             ? FSW_ERR_INVALID_ARGUMENT
             : fsw_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != FSW_OK) {
      fsw_config_free(cfg);
      if (eq == std::string::npos) {
        std::cerr << "fourswap: --set: expected key=value, got '" << kv << "'\n";
        return st;
      }
      return report(st, "--set");
    }
  }
  fsw_result* res = nullptr;
  st = fsw_run(cfg, command.c_str(), f.emit_fit ? 1 : 0, &res);
  fsw_config_free(cfg);
  if (st != FSW_OK) return report(st, command);
  std::cout << fsw_result_summary(res) << "\n";
  for (size_t i = 0; i < fsw_result_file_count(res); ++i) {
    std::cout << "wrote " << fsw_result_file(res, i) << "\n";
  }
  fsw_result_free(res);
  return FSW_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-swapping spectral model and Monte Carlo toolkit"};
  app.set_version_flag("--version", std::string(fsw_version()));
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory (default $FOURSWAP_OUT, else ./out)");
    sub->add_option("--seed", flags.seed, "random seed (sim.seed)");
    sub->add_option("--threads", flags.threads, "worker threads; results do not depend on it");
    sub->add_option("--grid", flags.grid, "samples per frequency axis (grid.count)");
    sub->add_option("--bins", flags.bins, "herald bin indices j,k (herald.j, herald.k)");
    sub->add_option("--tau-s", flags.tau_s, "signal delays a:b:n or list, ps (delay.tau_s)");
    sub->add_option("--tau-i", flags.tau_i, "idler delays a:b:n or list, ps (delay.tau_i)");
    sub->add_option("--set", flags.sets, "override any configuration key, key=value");
    sub->add_flag("--emit-fit", flags.emit_fit, "also write fitted fringe parameters");
  };
  for (size_t i = 0; i < fsw_command_count(); ++i) {
    const std::string name = fsw_command_name(i);
    CLI::App* sub = app.add_subcommand(name, fsw_command_doc(i));
    add_common(sub);
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI::App* keys = app.add_subcommand("keys", "list configuration keys with defaults");
  keys->callback([&chosen] { chosen = "keys"; });
  CLI11_PARSE(app, argc, argv);
  if (chosen == "keys") {
    for (size_t i = 0; i < fsw_config_key_count(); ++i) {
      std::cout << fsw_config_key_name(i) << " = " << fsw_config_key_default(i) << "  # "
                << fsw_config_key_doc(i) << "\n";
    }
    return 0;
  }
  return run(chosen, flags);
}
