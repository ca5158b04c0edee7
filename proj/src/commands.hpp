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


#ifndef FOURSWAP_SRC_COMMANDS_HPP_
#define FOURSWAP_SRC_COMMANDS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace fsw {

struct CommandInfo {
  std::string name;
  std::string doc;
};
const std::vector<CommandInfo>& command_list();

struct RunOptions {
  bool emit_fit = false;
};

struct RunResult {
  std::vector<std::string> files;  // committed paths, manifest last
  std::string summary;             // short human-readable result
};

// Validates the configuration, computes, then writes every output file and a
// manifest into cfg.text("out") in one commit.
RunResult run_command(const std::string& name, const RunConfig& cfg,
                      const RunOptions& opts = {});

}  // namespace fsw

#endif  // FOURSWAP_SRC_COMMANDS_HPP_
