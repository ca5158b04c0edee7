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


#ifndef FOURSWAP_SRC_IO_HPP_
#define FOURSWAP_SRC_IO_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace fsw {

// "# key: value" lines.
std::string format_metadata(const Metadata& meta);

// Tab-separated columns tau, value[, error] under a metadata header.
std::string format_trace(const FringeTrace& t, const std::string& tau_name = "tau_ps",
                         const std::string& value_name = "value");

// Matrix layout: a header row with the y axis, then one row per x value.
std::string format_map(const Map2D& m);

// Generic table with named columns.
std::string format_table(const Metadata& meta, const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows);

// Number formatting shared by every writer.
std::string fmt_num(double v);

// Files of one command, written together. commit() writes every file to a
// temporary name and renames them into place; on any failure the files
// already moved and all temporaries are removed.
class OutputSet {
 public:
  explicit OutputSet(std::string dir);
  void add(const std::string& name, std::string content);
  // Returns the committed paths in insertion order.
  std::vector<std::string> commit();
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace fsw

#endif  // FOURSWAP_SRC_IO_HPP_
