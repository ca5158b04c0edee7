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


#include "io.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"

namespace fsw {

namespace fs = std::filesystem;

std::string fmt_num(double v) { return fmt::format("{:.12g}", v); }

std::string format_metadata(const Metadata& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += fmt::format("# {}: {}\n", k, v);
  return out;
}

std::string format_trace(const FringeTrace& t, const std::string& tau_name,
                         const std::string& value_name) {
  require(t.tau.size() == t.value.size(), ErrorCode::kInvalidArgument,
          "trace: size mismatch");
  const bool err = t.error.size() == t.tau.size() && !t.error.empty();
  std::string out = format_metadata(t.meta);
  out += err ? fmt::format("{}\t{}\terror\n", tau_name, value_name)
             : fmt::format("{}\t{}\n", tau_name, value_name);
  for (std::size_t i = 0; i < t.tau.size(); ++i) {
    out += fmt_num(t.tau[i]) + "\t" + fmt_num(t.value[i]);
    if (err) out += "\t" + fmt_num(t.error[i]);
    out += "\n";
  }
  return out;
}

std::string format_map(const Map2D& m) {
  require(static_cast<std::size_t>(m.values.rows()) == m.x.size() &&
              static_cast<std::size_t>(m.values.cols()) == m.y.size(),
          ErrorCode::kInvalidArgument, "map: axis sizes do not match values");
  std::string out = format_metadata(m.meta);
  out += fmt::format("# rows: {}, columns: {}\n", m.x_name, m.y_name);
  out += m.x_name + "\\" + m.y_name;
  for (const double y : m.y) out += "\t" + fmt_num(y);
  out += "\n";
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    out += fmt_num(m.x[i]);
    for (std::size_t j = 0; j < m.y.size(); ++j) {
      out += "\t" + fmt_num(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += "\n";
  }
  return out;
}

std::string format_table(const Metadata& meta, const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) {
  std::string out = format_metadata(meta);
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "\t" : "") + columns[i];
  out += "\n";
  for (const auto& r : rows) {
    require(r.size() == columns.size(), ErrorCode::kInvalidArgument, "table: ragged row");
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "\t" : "") + fmt_num(r[i]);
    out += "\n";
  }
  return out;
}

OutputSet::OutputSet(std::string dir) : dir_(std::move(dir)) {}

void OutputSet::add(const std::string& name, std::string content) {
  require(!name.empty() && name.find('/') == std::string::npos, ErrorCode::kInvalidArgument,
          fmt::format("output: bad file name '{}'", name));
  for (const auto& f : files_) {
    require(f.first != name, ErrorCode::kInternal, fmt::format("output: duplicate '{}'", name));
  }
  files_.emplace_back(name, std::move(content));
}

std::vector<std::string> OutputSet::commit() {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  require(!ec && fs::is_directory(dir_), ErrorCode::kIo,
          fmt::format("cannot create output directory '{}'", dir_));
  std::vector<std::string> temps;
  std::vector<std::string> done;
  auto cleanup = [&] {
    std::error_code ignored;
    for (const auto& t : temps) fs::remove(t, ignored);
    for (const auto& d : done) fs::remove(d, ignored);
  };
  try {
    for (const auto& [name, content] : files_) {
      const std::string tmp = (fs::path(dir_) / ("." + name + ".partial")).string();
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      require(static_cast<bool>(out), ErrorCode::kIo, fmt::format("cannot write '{}'", tmp));
    }
    for (std::size_t i = 0; i < files_.size(); ++i) {
      const std::string dst = (fs::path(dir_) / files_[i].first).string();
      fs::rename(temps[i], dst, ec);
      require(!ec, ErrorCode::kIo, fmt::format("cannot rename into '{}'", dst));
      done.push_back(dst);
    }
  } catch (...) {
    cleanup();
    throw;
  }
  return done;
}

}  // namespace fsw
