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


#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "common.hpp"
#include "config.hpp"
#include "fourswap/fourswap.h"
#include "io.hpp"

namespace fsw {
namespace {

namespace fs = std::filesystem;

std::string expect_config_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "no configuration error raised";
  return "";
}

TEST(Config, DefaultsCoverTheSchema) {
  const RunConfig c;
  EXPECT_NO_THROW(c.validate());
  for (const KeySpec& k : config_schema()) EXPECT_NE(c.canonical(false).find(k.name + " = "), std::string::npos) << k.name;
  EXPECT_EQ(c.integer("grid.count"), 512);
  EXPECT_EQ(c.text("source.model"), "gaussian");
}

TEST(Config, UnknownKeysAreRejectedWithLocation) {
  const std::string msg = expect_config_error([] { RunConfig::parse("grid.count = 128\nsource.sigmas = 1\n", "a.conf"); });
  EXPECT_NE(msg.find("a.conf:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("source.sigmas"), std::string::npos) << msg;
  RunConfig c;
  expect_config_error([&] { c.set("nonsense", "1"); });
}

TEST(Config, MalformedValuesNameTheKey) {
  for (const auto& [text, key] : std::vector<std::pair<std::string, std::string>>{
           {"grid.count = many", "grid.count"},
           {"source.alpha = 0.1x", "source.alpha"},
           {"filter.shape = triangle", "filter.shape"},
           {"sim.double_pairs = maybe", "sim.double_pairs"},
           {"delay.tau_s = 1:2", "delay.tau_s"},
           {"grid.count = 1\ngrid.count = 2", "grid.count"},
           {"just text", ""}}) {
    const std::string msg = expect_config_error([&] { RunConfig::parse(text, "x.conf"); });
    EXPECT_NE(msg.find(key), std::string::npos) << msg;
  }
}

TEST(Config, ValidationRejectsUnphysicalSettings) {
  for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"source.alpha", "1.0"}, {"grid.extent", "4"}, {"grid.count", "8"}, {"herald.k", "2"}}) {
    RunConfig c;
    c.set(key, value);
    expect_config_error([&] { c.validate(); });
  }
  RunConfig rg;
  rg.set("filter.shape", "rectgauss");
  expect_config_error([&] { rg.validate(); });
}

TEST(Config, ListSyntax) {
  EXPECT_EQ(parse_list("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_list("1,-2,3.5"), (std::vector<double>{1.0, -2.0, 3.5}));
  EXPECT_EQ(parse_list("7"), (std::vector<double>{7.0}));
  EXPECT_THROW(parse_list("1:2:0"), Error);
}

TEST(Config, HashIgnoresSpellingOrderAndSchedulingKeys) {
  const RunConfig a = RunConfig::parse("grid.count = 256\nsource.alpha = 0.25\n");
  const RunConfig b = RunConfig::parse("# comment\n\nsource.alpha=2.5e-1   \n  grid.count =   256\nthreads = 4\nout = /tmp/elsewhere\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 64u);
  RunConfig c = a;
  c.set("source.alpha", "0.2500001");
  EXPECT_NE(a.hash(), c.hash());
}

TEST(Config, EverySemanticKeyChangesTheHash) {
  const RunConfig base;
  for (const KeySpec& k : config_schema()) {
    RunConfig c;
    std::string v;
    switch (k.type) {
      case KeyType::kReal:
        v = "0.123456";
        break;
      case KeyType::kInt:
        v = "77";
        break;
      case KeyType::kBool:
        v = k.default_value == "true" ? "false" : "true";
        break;
      case KeyType::kChoice:
        v = k.choices.back() == k.default_value ? k.choices.front() : k.choices.back();
        break;
      case KeyType::kList:
        v = "0.5,1.5";
        break;
      case KeyType::kText:
        v = "changed";
        break;
    }
    c.set(k.name, v);
    if (k.hashed) {
      EXPECT_NE(c.hash(), base.hash()) << k.name;
    } else {
      EXPECT_EQ(c.hash(), base.hash()) << k.name;
    }
  }
}

TEST(Config, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Output, FailedCommitLeavesNothingBehind) {
  const fs::path dir = fs::temp_directory_path() / "fourswap_commit_test";
  fs::remove_all(dir);
  fs::create_directories(dir / "b.tsv");  // blocks the second rename
  OutputSet out(dir.string());
  out.add("a.tsv", "1\n");
  out.add("b.tsv", "2\n");
  out.add("c.tsv", "3\n");
  EXPECT_THROW(out.commit(), Error);
  std::vector<std::string> left;
  for (const auto& e : fs::directory_iterator(dir)) left.push_back(e.path().filename().string());
  EXPECT_EQ(left, std::vector<std::string>{"b.tsv"});
  fs::remove_all(dir);
}

TEST(Output, NumberFormatRoundTrips) {
  for (const double v : {0.1, -2.5e-7, 1.0 / 3.0, 123456789.0}) EXPECT_NEAR(std::stod(fmt_num(v)), v, 1e-11 * std::abs(v));
}

// Runs the CLI and returns (exit status, stdout + stderr).
std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string(FOURSWAP_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 512> buf{};
  while (p != nullptr && fgets(buf.data(), buf.size(), p) != nullptr) out += buf.data();
  const int st = p != nullptr ? pclose(p) : -1;
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_path(const std::string& name) { return std::string(FOURSWAP_SOURCE_DIR) + "/configs/" + name; }

TEST(Cli, SchmidtOfSeparableSourceIsOne) {
  const fs::path out = fs::temp_directory_path() / "fourswap_cli_schmidt";
  const auto [st, text] = run_cli("schmidt --config " + config_path("uncorrelated.conf") + " --out " + out.string());
  EXPECT_EQ(st, 0) << text;
  EXPECT_NE(text.find("K = 1.000000"), std::string::npos) << text;
  fs::remove_all(out);
}

TEST(Cli, FringeFrequencyMatchesEightNanometerHeraldSpacing) {
  const fs::path out = fs::temp_directory_path() / "fourswap_cli_fringes";
  fs::remove_all(out);
  const auto [st, text] = run_cli("fringes --config " + config_path("experimental_fit.conf") +
                                  " --bins 2,-2 --grid 256 --emit-fit --out " + out.string());
  ASSERT_EQ(st, 0) << text;
  std::map<std::string, std::string> kv;
  std::istringstream in(slurp(out / "fringes_fit.txt"));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  // Idler bins 2 and -2 at 2 nm per bin are 8 nm apart around 830 nm; the
  // heralded signal centers sit 2 alpha sS^2 times that idler spacing apart.
  const double c = 299792.458;
  const double d_idler = 2.0 * kPi * c / 826.0 - 2.0 * kPi * c / 834.0;
  const double expected = 2.0 * 0.4778368378778232 * 0.34174702166286053 * 0.34174702166286053 * d_idler;
  ASSERT_TRUE(kv.count("frequency"));
  EXPECT_NEAR(std::stod(kv["frequency"]), expected, 1e-4 * expected);
  EXPECT_EQ(kv["witness"], "true");
  fs::remove_all(out);
}

TEST(Cli, SameSeedTwiceIsByteIdentical) {
  const fs::path a = fs::temp_directory_path() / "fourswap_cli_seed_a";
  const fs::path b = fs::temp_directory_path() / "fourswap_cli_seed_b";
  const std::string args = "simulate --config " + config_path("experimental_fit.conf") + " --grid 128 --seed 5 --set sim.pulses=3000";
  ASSERT_EQ(run_cli(args + " --out " + a.string()).first, 0);
  ASSERT_EQ(run_cli(args + " --threads 2 --out " + b.string()).first, 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
    ++n;
  }
  EXPECT_GT(n, 3u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, InvalidInputWritesNothing) {
  const fs::path out = fs::temp_directory_path() / "fourswap_cli_invalid";
  fs::remove_all(out);
  for (const std::string& bad : {std::string("jsa --set source.alpha=5"), std::string("jsa --set bogus=1"),
                                 std::string("pjk-map --grid 4"), std::string("nosuchcommand")}) {
    const auto [st, text] = run_cli(bad + " --out " + out.string());
    EXPECT_NE(st, 0) << bad;
    EXPECT_FALSE(text.empty()) << bad;
    EXPECT_FALSE(fs::exists(out) && !fs::is_empty(out)) << bad;
  }
}

TEST(CApi, StatusCodesAndErrors) {
  fsw_config* cfg = nullptr;
  ASSERT_EQ(fsw_config_new(&cfg), FSW_OK);
  EXPECT_EQ(fsw_config_set(cfg, "grid.count", "128"), FSW_OK);
  EXPECT_EQ(fsw_config_set(cfg, "no.such.key", "1"), FSW_ERR_CONFIG);
  EXPECT_NE(std::string(fsw_last_error()).find("no.such.key"), std::string::npos);
  char hash[65];
  EXPECT_EQ(fsw_config_hash(cfg, hash, sizeof hash), FSW_OK);
  EXPECT_EQ(std::string(hash).size(), 64u);
  EXPECT_NE(fsw_config_hash(cfg, hash, 10), FSW_OK);
  fsw_result* r = nullptr;
  EXPECT_NE(fsw_run(cfg, "not-a-command", 0, &r), FSW_OK);
  fsw_source* src = nullptr;
  ASSERT_EQ(fsw_source_new(cfg, &src), FSW_OK);
  double k = 0.0;
  EXPECT_EQ(fsw_source_schmidt_number(src, &k), FSW_OK);
  EXPECT_NEAR(k, 5.0, 1e-3);
  fsw_source_free(src);
  double nm = 0.0;
  EXPECT_EQ(fsw_tofs_resolution("cfbg", &nm), FSW_OK);
  EXPECT_EQ(nm, 0.1);
  EXPECT_NE(fsw_tofs_resolution("prism", &nm), FSW_OK);
  EXPECT_STREQ(fsw_status_name(FSW_OK), "ok");
  fsw_config_free(cfg);
  EXPECT_GT(fsw_command_count(), 10u);
  EXPECT_EQ(fsw_config_key_count(), config_schema().size());
}

}  // namespace
}  // namespace fsw
