// Copyright 2026 The qpool Authors
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

// qpool: batch runner for pooling scenarios.
//
//   qpool run <config.json> [--format json|text|csv] [--seed N] [--out PATH] [--no-timing]
//   qpool reproduce-paper [--format json|text|csv] [--out PATH] [--no-timing]
//   qpool validate <config.json>
//
// Exit codes: 0 success, 1 config or usage error, 2 numerical failure.
// QPOOL_OUTPUT_DIR, when set, is the default directory for reports.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qpool/cli/scenario.hpp"

namespace fs = std::filesystem;
using namespace qpool::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* extension(Format f) {
  switch (f) {
    case Format::Json: return ".json";
    case Format::Text: return ".txt";
    case Format::Csv: return ".csv";
  }
  return ".out";
}

// Explicit --out wins; otherwise QPOOL_OUTPUT_DIR/<stem><ext>; otherwise stdout.
int write_output(const std::string& text, const std::string& out, const std::string& stem, Format f) {
  fs::path target;
  if (!out.empty()) {
    target = out;
  } else if (const char* dir = std::getenv("QPOOL_OUTPUT_DIR"); dir && *dir) {
    target = fs::path(dir) / (stem + extension(f));
  } else {
    std::cout << text;
    return 0;
  }
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  std::ofstream os(target, std::ios::binary);
  if (!os || !(os << text)) {
    std::cerr << "error: cannot write '" << target.string() << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpool: pooling quantum states of knowledge"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_name = "json";
  std::uint64_t seed = 0;
  bool no_timing = false;
  const std::set<std::string> formats{"json", "text", "csv"};

  auto* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--format", format_name, "Report format")->check(CLI::IsMember(formats));
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_path, "Write the report to PATH");
  run->add_flag("--no-timing", no_timing, "Omit wall-clock time from the report");

  auto* repro = app.add_subcommand("reproduce-paper", "Audit the published estimation counterexample");
  repro->add_option("--format", format_name, "Report format")->check(CLI::IsMember(formats));
  repro->add_option("--out", out_path, "Write the report to PATH");
  repro->add_flag("--no-timing", no_timing, "Omit wall-clock time from the report");

  auto* validate = app.add_subcommand("validate", "Check a scenario config without running it");
  validate->add_option("config", config_path, "Scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const Format format = *format_from_string(format_name);
  try {
    if (validate->parsed()) {
      const auto cfg = parse_config_text(read_file(config_path));
      decode(cfg);
      std::cout << "ok: " << to_string(cfg.kind) << "\n";
      return 0;
    }

    ScenarioConfig cfg;
    std::string stem = "reproduce-paper";
    if (run->parsed()) {
      cfg = parse_config_text(read_file(config_path));
      stem = fs::path(config_path).stem().string();
    } else {
      cfg.kind = ScenarioKind::ReproducePaper;
    }
    RunOptions opt;
    if (run->parsed() && seed_opt->count() > 0) opt.seed_override = seed;
    opt.timing = !no_timing;
    const auto result = run_scenario(cfg, opt);
    if (result.report.error) {
      std::cerr << "error: " << result.report.error->name << ": " << result.report.error->message << "\n";
    }
    const int wrote = write_output(emit_report(result.report, format), out_path, stem, format);
    return result.exit_code != 0 ? result.exit_code : wrote;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}
