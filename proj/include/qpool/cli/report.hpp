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

#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qpool/cli/json_io.hpp"

namespace qpool::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct ReportError {
  std::string name;
  std::string message;
};

struct RunReport {
  std::string kind;
  std::uint64_t seed = 0;
  json inputs = json::object();
  json outputs = json::object();
  std::map<std::string, Table> tables;
  std::vector<std::string> provenance;
  std::optional<double> wall_clock_seconds;
  std::optional<ReportError> error;
};

enum class Format { Json, Text, Csv };

inline std::optional<Format> format_from_string(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "text") return Format::Text;
  if (s == "csv") return Format::Csv;
  return std::nullopt;
}

inline json to_json(const RunReport& r) {
  json j = json::object();
  j["kind"] = r.kind;
  j["seed"] = r.seed;
  j["inputs"] = r.inputs;
  j["outputs"] = r.outputs;
  json tables = json::object();
  for (const auto& [name, t] : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) rows.push_back(json(row));
    tables[name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  j["tables"] = std::move(tables);
  j["provenance"] = r.provenance;
  if (r.wall_clock_seconds) j["wall_clock_seconds"] = *r.wall_clock_seconds;
  if (r.error) j["error"] = {{"name", r.error->name}, {"message", r.error->message}};
  return j;
}

namespace detail {

inline std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

inline std::string csv_cell(const json& v) {
  std::string s = cell(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string short_value(const json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  return v.dump();
}

inline void flatten(std::ostringstream& os, const json& v, const std::string& prefix) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(os, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    }
    return;
  }
  os << "  " << prefix << ": " << short_value(v) << "\n";
}

inline void text_table(std::ostringstream& os, const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : t.rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line.push_back(row[c].is_number_float() ? short_value(row[c]) : cell(row[c]));
      if (c < width.size()) width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      os << (c ? " | " : "  ") << line[c];
      if (c + 1 < line.size() && c < width.size()) os << std::string(width[c] - line[c].size(), ' ');
    }
    os << "\n";
  };
  emit(t.columns);
  for (const auto& line : cells) emit(line);
}

}  // namespace detail

inline std::string emit_report(const RunReport& r, Format format) {
  switch (format) {
    case Format::Json: return canonical_dump(to_json(r));
    case Format::Csv: {
      std::ostringstream os;
      const bool several = r.tables.size() > 1;
      bool first = true;
      for (const auto& [name, t] : r.tables) {
        if (!first) os << "\n";
        first = false;
        if (several) os << "# " << name << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
        os << "\n";
        for (const auto& row : t.rows) {
          for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << detail::csv_cell(row[c]);
          os << "\n";
        }
      }
      return os.str();
    }
    case Format::Text: break;
  }
  std::ostringstream os;
  os << "qpool report: " << r.kind << "\n";
  os << "seed: " << r.seed << "\n";
  if (r.error) os << "error: " << r.error->name << ": " << r.error->message << "\n";
  if (!r.provenance.empty()) {
    os << "\nprovenance:\n";
    for (const auto& p : r.provenance) os << "  - " << p << "\n";
  }
  if (!r.outputs.empty()) {
    os << "\noutputs:\n";
    detail::flatten(os, r.outputs, "");
  }
  for (const auto& [name, t] : r.tables) {
    if (name == "audit") {
      os << "\nPAPER vs COMPUTED\n";
      Table view{{"quantity", "PAPER", "COMPUTED", "prediction", "status"}, {}};
      for (const auto& row : t.rows) {
        // audit columns: quantity, paper, computed_exact, computed, prediction, status, note
        view.rows.push_back({row[0], row[1], row[2], row[4], row[5]});
      }
      detail::text_table(os, view);
      continue;
    }
    os << "\n== " << name << " ==\n";
    detail::text_table(os, t);
  }
  if (r.wall_clock_seconds) os << "\nwall clock: " << *r.wall_clock_seconds << " s\n";
  return os.str();
}

}  // namespace qpool::cli
