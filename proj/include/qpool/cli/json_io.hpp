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

// JSON encodings shared by configs and reports.
//
//  - Matrix literal: row-major nested arrays of [re, im] pairs,
//    e.g. [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]].
//  - Probability vector: plain array of numbers.
//  - Exact scalar: a number, or a string holding a fraction ("3/10") or a
//    decimal ("0.3"); strings are read exactly.
//  - Canonical output: keys sorted, two-space indent, every floating value
//    printed with 17 significant digits.

#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "qpool/estimation.hpp"
#include "qpool/linalg.hpp"

namespace qpool::cli {

using json = nlohmann::json;

/// Malformed or invalid configuration. `field` is a JSON pointer.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : "field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "non-finite number");
  return x;
}

inline ComplexMatrix matrix_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  Eigen::Index cols = -1;
  ComplexMatrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rp = path + "/" + std::to_string(i);
    if (!row.is_array() || row.empty()) throw ConfigError(rp, "expected a non-empty row array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(rp, "ragged matrix rows");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& e = row[static_cast<std::size_t>(j)];
      const std::string ep = rp + "/" + std::to_string(j);
      if (!e.is_array() || e.size() != 2) throw ConfigError(ep, "expected an [re, im] pair");
      m(i, j) = Complex(number_at(e[0], ep + "/0"), number_at(e[1], ep + "/1"));
    }
  }
  return m;
}

namespace detail {

/// Decimal integer with optional sign. Leading zeros are stripped so the
/// multiprecision parser never sees an octal prefix.
inline boost::multiprecision::cpp_int parse_integer(std::string s, const std::string& path) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) throw ConfigError(path, "malformed number");
  for (char c : s) {
    if (c < '0' || c > '9') throw ConfigError(path, "malformed number");
  }
  const auto nz = s.find_first_not_of('0');
  s = nz == std::string::npos ? "0" : s.substr(nz);
  boost::multiprecision::cpp_int v(s);
  return negative ? -v : v;
}

}  // namespace detail

inline Rational rational_from_json(const json& v, const std::string& path) {
  if (v.is_number()) return Rational(number_at(v, path));
  if (!v.is_string()) throw ConfigError(path, "expected a number or a fraction string");
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const auto den = detail::parse_integer(s.substr(slash + 1), path);
    if (den == 0) throw ConfigError(path, "zero denominator");
    return Rational(detail::parse_integer(s.substr(0, slash), path), den);
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(detail::parse_integer(s, path));
  // Exact decimal: "0.125" -> 125/1000.
  const std::string frac = s.substr(dot + 1);
  if (frac.empty()) throw ConfigError(path, "malformed decimal");
  boost::multiprecision::cpp_int scale = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
  std::string whole = s.substr(0, dot);
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  return Rational(detail::parse_integer(whole + frac, path), scale);
}

inline std::vector<double> real_vector_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(to_double(rational_from_json(v[k], path + "/" + std::to_string(k))));
  }
  return out;
}

namespace detail {

inline void write_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

inline void write_number(std::string& out, const json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    out += v.dump();
    return;
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

inline void write_canonical(std::string& out, const json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(out, it.key());
        out += ": ";
        write_canonical(out, it.value(), depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k) out += ", ";
          write_canonical(out, v[k], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        write_canonical(out, v[k], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::string: write_string(out, v.get<std::string>()); return;
    case json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; return;
    case json::value_t::null: out += "null"; return;
    default: write_number(out, v); return;
  }
}

}  // namespace detail

inline std::string canonical_dump(const json& v) {
  std::string out;
  detail::write_canonical(out, v, 0);
  out += "\n";
  return out;
}

}  // namespace qpool::cli
