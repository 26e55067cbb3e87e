// Copyright 2026 The stabgeom Authors
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

// Stabiliser matrix text format.
//
//   # anything after '#' is ignored
//   q=4 n=2 r=2 modulus=7
//   1 1 | 2 0
//   0 1 | 1 1
//
// The header keys may appear in any order; modulus is optional and defaults
// to FieldSpec::default_modulus. Each row lists the n entries of A, a '|', and
// the n entries of B, as integers 0..q-1 (bit i = coefficient of x^i).

#pragma once

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stabgeom/errors.hpp"
#include "stabgeom/gf2h.hpp"
#include "stabgeom/symcode.hpp"

namespace stabgeom {

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline unsigned long parse_uint(const std::string& tok, const std::string& what, std::size_t line_no) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty() || tok[0] == '-')
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
  return v;
}

}  // namespace detail

inline StabiliserMatrix parse_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, unsigned long> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    const auto s = detail::strip_comment(line);
    if (s.empty()) continue;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" + tok + "'");
      const auto key = tok.substr(0, eq);
      if (key != "q" && key != "n" && key != "r" && key != "modulus")
        throw ParseError("line " + std::to_string(line_no) + ": unknown header key '" + key + "'");
      if (header.count(key)) throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      header[key] = detail::parse_uint(tok.substr(eq + 1), key, line_no);
    }
  }
  for (const char* key : {"q", "n", "r"})
    if (!header.count(key)) throw ParseError(std::string("missing header key '") + key + "'");
  const unsigned long q = header["q"];
  if (q < 2 || q > 256 || (q & (q - 1)) != 0) throw ParseError("q must be a power of two between 2 and 256");
  const int h = std::countr_zero(q);
  FieldSpec field(h);
  if (header.count("modulus")) {
    try {
      field = FieldSpec(h, static_cast<std::uint32_t>(header["modulus"]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  const std::size_t n = header["n"];
  const std::size_t r = header["r"];
  if (n == 0) throw ParseError("n must be positive");
  StabiliserMatrix m(field, n, r);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = detail::strip_comment(line);
    if (s.empty()) continue;
    if (row == r) throw ParseError("line " + std::to_string(line_no) + ": more than r=" + std::to_string(r) + " rows");
    std::istringstream ss(s);
    std::string tok;
    std::vector<unsigned long> vals;
    std::size_t bar_at = 0;
    int bars = 0;
    while (ss >> tok) {
      if (tok == "|") {
        ++bars;
        bar_at = vals.size();
        continue;
      }
      const auto v = detail::parse_uint(tok, "entry", line_no);
      if (v >= q) throw ParseError("line " + std::to_string(line_no) + ": entry " + tok + " not below q=" + std::to_string(q));
      vals.push_back(v);
    }
    if (bars != 1 || bar_at != n || vals.size() != 2 * n)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " entries, '|', " +
                       std::to_string(n) + " entries");
    for (std::size_t j = 0; j < 2 * n; ++j) m.set(row, j, FieldElement(static_cast<unsigned>(vals[j])));
    ++row;
  }
  if (row != r) throw ParseError("expected " + std::to_string(r) + " rows, found " + std::to_string(row));
  return m;
}

inline StabiliserMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

inline StabiliserMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_matrix(in);
}

/// Symbol for x in `pretty` mode: "0", "1", "a", "a^5", ... in powers of the
/// field generator.
inline std::string pretty_element(const FieldSpec& f, FieldElement x, const std::string& symbol = "a") {
  if (x.is_zero()) return "0";
  if (f.degree() == 1) return "1";
  const unsigned e = f.log(x);
  if (e == 0) return "1";
  if (e == 1) return symbol;
  return symbol + "^" + std::to_string(e);
}

inline std::string format_matrix(const StabiliserMatrix& m, bool pretty = false, const std::string& symbol = "a") {
  std::ostringstream out;
  out << "q=" << m.field().order() << " n=" << m.n() << " r=" << m.num_rows() << " modulus=" << m.field().modulus()
      << '\n';
  std::vector<std::vector<std::string>> cells(m.num_rows());
  std::size_t width = 1;
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    for (std::size_t j = 0; j < 2 * m.n(); ++j) {
      cells[i].push_back(pretty ? pretty_element(m.field(), m.at(i, j), symbol) : std::to_string(m.at(i, j).value));
      width = std::max(width, cells[i].back().size());
    }
  for (const auto& row : cells) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j == m.n()) out << " |";
      if (j > 0) out << ' ';
      if (pretty) out << std::string(width - row[j].size(), ' ');
      out << row[j];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stabgeom
