// Copyright 2026 The actclust Authors.
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

#include "actclust/similarity_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace actclust {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::vector<double>> parse_row(const std::vector<std::string>& cells) {
  std::vector<double> row;
  row.reserve(cells.size());
  for (const auto& c : cells) {
    auto v = parse_number(c);
    if (!v) return std::nullopt;
    row.push_back(*v);
  }
  return row;
}

}  // namespace

SimilarityStored load_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    auto row = parse_row(cells);
    if (!row) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::invalid_argument("csv: non-numeric cell on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row->size() != rows.front().size())
      throw std::invalid_argument("csv: ragged row on line " + std::to_string(line_no));
    rows.push_back(std::move(*row));
  }
  const auto n = static_cast<Index>(rows.size());
  if (n < 2) throw std::invalid_argument("csv: need at least a 2 x 2 matrix");
  if (static_cast<Index>(rows.front().size()) != n)
    throw std::invalid_argument("csv: matrix is not square");

  SimilarityStored::Matrix values(n, n);
  for (Index i = 0; i < n; ++i) {
    values(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double a = rows[i][j];
      const double b = rows[j][i];
      if (std::abs(a - b) > kCsvSymmetryTolerance)
        throw std::invalid_argument("csv: asymmetric entry at (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
      values(i, j) = values(j, i) = a == b ? a : 0.5 * (a + b);
    }
  }
  return SimilarityStored(std::move(values));
}

SimilarityStored load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_csv(in);
}

void write_csv(const SimilarityStored& store, std::ostream& out) {
  const Index n = store.size();
  char buf[32];
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j) out << ',';
      const double v = i == j ? 0.0 : store.value(static_cast<ItemId>(i), static_cast<ItemId>(j));
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void write_csv(const SimilarityStored& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(store, out);
}

}  // namespace actclust
