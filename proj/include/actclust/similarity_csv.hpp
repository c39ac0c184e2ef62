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

#ifndef ACTCLUST_SIMILARITY_CSV_HPP
#define ACTCLUST_SIMILARITY_CSV_HPP

#include <istream>
#include <ostream>
#include <string>

#include "actclust/similarity.hpp"

namespace actclust {

/// Largest |s(i,j) - s(j,i)| that load_csv repairs by averaging.
inline constexpr double kCsvSymmetryTolerance = 1e-9;

/// Reads an N x N comma-separated matrix. A first row that does not parse as
/// numbers is treated as a header. The diagonal is ignored.
SimilarityStored load_csv(std::istream& in);
SimilarityStored load_csv(const std::string& path);

/// Writes the matrix with round-trip precision (diagonal as 0).
void write_csv(const SimilarityStored& store, std::ostream& out);
void write_csv(const SimilarityStored& store, const std::string& path);

}  // namespace actclust

#endif  // ACTCLUST_SIMILARITY_CSV_HPP
