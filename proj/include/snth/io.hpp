// Copyright 2026 The SNTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SNTH_IO_HPP_
#define SNTH_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "snth/inference.hpp"
#include "snth/snth.hpp"
#include "snth/types.hpp"

namespace snth {

// Labeled numeric data. Rows with missing values are dropped on ingestion.
struct Dataset {
  std::vector<std::string> columns;
  Matrix values;
  int dropped_rows = 0;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

// Comma-separated input with an optional header row, detected by a
// non-numeric first row. Empty, NA, NaN and null fields mark missing values.
Dataset ReadCsv(std::istream& in);
Dataset ReadCsvFile(const std::string& path);

// Keeps the named columns, in the given order. Names may also be 0-based
// column indices.
Dataset SelectColumns(const Dataset& d, const std::vector<std::string>& names);

// Writes a header and rows with 17 significant digits.
void WriteCsv(std::ostream& out, const std::vector<std::string>& columns,
              const Matrix& values);

nlohmann::ordered_json ToJson(const Vector& v);
nlohmann::ordered_json ToJson(const Matrix& m);
nlohmann::ordered_json ToJson(const SnthParams& p);
nlohmann::ordered_json ToJson(const SnthStdErrors& se);
nlohmann::ordered_json ToJson(const TestResult& t);

// Accepts the layout produced by ToJson(SnthParams). Throws DomainError.
SnthParams ParamsFromJson(const nlohmann::ordered_json& j);

}  // namespace snth

#endif  // SNTH_IO_HPP_
