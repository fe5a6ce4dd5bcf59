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

#include "snth/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "snth/error.hpp"

namespace snth {
namespace {

std::string Trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(Trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(Trim(field));
  return out;
}

bool IsMissing(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return l.empty() || l == "na" || l == "nan" || l == "null";
}

std::optional<double> ParseNumber(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) return std::nullopt;
  return v;
}

Vector VectorFromJson(const nlohmann::ordered_json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array()) {
    throw DomainError(std::string("params: '") + name + "' must be an array");
  }
  const auto& a = j[name];
  Vector v(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) {
      throw DomainError(std::string("params: '") + name + "' must hold numbers");
    }
    v(i) = a[i].get<double>();
  }
  return v;
}

}  // namespace

Dataset ReadCsv(std::istream& in) {
  Dataset d;
  std::string line;
  std::vector<std::vector<double>> rows;
  size_t width = 0;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (Trim(line).empty()) continue;
    const std::vector<std::string> fields = SplitLine(line);
    if (first) {
      first = false;
      width = fields.size();
      bool header = false;
      for (const auto& f : fields) {
        if (!IsMissing(f) && !ParseNumber(f)) header = true;
      }
      if (header) {
        d.columns = fields;
        continue;
      }
    }
    if (fields.size() != width) {
      throw DomainError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(width) + " fields, found " +
                        std::to_string(fields.size()));
    }
    std::vector<double> row(width);
    bool missing = false;
    for (size_t j = 0; j < width; ++j) {
      if (IsMissing(fields[j])) {
        missing = true;
        continue;
      }
      const auto v = ParseNumber(fields[j]);
      if (!v) {
        throw DomainError("line " + std::to_string(line_no) + ": non-numeric value '" +
                          fields[j] + "' in column " + std::to_string(j));
      }
      row[j] = *v;
    }
    if (missing) {
      ++d.dropped_rows;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (width == 0) throw DomainError("input has no data");
  if (d.columns.empty()) {
    for (size_t j = 0; j < width; ++j) d.columns.push_back("y" + std::to_string(j + 1));
  }
  if (rows.empty()) throw DomainError("input has no complete rows");
  d.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < width; ++j) d.values(i, j) = rows[i][j];
  }
  return d;
}

Dataset ReadCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  return ReadCsv(in);
}

Dataset SelectColumns(const Dataset& d, const std::vector<std::string>& names) {
  if (names.empty()) return d;
  std::vector<int> idx;
  for (const auto& name : names) {
    const auto it = std::find(d.columns.begin(), d.columns.end(), name);
    if (it != d.columns.end()) {
      idx.push_back(static_cast<int>(it - d.columns.begin()));
      continue;
    }
    const auto v = ParseNumber(name);
    if (v && *v == std::floor(*v) && *v >= 0 && *v < d.cols()) {
      idx.push_back(static_cast<int>(*v));
      continue;
    }
    throw DomainError("unknown column '" + name + "'");
  }
  Dataset out;
  out.dropped_rows = d.dropped_rows;
  out.values.resize(d.values.rows(), static_cast<Eigen::Index>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) {
    out.columns.push_back(d.columns[idx[k]]);
    out.values.col(k) = d.values.col(idx[k]);
  }
  return out;
}

void WriteCsv(std::ostream& out, const std::vector<std::string>& columns,
              const Matrix& values) {
  for (size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << columns[j];
  out << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

nlohmann::ordered_json ToJson(const Vector& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::ordered_json ToJson(const Matrix& m) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(ToJson(Vector(m.row(i).transpose())));
  return a;
}

nlohmann::ordered_json ToJson(const SnthParams& p) {
  return {{"xi", ToJson(p.xi)},       {"omega", ToJson(p.omega)},
          {"psi_bar", ToJson(p.psi_bar)}, {"eta", ToJson(p.eta)},
          {"h", ToJson(p.h)}};
}

nlohmann::ordered_json ToJson(const SnthStdErrors& se) {
  nlohmann::ordered_json j{{"xi", ToJson(se.xi)},       {"omega", ToJson(se.omega)},
                   {"psi_bar", ToJson(se.psi_bar)}, {"eta", ToJson(se.eta)},
                   {"h", ToJson(se.h)}};
  j["h_unreliable"] = se.h_unreliable;
  return j;
}

nlohmann::ordered_json ToJson(const TestResult& t) {
  nlohmann::ordered_json j{{"statistic", t.statistic},     {"df", t.df},
                   {"p_value", t.p_value},         {"mode", ToString(t.mode)},
                   {"loglik_null", t.loglik_null}, {"loglik_alt", t.loglik_alt}};
  if (t.mode == TestMode::kJointBonferroni) {
    j["margin_statistics"] = t.margin_statistics;
    j["margin_p_values"] = t.margin_p_values;
  }
  return j;
}

SnthParams ParamsFromJson(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw DomainError("params: expected a JSON object");
  SnthParams p;
  p.xi = VectorFromJson(j, "xi");
  p.omega = VectorFromJson(j, "omega");
  p.eta = VectorFromJson(j, "eta");
  p.h = VectorFromJson(j, "h");
  const int d = p.dim();
  if (j.contains("psi_bar")) {
    const auto& rows = j["psi_bar"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
      throw DomainError("params: 'psi_bar' must be a square nested array");
    }
    p.psi_bar.resize(d, d);
    for (int r = 0; r < d; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d) {
        throw DomainError("params: 'psi_bar' must be a square nested array");
      }
      for (int c = 0; c < d; ++c) {
        if (!rows[r][c].is_number()) throw DomainError("params: 'psi_bar' must hold numbers");
        p.psi_bar(r, c) = rows[r][c].get<double>();
      }
    }
  } else {
    p.psi_bar = Matrix::Identity(d, d);
  }
  p.Validate();
  return p;
}

}  // namespace snth
