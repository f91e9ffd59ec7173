// Copyright 2026 The vprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "vp/pipeline/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "vp/core/error.h"

namespace vp {
namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string Number(double v, const char* spec) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format(fmt::runtime(spec), v);
}

}  // namespace

double ReportTable::At(const std::string& key, const std::string& column) const {
  const auto col = std::find(value_columns.begin(), value_columns.end(), column);
  if (col == value_columns.end()) {
    Fail(ErrorKind::kInput, fmt::format("table {} has no column {}", name, column));
  }
  for (const Row& row : rows) {
    if (!row.keys.empty() && row.keys.front() == key) {
      return row.values[static_cast<std::size_t>(col - value_columns.begin())];
    }
  }
  Fail(ErrorKind::kInput, fmt::format("table {} has no row {}", name, key));
}

const std::vector<std::string>& CanonicalColumns() {
  static const std::vector<std::string> cols = {
      "mp", "mh_count", "auroc", "tpr_at_05fpr", "fpr_at_95tpr"};
  return cols;
}

ReportTable MethodTable(std::string name,
                        const std::map<std::string, double>& metrics,
                        const std::vector<std::string>& methods) {
  std::set<std::string> present;
  for (const auto& [key, value] : metrics) {
    const std::size_t slash = key.find('/');
    if (slash == std::string::npos) continue;
    present.insert(key.substr(0, slash));
  }
  ReportTable table;
  table.name = std::move(name);
  table.key_columns = {"method"};
  for (const std::string& c : CanonicalColumns()) {
    if (present.erase(c) > 0) table.value_columns.push_back(c);
  }
  for (const std::string& c : present) table.value_columns.push_back(c);
  for (const std::string& method : methods) {
    ReportTable::Row row{{method}, {}};
    bool any = false;
    for (const std::string& c : table.value_columns) {
      const auto it = metrics.find(c + "/" + method);
      any = any || it != metrics.end();
      row.values.push_back(it == metrics.end() ? std::nan("") : it->second);
    }
    if (any) table.rows.push_back(std::move(row));
  }
  return table;
}

ReportTable TableFromArtifact(const RunArtifact& artifact, std::string name) {
  std::vector<std::string> methods;
  std::set<std::string> seen;
  for (const auto& [key, value] : artifact.metrics) {
    const std::size_t slash = key.find('/');
    if (slash == std::string::npos) continue;
    const std::string method = key.substr(slash + 1);
    if (seen.insert(method).second) methods.push_back(method);
  }
  return MethodTable(std::move(name), artifact.metrics, methods);
}

std::string FormatCsv(const ReportTable& table) {
  std::string out;
  std::vector<std::string> header = table.key_columns;
  header.insert(header.end(), table.value_columns.begin(),
                table.value_columns.end());
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += (i ? "," : "") + CsvField(header[i]);
  }
  out += "\n";
  for (const ReportTable::Row& row : table.rows) {
    std::string line;
    for (std::size_t i = 0; i < row.keys.size(); ++i) {
      line += (i ? "," : "") + CsvField(row.keys[i]);
    }
    for (double v : row.values) line += "," + Number(v, "{:.17g}");
    out += line + "\n";
  }
  return out;
}

std::string FormatJson(const ReportTable& table) {
  nlohmann::ordered_json j;
  j["name"] = table.name;
  j["columns"] = table.key_columns;
  for (const std::string& c : table.value_columns) j["columns"].push_back(c);
  j["rows"] = nlohmann::ordered_json::array();
  for (const ReportTable::Row& row : table.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.keys.size(); ++i) {
      r[table.key_columns[i]] = row.keys[i];
    }
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      // JSON has no NaN; missing values become null.
      if (std::isfinite(row.values[i])) {
        r[table.value_columns[i]] = row.values[i];
      } else {
        r[table.value_columns[i]] = nullptr;
      }
    }
    j["rows"].push_back(r);
  }
  j["notes"] = table.notes;
  return j.dump(2) + "\n";
}

std::string FormatMarkdown(const ReportTable& table) {
  std::string head = "|", rule = "|";
  for (const std::string& c : table.key_columns) {
    head += " " + c + " |";
    rule += " --- |";
  }
  for (const std::string& c : table.value_columns) {
    head += " " + c + " |";
    rule += " ---: |";
  }
  std::string out = head + "\n" + rule + "\n";
  for (const ReportTable::Row& row : table.rows) {
    std::string line = "|";
    for (const std::string& k : row.keys) line += " " + k + " |";
    for (double v : row.values) line += " " + Number(v, "{:.4f}") + " |";
    out += line + "\n";
  }
  if (!table.notes.empty()) {
    out += "\n";
    for (const std::string& n : table.notes) out += "- " + n + "\n";
  }
  return out;
}

ReportTable ParseCsv(const std::string& text, std::string name,
                     std::size_t n_key_columns) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorKind::kParse, "empty csv " + name);
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() < n_key_columns) {
    Fail(ErrorKind::kParse, "csv " + name + " has too few columns");
  }
  ReportTable table;
  table.name = std::move(name);
  table.key_columns.assign(header.begin(), header.begin() + n_key_columns);
  table.value_columns.assign(header.begin() + n_key_columns, header.end());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      Fail(ErrorKind::kParse,
           fmt::format("csv {} line {}: expected {} fields, got {}", table.name,
                       line_no, header.size(), fields.size()));
    }
    ReportTable::Row row;
    row.keys.assign(fields.begin(), fields.begin() + n_key_columns);
    for (std::size_t i = n_key_columns; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        row.values.push_back(std::stod(fields[i], &used));
        if (used != fields[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        Fail(ErrorKind::kParse, fmt::format("csv {} line {}: '{}' is not a number",
                                            table.name, line_no, fields[i]));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string FormatPlotSeries(const ReportTable& sweep_table,
                             const std::string& axis,
                             const std::string& metric) {
  // Rows are keyed (value, method).
  const auto col = std::find(sweep_table.value_columns.begin(),
                             sweep_table.value_columns.end(), metric);
  if (col == sweep_table.value_columns.end() || sweep_table.key_columns.size() != 2) {
    Fail(ErrorKind::kInput, "sweep table lacks " + metric);
  }
  const std::size_t ci = static_cast<std::size_t>(col - sweep_table.value_columns.begin());
  nlohmann::ordered_json j;
  j["axis"] = axis;
  j["metric"] = metric;
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> data;
  for (const ReportTable::Row& row : sweep_table.rows) {
    const std::string& method = row.keys[1];
    if (!data.contains(method)) order.push_back(method);
    auto& [xs, ys] = data[method];
    xs.push_back(std::stod(row.keys[0]));
    ys.push_back(row.values[ci]);
  }
  for (const std::string& method : order) {
    nlohmann::ordered_json s;
    s["method"] = method;
    s["x"] = data[method].first;
    nlohmann::ordered_json ys = nlohmann::ordered_json::array();
    for (double y : data[method].second) {
      if (std::isfinite(y)) {
        ys.push_back(y);
      } else {
        ys.push_back(nullptr);
      }
    }
    s["y"] = ys;
    series.push_back(s);
  }
  j["series"] = series;
  return j.dump(2) + "\n";
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> EmitReport(
    const ReportTable& table, const std::vector<std::string>& formats,
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const std::string& f : formats) {
    std::filesystem::path path;
    if (f == "csv") {
      path = dir / (table.name + ".csv");
      WriteTextFile(path, FormatCsv(table));
    } else if (f == "json") {
      path = dir / (table.name + ".json");
      WriteTextFile(path, FormatJson(table));
    } else if (f == "markdown") {
      path = dir / (table.name + ".md");
      WriteTextFile(path, FormatMarkdown(table));
    } else {
      Fail(ErrorKind::kConfig, "unknown report format " + f);
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace vp
