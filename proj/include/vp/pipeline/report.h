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
#ifndef VP_PIPELINE_REPORT_H_
#define VP_PIPELINE_REPORT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vp/core/artifact.h"

namespace vp {

// A result table: leading string key columns (e.g. method) followed by
// numeric columns.
struct ReportTable {
  struct Row {
    std::vector<std::string> keys;
    std::vector<double> values;
    friend bool operator==(const Row&, const Row&) = default;
  };

  std::string name;
  std::vector<std::string> key_columns;
  std::vector<std::string> value_columns;
  std::vector<Row> rows;
  std::vector<std::string> notes;  // e.g. dropped-row accounting

  // Value of `column` in the row whose first key is `key`; throws
  // Error(kInput) if absent.
  double At(const std::string& key, const std::string& column) const;
};

// Canonical numeric column order; any other columns follow in name order.
const std::vector<std::string>& CanonicalColumns();

// Builds a per-method table from "<metric>/<method>" entries. Methods keep
// the order given; columns follow CanonicalColumns.
ReportTable MethodTable(std::string name,
                        const std::map<std::string, double>& metrics,
                        const std::vector<std::string>& methods);

// Groups "<metric>/<method>" keys of an artifact into a table.
ReportTable TableFromArtifact(const RunArtifact& artifact, std::string name);

std::string FormatCsv(const ReportTable& table);     // %.17g, round-trips
std::string FormatJson(const ReportTable& table);
std::string FormatMarkdown(const ReportTable& table);  // 4 decimals

ReportTable ParseCsv(const std::string& text, std::string name,
                     std::size_t n_key_columns = 1);

// Sweep plot data: one series per method, x = swept values, y = `metric`.
std::string FormatPlotSeries(const ReportTable& sweep_table,
                             const std::string& axis,
                             const std::string& metric);

// Writes <dir>/<table.name>.{csv,json,md} for the requested formats and
// returns the written paths.
std::vector<std::filesystem::path> EmitReport(
    const ReportTable& table, const std::vector<std::string>& formats,
    const std::filesystem::path& dir);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace vp

#endif  // VP_PIPELINE_REPORT_H_
