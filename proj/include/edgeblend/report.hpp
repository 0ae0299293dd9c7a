// Copyright 2026 The edgeblend Authors
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

#ifndef EDGEBLEND_REPORT_HPP_
#define EDGEBLEND_REPORT_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "edgeblend/io.hpp"

namespace edgeblend {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  template <typename... Ts>
  void add(const Ts&... cells) {
    rows.push_back({cell(cells)...});
  }

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

  std::string render(char sep = ',') const {
    std::string out = fmt::format("{}\n", fmt::join(columns, std::string(1, sep)));
    for (const auto& r : rows) out += fmt::format("{}\n", fmt::join(r, std::string(1, sep)));
    return out;
  }

  static std::string cell(double x) { return fmt::format("{:.17g}", x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "1" : "0"; }
  template <typename T>
    requires std::is_integral_v<T>
  static std::string cell(T x) {
    return fmt::format("{}", x);
  }
};

// Output of one experiment driver. `inputs` and every record carry the seeds
// and configuration needed to rerun them.
struct ExperimentReport {
  std::string id;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<nlohmann::json> records;
  nlohmann::json summary = nlohmann::json::object();
  std::map<std::string, CsvTable> tables;  // CSV payloads by file stem

  nlohmann::json provenance() const {
    return {{"experiment", id}, {"inputs", inputs}, {"summary", summary},
            {"records", records}};
  }

  std::string summary_text() const {
    std::string out = fmt::format("experiment: {}\n", id);
    if (inputs.contains("seed")) out += fmt::format("seed: {}\n", inputs["seed"].dump());
    for (const auto& [key, value] : summary.items()) {
      out += fmt::format("{}: {}\n", key, value.dump());
    }
    return out;
  }

  // Writes <dir>/<id>_<table>.<ext> per table plus <dir>/<id>.provenance.json.
  // Returns the written paths.
  std::vector<std::filesystem::path> write(const std::filesystem::path& dir,
                                           char sep = ',') const {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    const char* ext = sep == '\t' ? "tsv" : "csv";
    for (const auto& [name, table] : tables) {
      auto p = dir / fmt::format("{}_{}.{}", id, name, ext);
      write_file_atomic(p, table.render(sep));
      paths.push_back(p);
    }
    auto p = dir / fmt::format("{}.provenance.json", id);
    write_file_atomic(p, provenance().dump(2) + "\n");
    paths.push_back(p);
    return paths;
  }
};

}  // namespace edgeblend

#endif  // EDGEBLEND_REPORT_HPP_
