// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_TOOLS_OUTPUT_HPP
#define SPHREACH_TOOLS_OUTPUT_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace sphreach::cli {

using nlohmann::json;

/// Shortest decimal that round-trips.
std::string num(double v);

/// CSV file whose first line is "# " followed by the run metadata.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const json& meta,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t width_ = 0;
};

void write_json(const std::filesystem::path& path, const json& doc);

}  // namespace sphreach::cli

#endif  // SPHREACH_TOOLS_OUTPUT_HPP
