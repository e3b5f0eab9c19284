//------------------------------------------------------------------------------
//
//   Copyright 2026 The gtpbet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtpbet/core_game.hpp"

namespace gtpbet {

/// Flat key = value configuration. '#' starts a comment.
class ExperimentConfig
{
public:
  static ExperimentConfig parse(std::istream &in, std::filesystem::path base_dir = {});
  static ExperimentConfig load(std::filesystem::path const &file);

  void set(std::string const &key, std::string value);
  bool has(std::string const &key) const;

  std::string                get(std::string const &key) const;
  std::string                get(std::string const &key, std::string const &fallback) const;
  double                     get_double(std::string const &key, double fallback) const;
  long long                  get_int(std::string const &key, long long fallback) const;
  bool                       get_bool(std::string const &key, bool fallback) const;
  /// Comma-separated list; empty when the key is missing.
  std::vector<double>        get_list(std::string const &key) const;
  /// Path relative to the config file's directory.
  std::filesystem::path      get_path(std::string const &key) const;

  /// Seed from the config, overridden by the GTPBET_SEED environment variable.
  std::uint64_t seed() const;

  std::map<std::string, std::string> const &values() const noexcept
  {
    return values_;
  }

private:
  std::map<std::string, std::string> values_;
  std::filesystem::path              base_dir_;
};

/// Parses "mu" style vectors of length d (a single value is broadcast).
Vector parse_vector(std::vector<double> const &values, int d, std::string const &key);
/// d values give a diagonal matrix, d*d values a row-major matrix.
Matrix parse_matrix(std::vector<double> const &values, int d, std::string const &key);

struct ExperimentOutput
{
  std::string                        scenario;
  std::filesystem::path              directory;
  std::vector<std::filesystem::path> files;
  std::string                        summary_json;
};

/// Runs the scenario named by the "scenario" key and writes its outputs under
/// the "output" directory (default "gtpbet_out").
ExperimentOutput run_experiment(ExperimentConfig const &config);

/// Writes series,n,value rows for every finite ledger column.
void write_long_series(std::ostream &out, CapitalLedger const &ledger);

}  // namespace gtpbet
