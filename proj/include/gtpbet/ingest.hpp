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

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gtpbet/core_game.hpp"

namespace gtpbet {

/// Price table: one row per day, one column per item.
struct PriceTable
{
  std::vector<std::string> items;
  std::vector<Vector>      rows;

  int dim() const noexcept
  {
    return items.empty() ? 0 : static_cast<int>(items.size());
  }
};

/// Header row, first column a date or index (ignored), then one price column
/// per item.
PriceTable read_price_table(std::istream &in);
PriceTable read_price_table_file(std::string const &path);

/// Min/max normalisation of daily returns to [-1, 1] followed by centering.
struct ReturnTransform
{
  Vector      s_max;
  Vector      s_min;
  double      c{0.0};
  /// Forecast horizon F = floor(c T).
  std::size_t F{0};
  Vector      rho;

  /// z = (2 s - s_max - s_min) / (s_max - s_min), evaluated so the extremes
  /// map to ±1 exactly.
  Vector normalize(Vector const &s) const;
  /// Inverse of normalize.
  Vector denormalize(Vector const &z) const;
};

struct TransformResult
{
  ReturnTransform      transform;
  /// Daily returns s_1 ... s_{T-1}.
  std::vector<Vector>  returns;
  std::vector<Vector>  z;
  /// x_n = z_{F+n} - rho for the live rounds.
  std::vector<Outcome> outcomes;
  /// Box [-1 - rho, 1 - rho].
  Domain               domain{Domain::symmetric_box(1, 1.0)};
  /// The 2^d corners of the box, i.e. (±1, ..., ±1) - rho.
  TrainingSet          training;
};

TransformResult transform_returns(PriceTable const &prices, double c, double epsilon0 = 0.1);

}  // namespace gtpbet
