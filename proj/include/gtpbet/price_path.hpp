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
#include <iosfwd>
#include <vector>

#include "gtpbet/core_game.hpp"

namespace gtpbet {

/// How a price path was produced.
struct PathGenerator
{
  enum class Kind
  {
    gbm,
    fbm,
    external,
  };

  Kind          kind{Kind::external};
  Vector        mu;
  Matrix        sigma;
  double        hurst{0.5};
  double        scale{1.0};
  std::uint64_t seed{0};
};

/// Positive d-dimensional price function sampled on an increasing time grid.
class PricePath
{
public:
  explicit PricePath(int dim = 1);
  /// `values` holds the points row by row, (times.size() * dim) entries.
  PricePath(std::vector<double> times, std::vector<double> values, int dim, PathGenerator generator = {});

  int dim() const noexcept
  {
    return dim_;
  }
  /// Number of grid points K + 1.
  std::size_t size() const noexcept
  {
    return times_.size();
  }
  double time(std::size_t i) const
  {
    return times_[i];
  }
  Eigen::Map<Vector const> point(std::size_t i) const
  {
    return {values_.data() + i * static_cast<std::size_t>(dim_), dim_};
  }
  double horizon() const
  {
    return times_.empty() ? 0.0 : times_.back();
  }
  PathGenerator const &generator() const noexcept
  {
    return generator_;
  }
  std::vector<double> const &times() const noexcept
  {
    return times_;
  }
  std::vector<double> const &values() const noexcept
  {
    return values_;
  }

  /// Throws InvalidArgument unless the grid is strictly increasing and every
  /// price is strictly positive.
  void validate() const;

private:
  int                 dim_;
  std::vector<double> times_;
  std::vector<double> values_;
  PathGenerator       generator_;
};

/// CSV with header time,S1,...,Sd.
void      write_price_path_csv(std::ostream &out, PricePath const &path);
PricePath read_price_path_csv(std::istream &in);

}  // namespace gtpbet
