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
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gtpbet/core_game.hpp"
#include "gtpbet/embedding.hpp"
#include "gtpbet/price_path.hpp"
#include "gtpbet/sos.hpp"

namespace gtpbet {

/// Default δ grid for path-roughness experiments.
std::vector<double> default_delta_grid();

struct EmbeddedGameOptions
{
  double     epsilon0{0.1};
  SosOptions sos{.solver = {}, .check_every = 4096, .record_every = std::numeric_limits<std::size_t>::max()};
};

struct EmbeddedGameResult
{
  double      delta{0.0};
  std::size_t N{0};
  double      tr_V{0.0};
  /// log K_δ(T): capital after N rounds times the final partial return.
  double logK_T{0.0};
  double logK_N{0.0};
  Vector alpha_star;
};

/// Plays SOS on the sphere domain of radius δ over an embedded path.
EmbeddedGameResult play_embedded(Embedding const &embedding, int dim, EmbeddedGameOptions const &options = {});

struct HolderCell
{
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  double      delta{0.0};
  std::size_t N{0};
  double      tr_V{0.0};
  double      logK_T{0.0};
  /// Hölder estimate from this δ and the previous one in the grid.
  double h_hat{nan};
  /// δ ||α*_N||.
  double delta_alpha{0.0};
};

struct HolderTable
{
  std::vector<HolderCell>  cells;
  std::vector<std::string> warnings;
};

struct HolderOptions
{
  EmbeddedGameOptions game;
  /// Activity threshold A = activity_factor * δ on each coordinate's log-range.
  double activity_factor{10.0};
};

HolderTable holder_experiment(PricePath const &path, std::span<double const> deltas, HolderOptions const &options = {});

/// Solves tr V ∝ δ^(2 - 1/H) between two cells.
double holder_estimate(double delta_a, double trV_a, double delta_b, double trV_b);

struct GirsanovOptions
{
  double        T{200.0};
  /// Fixed δ when positive; otherwise δ_T = delta_scale * T^(-1/4).
  double        delta{0.0};
  double        delta_scale{0.02};
  /// Grid step; when zero it is chosen so a typical step return is δ/10.
  double        grid_step{0.0};
  double        epsilon0{0.99};
  std::uint64_t seed{0};
  std::size_t   check_every{4096};
};

struct GirsanovResult
{
  double      logK_over_T{0.0};
  double      target{0.0};
  double      logK{0.0};
  double      delta{0.0};
  double      grid_step{0.0};
  std::size_t N{0};
};

/// Streams a GBM path through the limit-order embedding and SOS without
/// storing the path.
GirsanovResult girsanov_rate_experiment(Vector const &mu, Matrix const &sigma, GirsanovOptions const &options);

}  // namespace gtpbet
