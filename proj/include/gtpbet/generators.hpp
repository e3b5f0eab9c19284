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
#include <random>
#include <string>
#include <vector>

#include "gtpbet/core_game.hpp"
#include "gtpbet/price_path.hpp"

namespace gtpbet {

/// Log-Euler geometric Brownian motion, one grid step per call. gen_gbm is
/// built on this, so a stream and a materialized path with the same seed
/// agree bit for bit.
class GbmStream
{
public:
  GbmStream(Vector mu, Matrix sigma, double step, std::uint64_t seed, Vector start = {});

  /// Advances one step and returns the new price.
  Vector const &next();

  Vector const &price() const noexcept
  {
    return price_;
  }
  double step() const noexcept
  {
    return step_;
  }

private:
  Matrix                           sigma_;
  Vector                           drift_;
  Vector                           log_price_;
  Vector                           price_;
  Vector                           z_;
  double                           step_;
  double                           sqrt_step_;
  std::mt19937_64                  rng_;
  std::normal_distribution<double> normal_;
};

/// K = round(T / grid_step) steps of width T / K, started at S(0) = 1.
PricePath gen_gbm(Vector const &mu, Matrix const &sigma, double T, double grid_step, std::uint64_t seed);

/// Number of grid steps used for horizon T and requested step.
std::size_t grid_steps(double T, double grid_step);

/// Unit-step fractional Gaussian noise of length K, exact covariance.
/// `warning` receives a message when the Cholesky fallback is used.
std::vector<double> fractional_gaussian_noise(double H, std::size_t K, std::uint64_t seed,
                                              std::string *warning = nullptr);

/// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double H, double k);

/// S = exp(scale * B_H) on a grid of K = round(T / grid_step) steps.
PricePath gen_fbm(double H, double scale, double T, double grid_step, std::uint64_t seed,
                  std::string *warning = nullptr);

}  // namespace gtpbet
