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

// Comparison strategies: constant proportions, a grid universal portfolio for
// one betting item, and the Kelly growth rate of a geometric Brownian motion.

#include <cstddef>
#include <span>
#include <vector>

#include "gtpbet/core_game.hpp"

namespace gtpbet {

/// Sum of log(1 + alpha . x_n); throws CollateralViolation on 1 + alpha.x <= 0.
double constant_strategy_capital(Vector const &alpha, std::span<Outcome const> path);

struct UniversalPortfolioConfig
{
  /// Number of grid accounts M.
  std::size_t accounts{100};
  /// Prepend the training outcomes {lo, hi} of the domain to every account.
  bool include_training{false};
  /// One-dimensional box domain; the prudent interval is [-1/hi, 1/|lo|].
  Domain domain{Domain::symmetric_box(1, 1.0)};
};

/// Midpoints of M equal subintervals of the prudent interval.
std::vector<double> universal_grid(UniversalPortfolioConfig const &config);

struct UniversalSeries
{
  /// K^U_n = (1/M) sum_m K_n^(m); +inf when it overflows.
  std::vector<double> capital;
  /// log K^U_n, computed by log-sum-exp when capital overflows.
  std::vector<double> log_capital;
};

/// Cover's universal portfolio on a grid of constant bets, per round n = 1..N.
/// Rejects d != 1.
UniversalSeries universal_portfolio(UniversalPortfolioConfig const &config, std::span<Outcome const> path);

/// Q = 1/2 mu^t (sigma sigma^t)^{-1} mu.
double kelly_gbm_rate(Vector const &mu, Matrix const &sigma);

/// Sum of Q over groups of assets traded separately; `groups` must partition
/// {0, ..., d-1}.
double partition_growth_rate(Vector const &mu, Matrix const &sigma,
                             std::vector<std::vector<int>> const &groups);

}  // namespace gtpbet
