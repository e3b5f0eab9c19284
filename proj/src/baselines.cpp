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
#include "gtpbet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtpbet/errors.hpp"

namespace gtpbet {

double constant_strategy_capital(Vector const &alpha, std::span<Outcome const> path)
{
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i)
  {
    double factor = 1.0 + alpha.dot(path[i]);
    if (!(factor > 0.0))
    {
      throw CollateralViolation(i + 1, factor);
    }
    total += log_growth(alpha, path[i]);
  }
  return total;
}

std::vector<double> universal_grid(UniversalPortfolioConfig const &config)
{
  if (config.accounts < 2)
  {
    throw InvalidArgument("universal portfolio needs at least two accounts");
  }
  if (config.domain.dim() != 1 || !config.domain.is_box())
  {
    throw InvalidArgument("universal portfolio is implemented for one-dimensional box domains");
  }
  auto const  &b     = std::get<Domain::Box>(config.domain.kind());
  double const lower = -1.0 / b.hi[0];
  double const upper = 1.0 / -b.lo[0];
  double const width = (upper - lower) / static_cast<double>(config.accounts);
  std::vector<double> grid(config.accounts);
  for (std::size_t m = 0; m < config.accounts; ++m)
  {
    grid[m] = lower + (static_cast<double>(m) + 0.5) * width;
  }
  return grid;
}

UniversalSeries universal_portfolio(UniversalPortfolioConfig const &config, std::span<Outcome const> path)
{
  for (auto const &x : path)
  {
    if (x.size() != 1)
    {
      throw InvalidArgument("universal portfolio supports a single betting item only");
    }
  }
  auto const          grid = universal_grid(config);
  std::size_t const   M    = grid.size();
  std::vector<Vector> alphas;
  alphas.reserve(M);
  for (double a : grid)
  {
    alphas.push_back(Vector::Constant(1, a));
  }

  std::vector<double> logs(M, 0.0);
  if (config.include_training)
  {
    auto const &b = std::get<Domain::Box>(config.domain.kind());
    Vector      lo = b.lo;
    Vector      hi = b.hi;
    for (std::size_t m = 0; m < M; ++m)
    {
      // Accounts on the boundary of A go to zero here and stay there.
      logs[m] += log_growth(alphas[m], lo);
      logs[m] += log_growth(alphas[m], hi);
    }
  }

  UniversalSeries out;
  out.capital.reserve(path.size());
  out.log_capital.reserve(path.size());
  double const inv_m = 1.0 / static_cast<double>(M);
  for (auto const &x : path)
  {
    double sum = 0.0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < M; ++m)
    {
      logs[m] += log_growth(alphas[m], x);
      sum += std::exp(logs[m]);
      top = std::max(top, logs[m]);
    }
    double const capital = sum / static_cast<double>(M);
    out.capital.push_back(capital);
    if (std::isfinite(capital) && capital > 0.0)
    {
      out.log_capital.push_back(std::log(capital));
    }
    else
    {
      double shifted = 0.0;
      for (double l : logs)
      {
        shifted += std::exp(l - top);
      }
      out.log_capital.push_back(top + std::log(shifted * inv_m));
    }
  }
  return out;
}

double kelly_gbm_rate(Vector const &mu, Matrix const &sigma)
{
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size())
  {
    throw InvalidArgument("drift and volatility dimensions differ");
  }
  Matrix const             cov = sigma * sigma.transpose();
  Eigen::FullPivLU<Matrix> lu(cov);
  if (!lu.isInvertible())
  {
    throw InvalidArgument("sigma sigma^t is singular");
  }
  return 0.5 * mu.dot(lu.solve(mu));
}

double partition_growth_rate(Vector const &mu, Matrix const &sigma,
                             std::vector<std::vector<int>> const &groups)
{
  auto const        d = mu.size();
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (auto const &g : groups)
  {
    for (int i : g)
    {
      if (i < 0 || i >= d || seen[static_cast<std::size_t>(i)])
      {
        throw InvalidArgument("groups must partition the asset indices");
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
  {
    throw InvalidArgument("groups must partition the asset indices");
  }

  Matrix const cov   = sigma * sigma.transpose();
  double       total = 0.0;
  for (auto const &g : groups)
  {
    auto const k = static_cast<Eigen::Index>(g.size());
    Vector     sub_mu(k);
    Matrix     sub_cov(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
    {
      sub_mu[a] = mu[g[static_cast<std::size_t>(a)]];
      for (Eigen::Index b = 0; b < k; ++b)
      {
        sub_cov(a, b) = cov(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]);
      }
    }
    Eigen::LLT<Matrix> llt(sub_cov);
    if (llt.info() != Eigen::Success)
    {
      throw InvalidArgument("singular covariance block");
    }
    total += 0.5 * sub_mu.dot(llt.solve(sub_mu));
  }
  return total;
}

}  // namespace gtpbet
