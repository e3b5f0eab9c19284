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
#include "gtpbet/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "gtpbet/baselines.hpp"
#include "gtpbet/embedding.hpp"
#include "gtpbet/generators.hpp"
#include "gtpbet/ingest.hpp"
#include "gtpbet/optimizer.hpp"
#include "gtpbet/sos.hpp"

namespace gtpbet {
namespace {

std::vector<Outcome> uniform_path(Domain const &domain, std::size_t N, std::uint64_t seed)
{
  std::mt19937_64      rng(seed);
  std::vector<Outcome> path;
  for (std::size_t n = 0; n < N; ++n)
  {
    path.push_back(domain.sample(rng));
  }
  return path;
}

bool kl_identity()
{
  for (int d = 1; d <= 3; ++d)
  {
    GameConfig game{Domain::symmetric_box(d, 1.0), {}, "sos", 0};
    game.training   = make_training(game.domain, 0.1, TrainingScheme::axis_2d);
    auto const path = uniform_path(game.domain, 300, 11 + static_cast<std::uint64_t>(d));
    auto const prob = PhiProblem::from_sequence(game.training.points, path);
    auto const sol  = solve_phi(prob);
    auto const kl   = kl_capital_identity(prob, sol, risk_neutral(prob, sol));
    if (kl.check > 1e-9 * std::max(1.0, std::abs(sol.phi_value)))
    {
      return false;
    }
  }
  return true;
}

bool sos_invariants()
{
  GameConfig game{Domain::symmetric_box(2, 1.0), {}, "sos", 0};
  game.training     = make_training(game.domain, 0.1, TrainingScheme::axis_2d);
  auto const path   = uniform_path(game.domain, 1000, 5);
  auto const run    = sos_run(game, path);
  auto const bounds = deficiency_bounds(run, game);
  for (auto const &diag : run.diagnostics)
  {
    if (std::isfinite(diag.eq28b_residual) && diag.eq28b_residual > 1e-6)
    {
      return false;
    }
    if (diag.decomposition_residual > 1e-8 * std::max(1.0, std::abs(diag.sum_delta_phi)))
    {
      return false;
    }
  }
  return bounds.lemma1_violations == 0 && bounds.lemma2_violations == 0;
}

bool embedding_consistency()
{
  auto const path = gen_gbm(Vector::Constant(1, 0.05), Matrix::Constant(1, 1, 0.3), 1.0, 1e-5, 3);
  auto const emb  = embed(path, 0.01);
  double     prod = 1.0;
  for (auto const &x : emb.outcomes)
  {
    prod *= 1.0 + x[0];
    if (std::abs(std::abs(x[0]) - 0.01) > 1e-15)
    {
      return false;
    }
  }
  return std::abs(prod - emb.fill_prices.back()[0] / emb.fill_prices.front()[0]) <= 1e-9 * prod;
}

bool transform_inverse()
{
  PriceTable prices;
  prices.items = {"a", "b"};
  std::mt19937_64                  rng(9);
  std::normal_distribution<double> z;
  Vector                           p = Vector::Constant(2, 100.0);
  for (int t = 0; t < 60; ++t)
  {
    prices.rows.push_back(p);
    p = (p.array() * (1.0 + 0.02 * Vector::NullaryExpr(2, [&] { return z(rng); }).array())).matrix();
  }
  auto const tr = transform_returns(prices, 0.17);
  for (std::size_t t = 0; t < tr.returns.size(); ++t)
  {
    if ((tr.transform.denormalize(tr.z[t]) - tr.returns[t]).cwiseAbs().maxCoeff() > 1e-12)
    {
      return false;
    }
  }
  for (auto const &x : tr.outcomes)
  {
    if (!tr.domain.contains(x))
    {
      return false;
    }
  }
  return true;
}

bool universal_oracle()
{
  UniversalPortfolioConfig config;
  config.accounts = 50;
  auto const path = uniform_path(config.domain, 200, 21);
  auto const up   = universal_portfolio(config, path);
  auto const grid = universal_grid(config);
  double     sum  = 0.0;
  for (double a : grid)
  {
    sum += std::exp(constant_strategy_capital(Vector::Constant(1, a), path));
  }
  return up.capital.back() == sum / static_cast<double>(grid.size());
}

}  // namespace

int run_selftest(std::ostream &out)
{
  std::pair<char const *, std::function<bool()>> const checks[] = {
    {"kl capital identity", kl_identity},
    {"sos decomposition and deficiency bounds", sos_invariants},
    {"embedding reproduces fill prices", embedding_consistency},
    {"return transform inverse and domain membership", transform_inverse},
    {"universal portfolio equals mean of constant accounts", universal_oracle},
  };
  int failures = 0;
  for (auto const &[name, check] : checks)
  {
    bool ok = false;
    try
    {
      ok = check();
    }
    catch (std::exception const &e)
    {
      out << "error: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    failures += ok ? 0 : 1;
  }
  return failures;
}

}  // namespace gtpbet
