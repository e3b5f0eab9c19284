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
#include "gtpbet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtpbet/baselines.hpp"
#include "gtpbet/errors.hpp"
#include "gtpbet/generators.hpp"

namespace gtpbet {
namespace {

GameConfig sphere_game(int dim, double delta, double epsilon0)
{
  GameConfig config{Domain::sphere(dim, delta), {}, "sos", 0};
  config.training = make_training(config.domain, epsilon0, TrainingScheme::axis_2d);
  return config;
}

double final_log_factor(Vector const &alpha, Vector const &r)
{
  double const f = 1.0 + alpha.dot(r);
  if (!(f > 0.0))
  {
    throw CollateralViolation(0, f);
  }
  return log_growth(alpha, r);
}

}  // namespace

std::vector<double> default_delta_grid()
{
  return {0.02, 0.01, 0.005, 0.0025};
}

EmbeddedGameResult play_embedded(Embedding const &embedding, int dim, EmbeddedGameOptions const &options)
{
  SosEngine engine(sphere_game(dim, embedding.delta, options.epsilon0), options.sos);
  for (auto const &x : embedding.outcomes)
  {
    engine.step(x);
  }
  EmbeddedGameResult out;
  out.delta      = embedding.delta;
  out.N          = embedding.N();
  out.tr_V       = engine.state().V.trace();
  out.logK_N     = engine.log_capital();
  out.alpha_star = engine.state().alpha_prev_star;
  out.logK_T     = out.logK_N + final_log_factor(out.alpha_star, embedding.final_return);
  return out;
}

double holder_estimate(double delta_a, double trV_a, double delta_b, double trV_b)
{
  if (!(trV_a > 0.0) || !(trV_b > 0.0) || delta_a == delta_b)
  {
    return HolderCell::nan;
  }
  double const slope = (std::log(trV_b) - std::log(trV_a)) / (std::log(delta_b) - std::log(delta_a));
  return 1.0 / (2.0 - slope);
}

HolderTable holder_experiment(PricePath const &path, std::span<double const> deltas, HolderOptions const &options)
{
  HolderTable table;
  path.validate();
  for (int j = 0; j < path.dim(); ++j)
  {
    double lo = std::log(path.point(0)[j]);
    double hi = lo;
    for (std::size_t i = 1; i < path.size(); ++i)
    {
      double const v = std::log(path.point(i)[j]);
      lo             = std::min(lo, v);
      hi             = std::max(hi, v);
    }
    for (double delta : deltas)
    {
      if (hi - lo <= options.activity_factor * delta)
      {
        std::ostringstream msg;
        msg << "coordinate " << j + 1 << " log-range " << hi - lo << " does not exceed A = "
            << options.activity_factor * delta << " at delta " << delta;
        table.warnings.push_back(msg.str());
      }
    }
  }
  for (double delta : deltas)
  {
    auto const embedding = embed(path, delta);
    auto const game      = play_embedded(embedding, path.dim(), options.game);
    HolderCell cell;
    cell.delta       = delta;
    cell.N           = game.N;
    cell.tr_V        = game.tr_V;
    cell.logK_T      = game.logK_T;
    cell.delta_alpha = delta * game.alpha_star.norm();
    if (!table.cells.empty())
    {
      auto const &prev = table.cells.back();
      cell.h_hat       = holder_estimate(prev.delta, prev.tr_V, delta, game.tr_V);
    }
    table.cells.push_back(cell);
  }
  return table;
}

GirsanovResult girsanov_rate_experiment(Vector const &mu, Matrix const &sigma, GirsanovOptions const &options)
{
  if (!(options.T > 0.0))
  {
    throw InvalidArgument("girsanov: T must be positive");
  }
  int const    d     = static_cast<int>(mu.size());
  double const delta = options.delta > 0.0 ? options.delta : options.delta_scale * std::pow(options.T, -0.25);
  double       step  = options.grid_step;
  if (!(step > 0.0))
  {
    double const tr = (sigma * sigma.transpose()).trace();
    step            = tr > 0.0 ? std::pow(delta / (10.0 * std::sqrt(tr)), 2) : options.T;
  }
  std::size_t const K = grid_steps(options.T, step);
  double const      h = options.T / static_cast<double>(K);

  SosOptions sos;
  sos.check_every  = options.check_every;
  sos.record_every = std::numeric_limits<std::size_t>::max();
  SosEngine engine(sphere_game(d, delta, options.epsilon0), sos);

  GbmStream     stream(mu, sigma, h, options.seed);
  DeltaCrossing ladder(stream.price(), delta);
  double        final_factor = 0.0;
  bool          crossed_end  = false;
  for (std::size_t i = 1; i <= K; ++i)
  {
    auto x = ladder.push(stream.next());
    if (!x)
    {
      continue;
    }
    if (i == K)
    {
      final_factor = final_log_factor(engine.state().alpha_prev_star, *x);
      crossed_end  = true;
      break;
    }
    engine.step(*x);
  }
  if (!crossed_end)
  {
    final_factor = final_log_factor(engine.state().alpha_prev_star, ladder.pending_return(stream.price()));
  }

  GirsanovResult out;
  out.logK        = engine.log_capital() + final_factor;
  out.logK_over_T = out.logK / options.T;
  out.target      = kelly_gbm_rate(mu, sigma);
  out.delta       = delta;
  out.grid_step   = h;
  out.N           = engine.state().n;
  return out;
}

}  // namespace gtpbet
