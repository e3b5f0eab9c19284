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
#include "gtpbet/model_select.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "gtpbet/csv.hpp"
#include "gtpbet/errors.hpp"
#include "gtpbet/optimizer.hpp"

namespace gtpbet {
namespace {

Domain prefix_domain(Domain const &full, std::vector<int> const &order, int d)
{
  if (auto const *b = std::get_if<Domain::Box>(&full.kind()))
  {
    Vector lo(d);
    Vector hi(d);
    for (int j = 0; j < d; ++j)
    {
      lo[j] = b->lo[order[static_cast<std::size_t>(j)]];
      hi[j] = b->hi[order[static_cast<std::size_t>(j)]];
    }
    return Domain::box(lo, hi);
  }
  if (auto const *e = std::get_if<Domain::ExplicitBound>(&full.kind()))
  {
    return Domain::explicit_bound(d, e->bound);
  }
  throw InvalidArgument("model selection needs a box or explicit-bound domain");
}

}  // namespace

NestedGameReport select_dimension(std::vector<std::vector<double>> const &items, std::vector<int> const &order,
                                  ModelSelectConfig const &config)
{
  int const dbar = static_cast<int>(order.size());
  if (dbar == 0)
  {
    throw InvalidArgument("model selection needs at least one item");
  }
  if (config.domain.dim() != static_cast<int>(items.size()))
  {
    throw InvalidArgument("model selection domain dimension does not match the item count");
  }
  std::vector<bool> seen(items.size(), false);
  for (int k : order)
  {
    if (k < 0 || k >= static_cast<int>(items.size()) || seen[static_cast<std::size_t>(k)])
    {
      throw InvalidArgument("item order must list distinct item indices");
    }
    seen[static_cast<std::size_t>(k)] = true;
  }
  std::size_t const N = items[static_cast<std::size_t>(order[0])].size();
  for (int k : order)
  {
    if (items[static_cast<std::size_t>(k)].size() != N)
    {
      throw InvalidArgument("items have different lengths");
    }
  }

  NestedGameReport report;
  auto const       full = prefix_domain(config.domain, order, dbar);
  report.common_c        = full.max_norm() * std::sqrt(static_cast<double>(dbar)) / (1.0 - config.epsilon0);

  for (int d = 1; d <= dbar; ++d)
  {
    GameConfig game{prefix_domain(config.domain, order, d), {}, "sos", 0};
    game.training = axis_training(game.domain, report.common_c, config.epsilon0);

    SosEngine engine(game, config.sos);
    Outcome   x(d);
    for (std::size_t n = 0; n < N; ++n)
    {
      for (int j = 0; j < d; ++j)
      {
        x[j] = items[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])][n];
      }
      engine.step(x);
    }

    auto const   dist = risk_neutral(engine.problem(), engine.solution());
    auto const   kl   = kl_capital_identity(engine.problem(), engine.solution(), dist);
    DimensionRow row;
    row.d         = d;
    row.kl_term   = static_cast<double>(engine.problem().count()) * kl.kl;
    row.penalty   = 0.5 * engine.state().logdet_I_running;
    row.criterion = row.kl_term - row.penalty;
    row.logK_true = engine.log_capital();
    report.rows.push_back(row);
  }

  report.selected = 1;
  double best     = report.rows.front().criterion;
  for (auto const &row : report.rows)
  {
    if (row.criterion > best)
    {
      best            = row.criterion;
      report.selected = row.d;
    }
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i)
  {
    auto const &a = report.rows[i - 1];
    auto const &b = report.rows[i];
    if (b.penalty < a.penalty)
    {
      std::ostringstream msg;
      msg << "penalty decreases from d=" << a.d << " (" << a.penalty << ") to d=" << b.d << " (" << b.penalty << ")";
      report.warnings.push_back(msg.str());
    }
    if (b.kl_term < a.kl_term - 1e-8 * std::max(1.0, std::abs(a.kl_term)))
    {
      std::ostringstream msg;
      msg << "kl_term decreases from d=" << a.d << " to d=" << b.d;
      report.warnings.push_back(msg.str());
    }
  }
  return report;
}

void write_model_select_csv(std::ostream &out, NestedGameReport const &report)
{
  csv::write_row(out, {"d", "kl_term", "penalty", "criterion", "logK_true", "selected"});
  for (auto const &row : report.rows)
  {
    csv::write_row(out, {std::to_string(row.d), csv::format(row.kl_term), csv::format(row.penalty),
                         csv::format(row.criterion), csv::format(row.logK_true),
                         row.d == report.selected ? "1" : "0"});
  }
}

}  // namespace gtpbet
