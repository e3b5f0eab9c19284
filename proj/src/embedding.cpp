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
#include "gtpbet/embedding.hpp"

#include <cmath>
#include <sstream>

#include "gtpbet/errors.hpp"

namespace gtpbet {

DeltaCrossing::DeltaCrossing(Vector start_price, double delta)
  : reference_(std::move(start_price))
  , previous_(reference_)
  , delta_(delta)
{
  if (!(delta > 0.0) || !std::isfinite(delta))
  {
    throw InvalidArgument("delta must be positive");
  }
  if (reference_.size() == 0 || !(reference_.array() > 0.0).all())
  {
    throw InvalidArgument("start price must be strictly positive");
  }
}

Vector DeltaCrossing::pending_return(Eigen::Ref<Vector const> const &price) const
{
  return (price.array() / reference_.array() - 1.0).matrix();
}

Outcome DeltaCrossing::rescale(Vector const &r) const
{
  if (r.size() == 1)
  {
    // keeps d = 1 outcomes at exactly ±δ
    return Outcome::Constant(1, std::copysign(delta_, r[0]));
  }
  return r * (delta_ / r.norm());
}

std::optional<Outcome> DeltaCrossing::push(Eigen::Ref<Vector const> const &price)
{
  double sq      = 0.0;
  double step_sq = 0.0;
  for (Eigen::Index j = 0; j < price.size(); ++j)
  {
    double const r = price[j] / reference_[j] - 1.0;
    double const q = price[j] / previous_[j] - 1.0;
    sq += r * r;
    step_sq += q * q;
    previous_[j] = price[j];
  }
  if (step_sq > 4.0 * delta_ * delta_)
  {
    std::ostringstream msg;
    msg << "grid too coarse: a single step moves the price by " << std::sqrt(step_sq)
        << ", more than 2*delta = " << 2.0 * delta_ << "; sample the path more finely";
    throw GridTooCoarse(msg.str());
  }
  double const norm = std::sqrt(sq);
  if (norm < delta_)
  {
    return std::nullopt;
  }
  max_overshoot_ = std::max(max_overshoot_, norm / delta_);
  Outcome x      = rescale(pending_return(price));
  reference_     = (reference_.array() * (1.0 + x.array())).matrix();
  return x;
}

Embedding embed(PricePath const &path, double delta)
{
  if (path.size() == 0)
  {
    throw InvalidArgument("empty price path");
  }
  DeltaCrossing ladder(Vector(path.point(0)), delta);
  Embedding     out;
  out.delta = delta;
  out.stop_indices.push_back(0);
  out.fill_prices.push_back(ladder.reference());
  out.final_return = Vector::Zero(path.dim());

  std::size_t const last          = path.size() - 1;
  bool              crossed_at_end = false;
  for (std::size_t i = 1; i <= last; ++i)
  {
    auto x = ladder.push(path.point(i));
    if (!x)
    {
      continue;
    }
    if (i == last)
    {
      out.final_return = *x;
      crossed_at_end   = true;
      break;
    }
    out.outcomes.push_back(std::move(*x));
    out.stop_indices.push_back(i);
    out.fill_prices.push_back(ladder.reference());
  }
  if (!crossed_at_end)
  {
    out.final_return = ladder.pending_return(path.point(last));
  }
  out.max_overshoot = ladder.max_overshoot();
  return out;
}

}  // namespace gtpbet
