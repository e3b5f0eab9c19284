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
#include <optional>
#include <vector>

#include "gtpbet/core_game.hpp"
#include "gtpbet/price_path.hpp"

namespace gtpbet {

/// Streaming δ-sphere limit-order ladder. Each fill sets the next reference
/// level to the previous one compounded by the (rescaled) outcome.
class DeltaCrossing
{
public:
  DeltaCrossing(Vector start_price, double delta);

  /// Feeds the next grid price. Returns the outcome, rescaled to norm delta,
  /// when the return since the last fill reaches delta. Throws GridTooCoarse
  /// when one grid step moves the price by more than twice delta.
  std::optional<Outcome> push(Eigen::Ref<Vector const> const &price);

  /// Return of `price` relative to the current reference level.
  Vector pending_return(Eigen::Ref<Vector const> const &price) const;

  Vector const &reference() const noexcept
  {
    return reference_;
  }
  double delta() const noexcept
  {
    return delta_;
  }
  /// Largest ‖r‖/δ seen at a crossing.
  double max_overshoot() const noexcept
  {
    return max_overshoot_;
  }

private:
  Outcome rescale(Vector const &r) const;

  Vector reference_;
  Vector previous_;
  double delta_;
  double max_overshoot_{0.0};
};

struct Embedding
{
  double                   delta{0.0};
  std::vector<std::size_t> stop_indices;  ///< t_0 = 0, t_1, ..., t_N
  std::vector<Outcome>     outcomes;      ///< x_1 ... x_N
  std::vector<Vector>      fill_prices;   ///< S_ref(t_0) ... S_ref(t_N)
  Vector                   final_return;  ///< return from t_N to T, norm at most δ
  double                   max_overshoot{0.0};

  std::size_t N() const noexcept
  {
    return outcomes.size();
  }
};

/// Greedy first-crossing scan. Crossings at the final grid point are not
/// counted in N (t_N < T ≤ t_{N+1}); their rescaled return goes to
/// final_return.
Embedding embed(PricePath const &path, double delta);

}  // namespace gtpbet
