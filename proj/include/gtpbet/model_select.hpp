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

#include <iosfwd>
#include <string>
#include <vector>

#include "gtpbet/core_game.hpp"
#include "gtpbet/sos.hpp"

namespace gtpbet {

struct DimensionRow
{
  int    d{0};
  /// (N + n0) D_d(g_N || g*_N).
  double kl_term{0.0};
  /// ½ log [I_N]_d.
  double penalty{0.0};
  double criterion{0.0};
  double logK_true{0.0};
};

struct NestedGameReport
{
  std::vector<DimensionRow> rows;
  /// Argmax of the criterion, ties toward smaller d.
  int                      selected{0};
  /// Axis half-width shared by every nested game.
  double                   common_c{0.0};
  std::vector<std::string> warnings;
};

struct ModelSelectConfig
{
  /// Bounds of all items in their original order. Box or explicit bound.
  Domain     domain{Domain::symmetric_box(1, 1.0)};
  double     epsilon0{0.1};
  SosOptions sos{.solver = {}, .check_every = 256, .record_every = 1};
};

/// Runs SOS on the nested games Game(1) ⊂ ... ⊂ Game(d̄) formed by the items
/// in `order` (0-based indices into `items`).
NestedGameReport select_dimension(std::vector<std::vector<double>> const &items, std::vector<int> const &order,
                                  ModelSelectConfig const &config);

/// Header d,kl_term,penalty,criterion,logK_true,selected.
void write_model_select_csv(std::ostream &out, NestedGameReport const &report);

}  // namespace gtpbet
