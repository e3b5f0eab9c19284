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

// Sequential optimizing strategy: bet alpha_n = alpha*_{n-1}, the best
// constant proportion in hindsight up to the previous round.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtpbet/core_game.hpp"
#include "gtpbet/optimizer.hpp"

namespace gtpbet {

struct SosOptions
{
  SolverOptions solver;
  /// Interval between direct recomputations (log|V_{0,n}|, V_{0,n}^{-1}) and
  /// checks of alpha* = V*^{-1} s.
  std::size_t check_every{64};
  /// Store every k-th round in the ledger and diagnostics (the final round is
  /// always stored).
  std::size_t record_every{1};
  bool        check_domain{true};
};

/// Per-round quantities behind the capital decomposition.
struct RoundDiagnostics
{
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  std::size_t n{0};
  /// Phi_n(alpha*_n) - Phi_n(alpha*_{n-1}).
  double delta_phi{0.0};
  double sum_delta_phi{0.0};
  /// log(1 + x_n(alpha*_n)^t V_{0,n-1}(alpha*_{n-1}, alpha*_n)^{-1} x_n(alpha*_{n-1})).
  double delta_phi_upper{0.0};
  /// log|I_n(alpha*_n)| - log|I_{n-1}(alpha*_n)|.
  double log_I_increment{0.0};
  double log_I{0.0};
  double logdet_V0{0.0};
  double tr_V{0.0};
  double tr_V0{0.0};
  /// Relative error of 1 + x^t V^{-1} x = |V_{0,n}|/|V_{0,n-1}| (checkpoints only).
  double det_recursion_residual{nan};
  /// ||alpha* - V*^{-1} s_{0,n}|| (checkpoints only).
  double eq28b_residual{nan};
  /// |Phi(alpha*_n) - logK - sum dPhi - Phi_{0,0}(alpha*_0)|.
  double decomposition_residual{0.0};
  /// Sum over training of 1 / (1 + alpha*_n . x).
  double training_denominator{0.0};
  double alpha_step{0.0};
  double alpha_norm{0.0};
};

/// Running sufficient statistics of an SOS game.
struct BettingState
{
  std::size_t n{0};
  /// alpha*_n, the bet for round n + 1.
  Vector alpha_prev_star;
  /// Sums including the training data.
  Vector s0;
  Matrix V0;
  Matrix V0_inverse;
  double logdet_V0{0.0};
  double logdet_V00{0.0};
  /// log [I_n].
  double logdet_I_running{0.0};
  double delta_phi_sum{0.0};
  double phi_value{0.0};
  /// Sums over Reality's moves only.
  Vector s;
  Matrix V;
};

/// Incremental SOS player. Each step costs one pass of Newton over the
/// distinct outcome values seen so far.
class SosEngine
{
public:
  explicit SosEngine(GameConfig config, SosOptions options = {});

  /// Plays one round with Reality's move x. `force_record` stores the round
  /// regardless of record_every.
  RoundDiagnostics const &step(Outcome const &x, bool force_record = false);

  GameConfig const &config() const noexcept
  {
    return config_;
  }
  BettingState const &state() const noexcept
  {
    return state_;
  }
  CapitalLedger const &ledger() const noexcept
  {
    return ledger_;
  }
  CapitalLedger take_ledger()
  {
    return std::move(ledger_);
  }
  PhiProblem const &problem() const noexcept
  {
    return problem_;
  }
  PhiSolution const &solution() const noexcept
  {
    return solution_;
  }
  /// Phi_{0,0}(alpha*_0), the training-only optimum.
  double phi00() const noexcept
  {
    return phi00_;
  }
  Vector const &alpha0() const noexcept
  {
    return alpha0_;
  }
  double log_capital() const noexcept
  {
    return ledger_.log_capital();
  }
  RoundDiagnostics const &last() const noexcept
  {
    return last_;
  }
  std::vector<RoundDiagnostics> const &diagnostics() const noexcept
  {
    return diagnostics_;
  }
  std::vector<RoundDiagnostics> take_diagnostics()
  {
    return std::move(diagnostics_);
  }

private:
  GameConfig                    config_;
  SosOptions                    options_;
  PhiProblem                    problem_;
  PhiSolution                   solution_;
  BettingState                  state_;
  CapitalLedger                 ledger_;
  std::vector<RoundDiagnostics> diagnostics_;
  RoundDiagnostics              last_;
  double                        phi00_{0.0};
  Vector                        alpha0_;
};

struct SosRun
{
  CapitalLedger                 ledger;
  std::vector<RoundDiagnostics> diagnostics;
  BettingState                  final_state;
  double                        phi00{0.0};
  Vector                        alpha0;
  PhiSolution                   final_solution;
};

/// Runs SOS over the path. Errors from the solver are rethrown with the round.
SosRun sos_run(GameConfig const &config, std::span<Outcome const> path, SosOptions const &options = {});

struct DeficiencyRound
{
  std::size_t n{0};
  double      sum_delta_phi{0.0};
  /// C2 (log|V_{0,n}| - log|V_{0,0}|).
  double lemma1_bound{0.0};
  /// d C2 max(0, log tr V_n) + C3.
  double lemma2_bound{0.0};
};

struct DeficiencyReport
{
  double C1_0{0.0};
  double C1{0.0};
  double C2{0.0};
  double C3{0.0};
  /// False when the training set certifies no positive margin (C2 infinite).
  bool                         certified{true};
  std::vector<DeficiencyRound> rounds;
  std::size_t                  lemma1_violations{0};
  std::size_t                  lemma2_violations{0};
};

DeficiencyReport deficiency_bounds(SosRun const &run, GameConfig const &config);

/// ||s_n|| / sqrt(max(1, tr V_n log tr V_n)) over Reality's moves.
std::vector<double> slln_ratio(std::span<Outcome const> path);
std::vector<double> slln_ratio(CapitalLedger const &ledger);

/// s_n^t V_n^{-1} s_n / log|V_n|; empty while V_n is singular or
/// log|V_n| <= 0.
std::vector<std::optional<double>> slln2_ratio(std::span<Outcome const> path);
std::vector<std::optional<double>> slln2_ratio(CapitalLedger const &ledger);

/// JSON object {N, logK_true, logK_hindsight, logK_approx, C1, C2, C3,
/// slln_ratio, slln2_ratio}.
std::string sos_summary_json(SosRun const &run, DeficiencyReport const &bounds);

}  // namespace gtpbet
