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

// Maximisation of the constant-proportion log capital
//
//   Phi(alpha) = sum_n w_n log(1 + alpha . x_n)
//
// over the training points and Reality's moves, together with the empirical
// risk-neutral distribution it induces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gtpbet/core_game.hpp"

namespace gtpbet {

/// Outcomes grouped by exact value (bit pattern). Repeated values, common with
/// corner training points and sphere embeddings, are stored once with a
/// multiplicity.
class OutcomeMultiset
{
public:
  explicit OutcomeMultiset(int dim = 1);

  /// Adds `count` copies of x and returns the index of its atom.
  std::size_t add(Vector const &x, double count = 1.0);

  int dim() const noexcept
  {
    return dim_;
  }
  std::size_t distinct() const noexcept
  {
    return weights_.size();
  }
  double total_weight() const noexcept
  {
    return total_;
  }
  Eigen::Map<Vector const> atom(std::size_t k) const
  {
    return {values_.data() + k * static_cast<std::size_t>(dim_), dim_};
  }
  double weight(std::size_t k) const noexcept
  {
    return weights_[k];
  }

private:
  struct KeyHash
  {
    std::size_t operator()(std::vector<std::uint64_t> const &key) const noexcept;
  };

  int                                                             dim_;
  std::vector<double>                                             values_;
  std::vector<double>                                             weights_;
  double                                                          total_{0.0};
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, KeyHash> index_;
};

/// Training points x_{-n0+1..0} followed by Reality's moves x_1..x_N.
struct PhiProblem
{
  OutcomeMultiset outcomes;
  std::size_t     training_count{0};

  PhiProblem() = default;
  explicit PhiProblem(int dim)
    : outcomes(dim)
  {}

  static PhiProblem from_sequence(std::span<Outcome const> training, std::span<Outcome const> moves);

  int dim() const noexcept
  {
    return outcomes.dim();
  }
  /// N + n0.
  double count() const noexcept
  {
    return outcomes.total_weight();
  }
};

struct PhiSolution
{
  Vector alpha_star;
  double phi_value{0.0};
  double gradient_norm{0.0};
  /// I_N(alpha*) = -Hessian of Phi, positive definite.
  Matrix information;
  int    iterations{0};
};

struct SolverOptions
{
  double tol{1e-10};
  int    max_iterations{200};
  double armijo_slope{1e-4};
  double shrink{0.5};
  /// Steps keep every 1 + alpha.x_n at least this fraction of its value.
  double boundary_fraction{0.1};
};

/// Phi(alpha); -inf when some 1 + alpha.x_n <= 0.
double phi_value(PhiProblem const &problem, Vector const &alpha);
Vector phi_gradient(PhiProblem const &problem, Vector const &alpha);
/// I(alpha) = sum_n w_n x_n x_n^t / (1 + alpha.x_n)^2.
Matrix phi_information(PhiProblem const &problem, Vector const &alpha);

/// Damped Newton with Armijo backtracking inside the open feasible set.
///
/// Converges when ||grad|| <= max(tol, 64 eps * sum_n w_n |x_n|/(1+alpha.x_n)),
/// the second term being the rounding floor of the gradient sum itself.
/// Throws SolverError after max_iterations.
PhiSolution solve_phi(PhiProblem const &problem, std::optional<Vector> const &warm_start = std::nullopt,
                      SolverOptions const &options = {});

/// Empirical (g_N) and risk-neutral (g*_N) distributions over the distinct
/// outcome values.
struct RiskNeutralDist
{
  std::vector<Vector> values;
  std::vector<double> multiplicity;
  /// g_N({x}) = multiplicity / (N + n0).
  std::vector<double> empirical;
  /// g*_N({x}) = g_N({x}) / (1 + alpha* . x).
  std::vector<double> weights;

  double total_weight() const;
  Vector mean() const;
};

RiskNeutralDist risk_neutral(PhiProblem const &problem, PhiSolution const &solution);

struct KlCheck
{
  /// D(g_N || g*_N).
  double kl{0.0};
  /// |Phi(alpha*) - (N + n0) D|.
  double check{0.0};
};

KlCheck kl_capital_identity(PhiProblem const &problem, PhiSolution const &solution,
                            RiskNeutralDist const &dist);

/// Sequence y_n = (u_1 u_1^t + ... + u_{n-1} u_{n-1}^t)^{-1} u_n for n = d+1..N,
/// maintained with Sherman-Morrison updates.
struct AppendixSequence
{
  /// ||y_n|| for n = d+1..N (entry 0 is n = d+1).
  std::vector<double> norms;
  /// u_n^t y_n, equal to ||(sum u u^t)^{-1/2} u_n||^2.
  std::vector<double> quadratic;
};

AppendixSequence appendix_yn(std::span<Vector const> outcomes);

}  // namespace gtpbet
