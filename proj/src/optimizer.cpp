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
#include "gtpbet/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "gtpbet/errors.hpp"

namespace gtpbet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t bits_of(double v)
{
  if (v == 0.0)
  {
    v = 0.0;  // fold -0.0 into +0.0
  }
  return std::bit_cast<std::uint64_t>(v);
}

struct Evaluation
{
  double value{0.0};
  Vector gradient;
  Matrix information;
  /// sum w |x| / (1 + alpha.x), the magnitude of the gradient terms.
  double gradient_scale{0.0};
  /// sum w |log(1 + alpha.x)|, the magnitude of the value terms.
  double value_scale{0.0};
  bool   feasible{true};
};

Evaluation evaluate(PhiProblem const &problem, Vector const &alpha, bool with_derivatives)
{
  auto const &set = problem.outcomes;
  int const   d   = set.dim();
  Evaluation  e;
  if (with_derivatives)
  {
    e.gradient    = Vector::Zero(d);
    e.information = Matrix::Zero(d, d);
  }
  for (std::size_t k = 0; k < set.distinct(); ++k)
  {
    auto const   x = set.atom(k);
    double const w = set.weight(k);
    double const a = alpha.dot(x);
    double const f = 1.0 + a;
    if (!(f > 0.0))
    {
      e.feasible = false;
      e.value    = -std::numeric_limits<double>::infinity();
      return e;
    }
    double const l = std::log1p(a);
    e.value += w * l;
    e.value_scale += w * std::abs(l);
    if (with_derivatives)
    {
      double const inv = 1.0 / f;
      e.gradient.noalias() += (w * inv) * x;
      e.information.selfadjointView<Eigen::Lower>().rankUpdate(x, w * inv * inv);
      e.gradient_scale += w * inv * x.cwiseAbs().sum();
    }
  }
  if (with_derivatives)
  {
    e.information = e.information.selfadjointView<Eigen::Lower>();
  }
  return e;
}

double max_feasible_step(PhiProblem const &problem, Vector const &alpha, Vector const &step,
                         double boundary_fraction)
{
  auto const &set  = problem.outcomes;
  double      tmax = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < set.distinct(); ++k)
  {
    auto const   x  = set.atom(k);
    double const dp = step.dot(x);
    if (dp < 0.0)
    {
      double const f = 1.0 + alpha.dot(x);
      tmax           = std::min(tmax, (1.0 - boundary_fraction) * f / -dp);
    }
  }
  return tmax;
}

}  // namespace

std::size_t OutcomeMultiset::KeyHash::operator()(std::vector<std::uint64_t> const &key) const noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto v : key)
  {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

OutcomeMultiset::OutcomeMultiset(int dim)
  : dim_(dim)
{
  if (dim <= 0)
  {
    throw InvalidArgument("outcome dimension must be positive");
  }
}

std::size_t OutcomeMultiset::add(Vector const &x, double count)
{
  if (x.size() != dim_)
  {
    throw InvalidArgument("outcome dimension mismatch");
  }
  std::vector<std::uint64_t> key(static_cast<std::size_t>(dim_));
  for (int j = 0; j < dim_; ++j)
  {
    key[static_cast<std::size_t>(j)] = bits_of(x[j]);
  }
  total_ += count;
  auto [it, inserted] = index_.try_emplace(std::move(key), weights_.size());
  if (inserted)
  {
    for (int j = 0; j < dim_; ++j)
    {
      values_.push_back(x[j] == 0.0 ? 0.0 : x[j]);
    }
    weights_.push_back(count);
  }
  else
  {
    weights_[it->second] += count;
  }
  return it->second;
}

PhiProblem PhiProblem::from_sequence(std::span<Outcome const> training, std::span<Outcome const> moves)
{
  int dim = !training.empty() ? static_cast<int>(training.front().size())
            : !moves.empty()  ? static_cast<int>(moves.front().size())
                              : 0;
  PhiProblem p(dim);
  for (auto const &x : training)
  {
    p.outcomes.add(x);
  }
  p.training_count = training.size();
  for (auto const &x : moves)
  {
    p.outcomes.add(x);
  }
  return p;
}

double phi_value(PhiProblem const &problem, Vector const &alpha)
{
  return evaluate(problem, alpha, false).value;
}

Vector phi_gradient(PhiProblem const &problem, Vector const &alpha)
{
  auto e = evaluate(problem, alpha, true);
  if (!e.feasible)
  {
    throw InvalidArgument("gradient requested outside the feasible set");
  }
  return e.gradient;
}

Matrix phi_information(PhiProblem const &problem, Vector const &alpha)
{
  auto e = evaluate(problem, alpha, true);
  if (!e.feasible)
  {
    throw InvalidArgument("information requested outside the feasible set");
  }
  return e.information;
}

PhiSolution solve_phi(PhiProblem const &problem, std::optional<Vector> const &warm_start,
                      SolverOptions const &options)
{
  if (!(options.tol > 0.0))
  {
    throw InvalidArgument("solver tolerance must be positive");
  }
  int const d = problem.dim();
  if (problem.outcomes.distinct() == 0)
  {
    throw InvalidArgument("empty problem");
  }

  Vector alpha = Vector::Zero(d);
  if (warm_start && warm_start->size() == d)
  {
    alpha = *warm_start;
  }
  Evaluation e = evaluate(problem, alpha, true);
  if (!e.feasible)
  {
    alpha = Vector::Zero(d);
    e     = evaluate(problem, alpha, true);
  }

  for (int iter = 0; iter <= options.max_iterations; ++iter)
  {
    double const gnorm = e.gradient.norm();
    double const floor = std::max(options.tol, 64.0 * kEps * e.gradient_scale);
    if (gnorm <= floor)
    {
      return {alpha, e.value, gnorm, e.information, iter};
    }
    if (iter == options.max_iterations)
    {
      break;
    }

    Eigen::LDLT<Matrix> ldlt(e.information);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    {
      throw SolverError("information matrix is not positive definite; outcomes do not span R^d",
                        alpha, gnorm);
    }
    Vector const step  = ldlt.solve(e.gradient);
    double const slope = e.gradient.dot(step);

    double t = std::min(1.0, max_feasible_step(problem, alpha, step, options.boundary_fraction));

    // Near the optimum the predicted gain drops below the resolution of Phi,
    // so sufficient increase cannot be tested on values. Take the Newton step
    // and keep it only if the gradient shrinks.
    double const resolution = 1024.0 * kEps * (e.value_scale + 1.0);
    if (slope <= resolution)
    {
      Vector const trial = alpha + t * step;
      Evaluation   next  = evaluate(problem, trial, true);
      if (!next.feasible || !(next.gradient.norm() < gnorm))
      {
        return {alpha, e.value, gnorm, e.information, iter};
      }
      alpha = trial;
      e     = std::move(next);
      continue;
    }

    bool accepted = false;
    while (t > 1e-30)
    {
      Vector const trial = alpha + t * step;
      double const f     = evaluate(problem, trial, false).value;
      if (f >= e.value + options.armijo_slope * t * slope)
      {
        alpha    = trial;
        accepted = true;
        break;
      }
      t *= options.shrink;
    }
    if (!accepted)
    {
      // The predicted gain is below the rounding resolution of Phi itself.
      if (slope <= 128.0 * kEps * (e.value_scale + 1.0))
      {
        return {alpha, e.value, gnorm, e.information, iter};
      }
      throw SolverError("line search failed", alpha, gnorm);
    }
    e = evaluate(problem, alpha, true);
  }
  throw SolverError("Newton iteration cap exceeded", alpha, e.gradient.norm());
}

double RiskNeutralDist::total_weight() const
{
  double s = 0.0;
  for (double w : weights)
  {
    s += w;
  }
  return s;
}

Vector RiskNeutralDist::mean() const
{
  Vector m = Vector::Zero(values.empty() ? 0 : values.front().size());
  for (std::size_t k = 0; k < values.size(); ++k)
  {
    m += weights[k] * values[k];
  }
  return m;
}

RiskNeutralDist risk_neutral(PhiProblem const &problem, PhiSolution const &solution)
{
  auto const     &set   = problem.outcomes;
  double const    total = set.total_weight();
  RiskNeutralDist dist;
  dist.values.reserve(set.distinct());
  for (std::size_t k = 0; k < set.distinct(); ++k)
  {
    Vector const x = set.atom(k);
    double const g = set.weight(k) / total;
    dist.values.push_back(x);
    dist.multiplicity.push_back(set.weight(k));
    dist.empirical.push_back(g);
    dist.weights.push_back(g / (1.0 + solution.alpha_star.dot(x)));
  }
  return dist;
}

KlCheck kl_capital_identity(PhiProblem const &problem, PhiSolution const &solution,
                            RiskNeutralDist const &dist)
{
  KlCheck r;
  for (std::size_t k = 0; k < dist.values.size(); ++k)
  {
    double const g = dist.empirical[k];
    if (g > 0.0)
    {
      r.kl += g * (std::log(g) - std::log(dist.weights[k]));
    }
  }
  r.check = std::abs(solution.phi_value - problem.count() * r.kl);
  return r;
}

AppendixSequence appendix_yn(std::span<Vector const> outcomes)
{
  if (outcomes.empty())
  {
    throw InvalidArgument("appendix_yn needs outcomes");
  }
  auto const d = static_cast<std::size_t>(outcomes.front().size());
  if (outcomes.size() < d)
  {
    throw InvalidArgument("appendix_yn needs at least d outcomes");
  }
  for (auto const &u : outcomes)
  {
    if (static_cast<std::size_t>(u.size()) != d || u.norm() > 1.0 + 1e-12)
    {
      throw InvalidArgument("appendix_yn requires ||u_n|| <= 1 and a common dimension");
    }
  }

  auto const dim = static_cast<Eigen::Index>(d);
  Matrix     sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < d; ++i)
  {
    sum.selfadjointView<Eigen::Lower>().rankUpdate(outcomes[i]);
  }
  sum = Matrix(sum.selfadjointView<Eigen::Lower>());
  Eigen::FullPivLU<Matrix> lu(sum);
  if (lu.rank() < dim)
  {
    throw InvalidArgument("first d outcomes are linearly dependent");
  }
  Matrix inverse = lu.inverse();

  AppendixSequence seq;
  seq.norms.reserve(outcomes.size() - d);
  seq.quadratic.reserve(outcomes.size() - d);
  for (std::size_t n = d; n < outcomes.size(); ++n)
  {
    auto const  &u = outcomes[n];
    Vector const y = inverse * u;
    double const q = u.dot(y);
    seq.norms.push_back(y.norm());
    seq.quadratic.push_back(q);

    sum.noalias() += u * u.transpose();
    if ((n - d + 1) % 256 == 0)
    {
      inverse = sum.llt().solve(Matrix::Identity(dim, dim));
    }
    else
    {
      inverse.noalias() -= (y * y.transpose()) / (1.0 + q);
    }
  }
  return seq;
}

}  // namespace gtpbet
