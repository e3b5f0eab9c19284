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
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gtpbet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// An outcome fell outside the declared domain.
class DomainError : public Error
{
public:
  DomainError(std::string const &what, std::size_t round)
    : Error(what + " (round " + std::to_string(round) + ")")
    , round_(round)
  {}

  std::size_t round() const noexcept
  {
    return round_;
  }

private:
  std::size_t round_;
};

/// 1 + alpha . x <= 0 was hit, i.e. the bet would bankrupt Skeptic.
class CollateralViolation : public Error
{
public:
  CollateralViolation(std::size_t round, double factor)
    : Error("collateral duty violated at round " + std::to_string(round) +
            ": 1 + alpha.x = " + std::to_string(factor))
    , round_(round)
    , factor_(factor)
  {}

  std::size_t round() const noexcept
  {
    return round_;
  }
  double factor() const noexcept
  {
    return factor_;
  }

private:
  std::size_t round_;
  double      factor_;
};

/// Newton iteration did not reach the gradient tolerance.
class SolverError : public Error
{
public:
  SolverError(std::string const &what, Eigen::VectorXd best, double gradient_norm)
    : Error(what)
    , best_(std::move(best))
    , gradient_norm_(gradient_norm)
  {}

  Eigen::VectorXd const &best_iterate() const noexcept
  {
    return best_;
  }
  double gradient_norm() const noexcept
  {
    return gradient_norm_;
  }

private:
  Eigen::VectorXd best_;
  double          gradient_norm_;
};

/// The sampling grid of a price path is too coarse for the requested delta.
class GridTooCoarse : public Error
{
public:
  using Error::Error;
};

}  // namespace gtpbet
