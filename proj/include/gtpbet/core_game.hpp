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

// Bounded forecasting game: outcome domains, training data and capital
// accounting. Capital is kept in log space (nats) throughout.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gtpbet {

using Vector  = Eigen::VectorXd;
using Matrix  = Eigen::MatrixXd;
using Outcome = Eigen::VectorXd;

inline constexpr double kMembershipSlack = 1e-12;

/// Log of the one-round capital factor, log(1 + alpha . x).
inline double log_growth(Vector const &alpha, Vector const &x)
{
  return std::log1p(alpha.dot(x));
}

/// Compact region D of Reality's moves. The convex hull of D contains the
/// origin in its interior.
class Domain
{
public:
  struct Box
  {
    Vector lo;
    Vector hi;
  };
  /// Surface of the Euclidean sphere of the given radius.
  struct Sphere
  {
    double radius;
  };
  /// Only ||x|| <= bound is known; treated as the closed ball.
  struct ExplicitBound
  {
    double bound;
  };
  using Kind = std::variant<Box, Sphere, ExplicitBound>;

  static Domain box(Vector lo, Vector hi);
  static Domain symmetric_box(int dim, double half_width);
  static Domain sphere(int dim, double radius);
  static Domain explicit_bound(int dim, double bound);

  int dim() const noexcept
  {
    return dim_;
  }
  Kind const &kind() const noexcept
  {
    return kind_;
  }
  bool is_box() const noexcept
  {
    return std::holds_alternative<Box>(kind_);
  }

  /// max_{x in D} ||x||.
  double max_norm() const;

  /// Membership with kMembershipSlack absolute slack on the boundary.
  bool contains(Vector const &x) const;

  /// Draws a point of D (uniform on box/ball/sphere surface).
  Vector sample(std::mt19937_64 &rng) const;

  /// sup (1 + alpha . x) over prudent alpha and x in D.
  double max_one_step_growth() const;

  std::string describe() const;

private:
  Domain(int dim, Kind kind)
    : dim_(dim)
    , kind_(std::move(kind))
  {}

  int  dim_;
  Kind kind_;
};

enum class TrainingScheme
{
  axis_2d,
  corners_2tod,
};

std::string to_string(TrainingScheme scheme);
TrainingScheme training_scheme_from_string(std::string const &name);

/// Synthetic prior outcomes x_{-n0+1} ... x_0.
struct TrainingSet
{
  /// Requested interiority margin.
  double epsilon0{0.1};
  /// Margin actually guaranteed for the domain the set was built for. Equals
  /// epsilon0 for the axis scheme and 0 for box corners.
  double certified_epsilon0{0.1};
  TrainingScheme       scheme{TrainingScheme::axis_2d};
  std::vector<Outcome> points;

  int dim() const
  {
    return points.empty() ? 0 : static_cast<int>(points.front().size());
  }
  std::size_t size() const noexcept
  {
    return points.size();
  }
};

/// Builds training data for the domain.
///
/// axis_2d places (0,...,+-c,...,0) with c = max_norm * sqrt(d) / (1 - eps0)
/// so that 1 + alpha . x >= eps0 on D whenever alpha is prudent on the
/// training set. corners_2tod returns the 2^d vertices of a box domain.
TrainingSet make_training(Domain const &domain, double epsilon0, TrainingScheme scheme);

/// Axis training with an explicit half-width c. The certified margin is
/// computed against `domain`.
TrainingSet axis_training(Domain const &domain, double c, double epsilon0);

/// Rank of the stacked training matrix.
int training_rank(TrainingSet const &training);

/// sup over alpha prudent on the training set of (1 + alpha . x_n), maximised
/// over the training points. Closed form for both schemes.
double training_max_growth(TrainingSet const &training, Domain const &domain);

struct GameConfig
{
  Domain        domain;
  TrainingSet   training;
  std::string   strategy{"sos"};
  std::uint64_t seed{0};
};

/// One round of the capital ledger. Diagnostic fields are NaN until filled
/// in by a strategy that computes them.
struct RoundRecord
{
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  std::size_t n{0};
  Vector      alpha_used;
  Outcome     x;
  double      logK_true{0.0};
  double      logK_hindsight{nan};
  double      logK_approx{nan};
  double      LD1{nan};
  double      LD2{nan};
  double      LD3{nan};
  double      GR{nan};
  double      QR{nan};
  double      DR{nan};
};

class CapitalLedger
{
public:
  CapitalLedger() = default;

  /// Log capital after the last recorded round (0 when empty).
  double log_capital() const noexcept
  {
    return log_capital_;
  }
  std::size_t rounds() const noexcept
  {
    return rounds_;
  }

  /// Applies one round; throws CollateralViolation when 1 + alpha.x <= 0.
  /// Returns the appended record, or nullptr when the round is not stored.
  RoundRecord *step(Vector const &alpha, Outcome const &x, bool store = true);

  std::vector<RoundRecord> const &records() const noexcept
  {
    return records_;
  }
  std::vector<RoundRecord> &records() noexcept
  {
    return records_;
  }

  /// exp(logK_true); may be +inf for long winning runs.
  double capital() const
  {
    return std::exp(log_capital_);
  }

private:
  std::vector<RoundRecord> records_;
  double                   log_capital_{0.0};
  std::size_t              rounds_{0};
};

CapitalLedger step_capital(CapitalLedger ledger, Vector const &alpha, Outcome const &x);

/// CSV with columns n, logK_true, logK_hindsight, logK_approx, LD1, LD2, LD3,
/// GR, QR, DR.
void write_ledger_csv(std::ostream &out, CapitalLedger const &ledger);

}  // namespace gtpbet
