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
#include "gtpbet/core_game.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "gtpbet/csv.hpp"
#include "gtpbet/errors.hpp"

namespace gtpbet {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(int dim)
{
  if (dim <= 0)
  {
    throw InvalidArgument("domain dimension must be positive");
  }
}

}  // namespace

Domain Domain::box(Vector lo, Vector hi)
{
  if (lo.size() != hi.size())
  {
    throw InvalidArgument("box bounds have different dimensions");
  }
  require_dim(static_cast<int>(lo.size()));
  for (Eigen::Index j = 0; j < lo.size(); ++j)
  {
    if (!(lo[j] < 0.0 && 0.0 < hi[j]))
    {
      throw InvalidArgument("box must satisfy lo < 0 < hi in every coordinate");
    }
  }
  auto dim = static_cast<int>(lo.size());
  return Domain(dim, Box{std::move(lo), std::move(hi)});
}

Domain Domain::symmetric_box(int dim, double half_width)
{
  require_dim(dim);
  return box(Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width));
}

Domain Domain::sphere(int dim, double radius)
{
  require_dim(dim);
  if (!(radius > 0.0))
  {
    throw InvalidArgument("sphere radius must be positive");
  }
  return Domain(dim, Sphere{radius});
}

Domain Domain::explicit_bound(int dim, double bound)
{
  require_dim(dim);
  if (!(bound > 0.0))
  {
    throw InvalidArgument("norm bound must be positive");
  }
  return Domain(dim, ExplicitBound{bound});
}

double Domain::max_norm() const
{
  return std::visit(overloaded{[](Box const &b) {
                                 return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).norm();
                               },
                               [](Sphere const &s) { return s.radius; },
                               [](ExplicitBound const &e) { return e.bound; }},
                    kind_);
}

bool Domain::contains(Vector const &x) const
{
  if (x.size() != dim_)
  {
    return false;
  }
  return std::visit(
      overloaded{[&](Box const &b) {
                   return ((x - b.lo).array() >= -kMembershipSlack).all() &&
                          ((b.hi - x).array() >= -kMembershipSlack).all();
                 },
                 [&](Sphere const &s) { return std::abs(x.norm() - s.radius) <= kMembershipSlack; },
                 [&](ExplicitBound const &e) { return x.norm() <= e.bound + kMembershipSlack; }},
      kind_);
}

Vector Domain::sample(std::mt19937_64 &rng) const
{
  std::normal_distribution<double>       normal;
  std::uniform_real_distribution<double> unif;
  auto                                   direction = [&] {
    Vector v(dim_);
    do
    {
      for (int j = 0; j < dim_; ++j)
      {
        v[j] = normal(rng);
      }
    } while (v.norm() == 0.0);
    return Vector(v / v.norm());
  };
  return std::visit(overloaded{[&](Box const &b) {
                                 Vector x(dim_);
                                 for (int j = 0; j < dim_; ++j)
                                 {
                                   x[j] = b.lo[j] + (b.hi[j] - b.lo[j]) * unif(rng);
                                 }
                                 return x;
                               },
                               [&](Sphere const &s) { return Vector(s.radius * direction()); },
                               [&](ExplicitBound const &e) {
                                 double r = e.bound * std::pow(unif(rng), 1.0 / dim_);
                                 return Vector(r * direction());
                               }},
                    kind_);
}

double Domain::max_one_step_growth() const
{
  // For a box the prudent set is {sum_j p_j(alpha_j) <= 1} and the objective
  // is separable, so the supremum concentrates on the best single ratio.
  return std::visit(overloaded{[](Box const &b) {
                                 double best = 0.0;
                                 for (Eigen::Index j = 0; j < b.lo.size(); ++j)
                                 {
                                   double lo = -b.lo[j];
                                   double hi = b.hi[j];
                                   best      = std::max({best, hi / lo, lo / hi});
                                 }
                                 return 1.0 + best;
                               },
                               [](Sphere const &) { return 2.0; },
                               [](ExplicitBound const &) { return 2.0; }},
                    kind_);
}

std::string Domain::describe() const
{
  std::ostringstream os;
  std::visit(overloaded{[&](Box const &b) {
                          os << "box[";
                          for (Eigen::Index j = 0; j < b.lo.size(); ++j)
                          {
                            os << (j ? "; " : "") << b.lo[j] << ',' << b.hi[j];
                          }
                          os << ']';
                        },
                        [&](Sphere const &s) { os << "sphere(d=" << dim_ << ", r=" << s.radius << ')'; },
                        [&](ExplicitBound const &e) {
                          os << "ball(d=" << dim_ << ", r=" << e.bound << ')';
                        }},
             kind_);
  return os.str();
}

std::string to_string(TrainingScheme scheme)
{
  switch (scheme)
  {
  case TrainingScheme::axis_2d:
    return "axis_2d";
  case TrainingScheme::corners_2tod:
    return "corners_2tod";
  }
  return "unknown";
}

TrainingScheme training_scheme_from_string(std::string const &name)
{
  if (name == "axis_2d" || name == "axis")
  {
    return TrainingScheme::axis_2d;
  }
  if (name == "corners_2tod" || name == "corners")
  {
    return TrainingScheme::corners_2tod;
  }
  throw InvalidArgument("unknown training scheme: " + name);
}

TrainingSet axis_training(Domain const &domain, double c, double epsilon0)
{
  if (!(epsilon0 > 0.0 && epsilon0 < 1.0))
  {
    throw InvalidArgument("epsilon0 must lie in (0, 1)");
  }
  int const d = domain.dim();
  if (!(c > 0.0))
  {
    throw InvalidArgument("axis training half-width must be positive");
  }
  TrainingSet t;
  t.epsilon0 = epsilon0;
  t.scheme   = TrainingScheme::axis_2d;
  // |alpha_i| <= 1/c gives ||alpha|| <= sqrt(d)/c, hence
  // 1 + alpha.x >= 1 - sqrt(d) * max_norm / c on D.
  t.certified_epsilon0 = 1.0 - std::sqrt(static_cast<double>(d)) * domain.max_norm() / c;
  t.points.reserve(2 * static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
  {
    Vector plus = Vector::Zero(d);
    plus[i]     = c;
    t.points.push_back(plus);
    t.points.push_back(-plus);
  }
  return t;
}

TrainingSet make_training(Domain const &domain, double epsilon0, TrainingScheme scheme)
{
  if (!(epsilon0 > 0.0 && epsilon0 < 1.0))
  {
    throw InvalidArgument("epsilon0 must lie in (0, 1)");
  }
  int const d = domain.dim();
  if (scheme == TrainingScheme::axis_2d)
  {
    double c = domain.max_norm() * std::sqrt(static_cast<double>(d)) / (1.0 - epsilon0);
    auto   t = axis_training(domain, c, epsilon0);
    t.certified_epsilon0 = epsilon0;
    return t;
  }

  if (!domain.is_box())
  {
    throw InvalidArgument("corners training requires a box domain");
  }
  if (d > 20)
  {
    throw InvalidArgument("corners training rejected for d > 20 (2^d points)");
  }
  auto const &b = std::get<Domain::Box>(domain.kind());
  TrainingSet t;
  t.epsilon0 = epsilon0;
  // Training points coincide with extreme points of D, so only the collateral
  // duty itself (margin 0) is certified.
  t.certified_epsilon0 = 0.0;
  t.scheme             = TrainingScheme::corners_2tod;
  std::size_t count    = std::size_t{1} << d;
  t.points.reserve(count);
  // Bit j set selects the lower bound; index 0 is the all-upper corner.
  for (std::size_t mask = 0; mask < count; ++mask)
  {
    Vector v(d);
    for (int j = 0; j < d; ++j)
    {
      v[j] = (mask >> j) & 1u ? b.lo[j] : b.hi[j];
    }
    t.points.push_back(v);
  }
  return t;
}

int training_rank(TrainingSet const &training)
{
  if (training.points.empty())
  {
    return 0;
  }
  Matrix stacked(static_cast<Eigen::Index>(training.points.size()), training.dim());
  for (std::size_t i = 0; i < training.points.size(); ++i)
  {
    stacked.row(static_cast<Eigen::Index>(i)) = training.points[i].transpose();
  }
  return static_cast<int>(Eigen::FullPivLU<Matrix>(stacked).rank());
}

double training_max_growth(TrainingSet const &training, Domain const &domain)
{
  if (training.scheme == TrainingScheme::axis_2d)
  {
    // P = {|alpha_i| <= 1/c}; sup alpha.(+-c e_i) = 1.
    return 2.0;
  }
  // Corners: co(training) is the box spanned by the points, so the prudent
  // set equals that of the box and the supremum is its one-step growth.
  int const d  = training.dim();
  Vector    lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector    hi = -lo;
  for (auto const &p : training.points)
  {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  (void)domain;
  return Domain::box(lo, hi).max_one_step_growth();
}

RoundRecord *CapitalLedger::step(Vector const &alpha, Outcome const &x, bool store)
{
  if (alpha.size() != x.size())
  {
    throw InvalidArgument("bet and outcome dimensions differ");
  }
  double factor = 1.0 + alpha.dot(x);
  ++rounds_;
  if (!(factor > 0.0))
  {
    --rounds_;
    throw CollateralViolation(rounds_ + 1, factor);
  }
  log_capital_ += std::log1p(alpha.dot(x));
  if (!store)
  {
    return nullptr;
  }
  RoundRecord r;
  r.n          = rounds_;
  r.alpha_used = alpha;
  r.x          = x;
  r.logK_true  = log_capital_;
  records_.push_back(std::move(r));
  return &records_.back();
}

CapitalLedger step_capital(CapitalLedger ledger, Vector const &alpha, Outcome const &x)
{
  ledger.step(alpha, x);
  return ledger;
}

void write_ledger_csv(std::ostream &out, CapitalLedger const &ledger)
{
  csv::write_row(out, {"n", "logK_true", "logK_hindsight", "logK_approx", "LD1", "LD2", "LD3", "GR",
                       "QR", "DR"});
  for (auto const &r : ledger.records())
  {
    csv::write_row(out, {std::to_string(r.n), csv::format(r.logK_true), csv::format(r.logK_hindsight),
                         csv::format(r.logK_approx), csv::format(r.LD1), csv::format(r.LD2),
                         csv::format(r.LD3), csv::format(r.GR), csv::format(r.QR), csv::format(r.DR)});
  }
}

}  // namespace gtpbet
