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
#include <algorithm>
#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "gtpbet/errors.hpp"
#include "gtpbet/sos.hpp"
#include "test_util.hpp"

using namespace gtpbet;
using test::scalar;

namespace {

GameConfig box_game(int d, double epsilon0 = 0.1)
{
  auto const domain = Domain::symmetric_box(d, 1.0);
  return GameConfig{domain, make_training(domain, epsilon0, TrainingScheme::axis_2d)};
}

}  // namespace

TEST_CASE("zero path keeps capital at one and the bet at zero")
{
  auto const config = box_game(2);
  std::vector<Outcome> path(50, Outcome::Zero(2));
  auto const run = sos_run(config, path);
  CHECK(run.ledger.log_capital() == 0.0);
  CHECK(run.final_state.alpha_prev_star.norm() <= 1e-14);
  for (auto const &rec : run.ledger.records())
  {
    CHECK(rec.alpha_used.norm() <= 1e-14);
  }
}

TEST_CASE("first bet is the training optimum and is zero for symmetric training")
{
  auto const config = box_game(3);
  auto const path   = test::sample_path(config.domain, 10, 3);
  auto const run    = sos_run(config, path);
  CHECK(run.alpha0.norm() <= 1e-14);
  CHECK(run.phi00 == doctest::Approx(0.0));
  CHECK(run.ledger.records().front().alpha_used.norm() <= 1e-14);
}

TEST_CASE("bet equals the hindsight optimum of the previous round")
{
  auto const config = box_game(2);
  auto const path   = test::sample_path(config.domain, 40, 5);
  auto const run    = sos_run(config, path);
  for (std::size_t n : {5u, 17u, 39u})
  {
    std::vector<Outcome> prefix(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(n));
    auto const           sol = solve_phi(PhiProblem::from_sequence(config.training.points, prefix));
    CHECK((run.ledger.records()[n].alpha_used - sol.alpha_star).norm() <= 1e-8);
  }
}

TEST_CASE("capital decomposition and per round bounds")
{
  for (int d = 1; d <= 3; ++d)
  {
    auto const config = box_game(d);
    auto const path   = test::sample_path(config.domain, 600, 40 + static_cast<std::uint64_t>(d));
    SosOptions options;
    options.check_every = 16;
    auto const run      = sos_run(config, path, options);
    REQUIRE(run.diagnostics.size() == path.size());
    double sum = 0.0;
    for (auto const &diag : run.diagnostics)
    {
      sum += diag.delta_phi;
      CHECK(diag.delta_phi >= -1e-12);
      CHECK(diag.delta_phi <= diag.delta_phi_upper + 1e-10);
      CHECK(diag.decomposition_residual <= 1e-8 * std::max(1.0, diag.sum_delta_phi));
      if (!std::isnan(diag.det_recursion_residual))
      {
        CHECK(diag.det_recursion_residual <= 1e-10);
      }
      if (!std::isnan(diag.eq28b_residual))
      {
        CHECK(diag.eq28b_residual <= 1e-6);
      }
    }
    auto const &last = run.ledger.records().back();
    // log K = Phi(alpha*_N) - sum dPhi - Phi_00
    CHECK(std::abs(last.logK_true - (last.logK_hindsight - sum - run.phi00)) <= 1e-8 * std::max(1.0, sum));
    CHECK(last.LD1 == doctest::Approx(sum).epsilon(1e-8));
  }
}

TEST_CASE("alpha* equals V*^{-1} s at the final round")
{
  auto const config = box_game(2);
  auto const path   = test::sign_path(2, 2000, 0.9, 0.1, 8);
  auto const run    = sos_run(config, path);
  auto const &sol   = run.final_solution;
  auto const prob   = PhiProblem::from_sequence(config.training.points, path);
  Matrix     Vstar  = Matrix::Zero(2, 2);
  Vector     s      = Vector::Zero(2);
  for (auto const *set : {&config.training.points, &path})
  {
    for (auto const &x : *set)
    {
      Vstar += x * x.transpose() / (1.0 + sol.alpha_star.dot(x));
      s += x;
    }
  }
  CHECK((sol.alpha_star - Vstar.ldlt().solve(s)).norm() <= 1e-8);
  (void)prob;
}

TEST_CASE("step sizes shrink")
{
  auto const config = box_game(1);
  auto const path   = test::sample_path(config.domain, 4000, 11);
  auto const run    = sos_run(config, path);
  double     early  = 0.0;
  double     late   = 0.0;
  for (std::size_t i = 0; i < 200; ++i)
  {
    early += run.diagnostics[i + 10].alpha_step;
    late += run.diagnostics[path.size() - 200 + i].alpha_step;
  }
  CHECK(late < 0.1 * early);
}

TEST_CASE("state sums and traces")
{
  auto const config = box_game(2);
  auto const path   = test::sample_path(config.domain, 300, 2);
  auto const run    = sos_run(config, path);
  Vector     s      = Vector::Zero(2);
  Matrix     V      = Matrix::Zero(2, 2);
  for (auto const &x : path)
  {
    s += x;
    V += x * x.transpose();
  }
  CHECK((run.final_state.s - s).norm() <= 1e-10);
  CHECK((run.final_state.V - V).norm() <= 1e-10);
  CHECK(run.diagnostics.back().tr_V == doctest::Approx(V.trace()));
}

TEST_CASE("record_every thins the ledger but keeps the last round")
{
  auto const config = box_game(1);
  auto const path   = test::sample_path(config.domain, 101, 7);
  SosOptions options;
  options.record_every = 10;
  auto const thin      = sos_run(config, path, options);
  auto const full      = sos_run(config, path);
  CHECK(thin.ledger.rounds() == 101);
  CHECK(thin.ledger.records().size() < 20);
  CHECK(thin.ledger.records().back().n == 101);
  CHECK(thin.ledger.log_capital() == doctest::Approx(full.ledger.log_capital()).epsilon(1e-12));
}

TEST_CASE("collateral violation outside the domain")
{
  auto const config = box_game(1);
  std::vector<Outcome> path{scalar(0.5), scalar(2.0)};
  CHECK_THROWS_AS(sos_run(config, path), DomainError);
}

TEST_CASE("SLLN ratios")
{
  SUBCASE("constant half")
  {
    std::vector<Outcome> path(100, scalar(0.5));
    auto const           r = slln_ratio(path);
    CHECK(r.back() == doctest::Approx(50.0 / std::sqrt(25.0 * std::log(25.0))).epsilon(1e-12));
    CHECK(r.back() == doctest::Approx(5.57).epsilon(1e-3));
  }
  SUBCASE("Rademacher stays bounded")
  {
    auto const r = slln_ratio(test::sign_path(1, 100000, 1.0, 0.0, 21));
    CHECK(r.back() < 3.0);
  }
  SUBCASE("drift grows")
  {
    auto const r = slln_ratio(test::sign_path(1, 100000, 1.0, 0.2, 21));
    CHECK(r.back() > 10.0);
  }
  SUBCASE("quadratic form on the sphere")
  {
    auto const domain = Domain::sphere(2, 1.0);
    auto const r      = slln2_ratio(test::sample_path(domain, 20000, 4));
    REQUIRE(r.back().has_value());
    CHECK(*r.back() < 1.5);
    CHECK_FALSE(slln2_ratio(std::vector<Outcome>{Outcome::Unit(2, 0)}).back().has_value());
  }
}

TEST_CASE("deficiency bounds hold")
{
  for (int d = 1; d <= 3; ++d)
  {
    auto const config = box_game(d);
    auto const path   = test::sample_path(config.domain, 1000, 60 + static_cast<std::uint64_t>(d));
    auto const run    = sos_run(config, path);
    auto const bounds = deficiency_bounds(run, config);
    CHECK(bounds.certified);
    CHECK(bounds.C1_0 == doctest::Approx(2.0));
    CHECK(bounds.C2 > 0.0);
    CHECK(bounds.lemma1_violations == 0);
    CHECK(bounds.lemma2_violations == 0);
    for (auto const &round : bounds.rounds)
    {
      CHECK(round.sum_delta_phi <= round.lemma1_bound + 1e-9);
    }
  }
}

TEST_CASE("corner training is not certified")
{
  auto const domain = Domain::symmetric_box(2, 1.0);
  GameConfig const config{domain, make_training(domain, 0.1, TrainingScheme::corners_2tod)};
  auto const run  = sos_run(config, test::sample_path(config.domain, 50, 1));
  auto const b    = deficiency_bounds(run, config);
  CHECK_FALSE(b.certified);
}

TEST_CASE("ledger diagnostics")
{
  auto const config = box_game(1);
  auto const path   = test::sign_path(1, 3000, 1.0, 0.2, 5);
  auto const run    = sos_run(config, path);
  auto const &last  = run.ledger.records().back();
  // biased coin: the hindsight log capital grows linearly and the Laplace form tracks it
  CHECK(last.logK_hindsight > last.logK_true);
  CHECK(std::abs(last.logK_approx - last.logK_true) < 0.1 * std::abs(last.logK_true));
  CHECK(last.GR == doctest::Approx(last.logK_hindsight / (3000.0 + 2.0)));
  CHECK(last.LD3 == doctest::Approx(1.5 * std::log(3000.0)));
  CHECK(last.QR > 0.0);
  CHECK(last.DR > 0.0);
}

TEST_CASE("summary json")
{
  auto const config = box_game(1);
  auto const path   = test::sample_path(config.domain, 100, 3);
  auto const run    = sos_run(config, path);
  auto const j      = nlohmann::json::parse(sos_summary_json(run, deficiency_bounds(run, config)));
  for (char const *key : {"N", "logK_true", "logK_hindsight", "logK_approx", "C1", "C2", "C3", "slln_ratio", "slln2_ratio"})
  {
    CHECK(j.contains(key));
  }
  CHECK(j["N"] == 100);
  CHECK(j["logK_true"].get<double>() == doctest::Approx(run.ledger.log_capital()));
}

TEST_CASE("information criterion matches a direct product of determinant ratios")
{
  auto const config = box_game(1);
  auto const path   = test::sample_path(config.domain, 200, 23);
  auto const run    = sos_run(config, path);
  auto info = [&](double a, std::size_t n) {
    double s = 0.0;
    for (auto const &x : config.training.points)
    {
      s += x[0] * x[0] / ((1.0 + a * x[0]) * (1.0 + a * x[0]));
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      s += path[i][0] * path[i][0] / ((1.0 + a * path[i][0]) * (1.0 + a * path[i][0]));
    }
    return s;
  };
  double               log_I = 0.0;
  std::vector<Outcome> prefix;
  for (std::size_t n = 1; n <= path.size(); ++n)
  {
    prefix.push_back(path[n - 1]);
    double const a = solve_phi(PhiProblem::from_sequence(config.training.points, prefix)).alpha_star[0];
    log_I += std::log(info(a, n) / info(a, n - 1));
  }
  CHECK(run.ledger.records().back().LD2 == doctest::Approx(0.5 * log_I).epsilon(1e-10));
}
