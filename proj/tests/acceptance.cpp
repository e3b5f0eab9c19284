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
// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gtpbet/baselines.hpp"
#include "gtpbet/core_game.hpp"
#include "gtpbet/embedding.hpp"
#include "gtpbet/experiments.hpp"
#include "gtpbet/generators.hpp"
#include "gtpbet/model_select.hpp"
#include "gtpbet/optimizer.hpp"
#include "gtpbet/sos.hpp"

using namespace gtpbet;

namespace {

// Tolerances and limits.
constexpr double grid_resolution      = 1e-5;
constexpr double grid_tolerance       = 2e-5;
constexpr double optimizer_time_limit = 1.0;
constexpr double kl_relative_tol      = 1e-9;
constexpr double eq28b_tol            = 1e-6;
constexpr double approx_rel_tol       = 0.1;
constexpr double slln_limit           = 1.5;
constexpr double slln_time_limit      = 10.0;
constexpr double kelly_target         = 0.05556;
constexpr double girsanov_band        = 0.30;
constexpr double girsanov_time_limit  = 60.0;
constexpr double holder_time_limit    = 120.0;
constexpr double appendix_ratio       = 0.25;
constexpr double monotone_tol         = 1e-8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict
{
  bool        pass{false};
  std::string detail;
};

int failures = 0;

void report(int id, char const *name, std::function<Verdict()> const &body)
{
  auto const start = Clock::now();
  Verdict    v;
  try
  {
    v = body();
  }
  catch (std::exception const &e)
  {
    v = {false, std::string("exception: ") + e.what()};
  }
  double const t = seconds_since(start);
  std::printf("%s %2d %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), t);
  std::fflush(stdout);
  if (!v.pass)
  {
    ++failures;
  }
}

std::string fmt(char const *format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<Outcome> uniform_path(Domain const &domain, std::size_t N, std::uint64_t seed)
{
  std::mt19937_64      rng(seed);
  std::vector<Outcome> path;
  path.reserve(N);
  for (std::size_t n = 0; n < N; ++n)
  {
    path.push_back(domain.sample(rng));
  }
  return path;
}

/// Outcomes in [-1, 1]^d with mean `drift` per coordinate.
std::vector<Outcome> drifted_path(int d, std::size_t N, double drift, std::uint64_t seed)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Outcome>                   path;
  path.reserve(N);
  for (std::size_t n = 0; n < N; ++n)
  {
    Outcome x(d);
    for (int j = 0; j < d; ++j)
    {
      x[j] = u(rng) < 0.5 * (1.0 + drift) ? u(rng) : -u(rng);
    }
    path.push_back(std::move(x));
  }
  return path;
}

GameConfig box_game(int d)
{
  auto const domain = Domain::symmetric_box(d, 1.0);
  return GameConfig{domain, make_training(domain, 0.1, TrainingScheme::axis_2d)};
}

double grid_argmax(std::vector<Outcome> const &training, std::vector<Outcome> const &moves)
{
  double best   = 0.0;
  double best_f = -std::numeric_limits<double>::infinity();
  for (double a = -1.0 + grid_resolution; a < 1.0; a += grid_resolution)
  {
    double f = 0.0;
    for (auto const *set : {&training, &moves})
    {
      for (auto const &x : *set)
      {
        f += std::log1p(a * x[0]);
      }
    }
    if (f > best_f)
    {
      best_f = f;
      best   = a;
    }
  }
  return best;
}

double kl_relative_error(PhiProblem const &prob)
{
  auto const sol  = solve_phi(prob);
  auto const dist = risk_neutral(prob, sol);
  auto const kl   = kl_capital_identity(prob, sol, dist);
  double const rhs = prob.count() * kl.kl;
  return std::abs(sol.phi_value - rhs) / std::max(std::abs(sol.phi_value), 1e-300);
}

// Runs reused by criteria 4 and 5.
struct SuiteRun
{
  GameConfig config;
  SosRun     run;
};
std::vector<SuiteRun> suite_runs;

}  // namespace

int main()
{
  report(1, "optimizer matches grid search", [] {
    std::vector<Outcome> const training{Outcome::Constant(1, -1.0), Outcome::Constant(1, 1.0)};
    double                     worst  = 0.0;
    double                     solver = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
      auto const moves = uniform_path(Domain::symmetric_box(1, 1.0), 50, seed);
      auto const prob  = PhiProblem::from_sequence(training, moves);
      auto const start = Clock::now();
      auto const sol   = solve_phi(prob);
      solver += seconds_since(start);
      worst = std::max(worst, std::abs(sol.alpha_star[0] - grid_argmax(training, moves)));
    }
    return Verdict{worst <= grid_tolerance && solver < optimizer_time_limit,
                   fmt("max |alpha* - grid| = %.2e (tol %.0e), solver time %.4f s", worst, grid_tolerance, solver)};
  });

  report(2, "KL identity", [] {
    double worst    = 0.0;
    int    problems = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
      std::vector<Outcome> const training{Outcome::Constant(1, -1.0), Outcome::Constant(1, 1.0)};
      worst = std::max(worst, kl_relative_error(PhiProblem::from_sequence(
                                training, uniform_path(Domain::symmetric_box(1, 1.0), 50, seed))));
      ++problems;
    }
    for (int d = 1; d <= 3; ++d)
    {
      for (std::uint64_t seed = 1; seed <= 5; ++seed)
      {
        auto const config = box_game(d);
        auto const path   = drifted_path(d, 2000, 0.2, 100 * seed + static_cast<std::uint64_t>(d));
        worst = std::max(worst, kl_relative_error(PhiProblem::from_sequence(config.training.points, path)));
        ++problems;
      }
    }
    return Verdict{worst <= kl_relative_tol,
                   fmt("%d problems, max relative error %.2e (tol %.0e)", problems, worst, kl_relative_tol)};
  });

  report(3, "alpha* = V*^{-1} s at checked rounds", [] {
    auto const config = box_game(2);
    auto const path   = drifted_path(2, 5000, 0.1, 7);
    SosOptions options;
    options.check_every = 50;
    auto        run     = sos_run(config, path, options);
    double      worst   = 0.0;
    std::size_t checked = 0;
    for (auto const &diag : run.diagnostics)
    {
      if (!std::isnan(diag.eq28b_residual))
      {
        worst = std::max(worst, diag.eq28b_residual);
        ++checked;
      }
    }
    suite_runs.push_back({config, std::move(run)});
    return Verdict{checked >= 100 && worst <= eq28b_tol,
                   fmt("%zu checked rounds, max residual %.2e (tol %.0e)", checked, worst, eq28b_tol)};
  });

  // Criterion 5 runs first so criterion 4 can include its runs.
  Verdict approx;
  {
    auto const start = Clock::now();
    double      worst = 0.0;
    int         runs  = 0;
    std::string over;
    try
    {
      for (int r = 0; r < 10; ++r)
      {
        int const  d      = 1 + r % 3;
        auto const config = box_game(d);
        double const drift = 0.05 * static_cast<double>(r % 4);
        auto const path   = drifted_path(d, 2000, drift, 500 + static_cast<std::uint64_t>(r));
        auto       run    = sos_run(config, path);
        auto const &last  = run.ledger.records().back();
        double const err = std::abs(last.logK_true - last.logK_approx);
        double const rel = err / std::max(1.0, std::abs(last.logK_true));
        worst            = std::max(worst, rel);
        if (rel > approx_rel_tol)
        {
          over += fmt(" run %d (d=%d, logK=%.3f, error %.3f)", r, d, last.logK_true, err);
        }
        suite_runs.push_back({config, std::move(run)});
        ++runs;
      }
      approx = {runs == 10 && worst <= approx_rel_tol,
                fmt("%d runs, max |logK - logK_approx| / max(1, |logK|) = %.4f (tol %.2f)", runs, worst,
                    approx_rel_tol)
                  + (over.empty() ? std::string() : ";" + over)};
    }
    catch (std::exception const &e)
    {
      approx = {false, std::string("exception: ") + e.what()};
    }
    double const elapsed = seconds_since(start);
    report(4, "deficiency bound at every round", [] {
      std::size_t rounds     = 0;
      std::size_t violations = 0;
      for (auto const &s : suite_runs)
      {
        auto const b = deficiency_bounds(s.run, s.config);
        if (!b.certified)
        {
          return Verdict{false, "training set is not certified"};
        }
        rounds += b.rounds.size();
        violations += b.lemma2_violations;
      }
      return Verdict{violations == 0 && rounds > 0,
                     fmt("%zu runs, %zu rounds, %zu violations", suite_runs.size(), rounds, violations)};
    });
    report(5, "approximation of log capital", [&] {
      approx.detail += fmt(" (runs took %.2f s)", elapsed);
      return approx;
    });
  }

  report(6, "SLLN rate for fair coin tossing", [] {
    auto const  start = Clock::now();
    double      worst = 0.0;
    std::size_t const N = 100000;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
      std::mt19937_64 rng(seed);
      double          s = 0.0;
      for (std::size_t n = 0; n < N; ++n)
      {
        s += (rng() >> 63) ? 1.0 : -1.0;
      }
      worst = std::max(worst, s * s / (static_cast<double>(N) * std::log(static_cast<double>(N))));
    }
    double const t = seconds_since(start);
    return Verdict{worst < slln_limit && t < slln_time_limit,
                   fmt("max s_N^2 / (N log N) = %.4f over 10 seeds (limit %.1f)", worst, slln_limit)};
  });

  report(7, "Girsanov growth rate", [] {
    auto const   start = Clock::now();
    Vector const mu    = Vector::Constant(1, 0.1);
    Matrix const sigma = Matrix::Constant(1, 1, 0.3);
    GirsanovOptions options;
    options.T        = 200.0;
    options.delta    = 0.005;
    options.epsilon0 = 0.99;
    double      sum  = 0.0;
    std::string rates;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
      options.seed = seed;
      auto const r = girsanov_rate_experiment(mu, sigma, options);
      sum += r.logK_over_T;
      rates += fmt("%s%.4f", seed == 1 ? "" : ", ", r.logK_over_T);
    }
    double const mean = sum / 5.0;
    double const t    = seconds_since(start);
    double const rel  = std::abs(mean - kelly_target) / kelly_target;
    return Verdict{rel <= girsanov_band && t < girsanov_time_limit,
                   fmt("mean logK/T = %.4f vs %.5f (rel %.2f, band %.2f); seeds: %s", mean, kelly_target, rel,
                       girsanov_band, rates.c_str())};
  });

  report(8, "Hölder exponent forcing", [] {
    auto const                start = Clock::now();
    std::vector<double> const deltas{0.02, 0.01, 0.005};
    HolderOptions             options;
    options.game.epsilon0 = 0.99;
    struct Case
    {
      double      H;
      double      scale;
      std::size_t log2K;
    };
    Case const  cases[] = {{0.3, 0.25, 25}, {0.5, 1.0, 21}, {0.7, 2.0, 20}};
    double      increase[3];
    bool        monotone[3];
    std::string detail;
    for (int c = 0; c < 3; ++c)
    {
      double const step  = 1.0 / static_cast<double>(std::size_t{1} << cases[c].log2K);
      auto const   path  = gen_fbm(cases[c].H, cases[c].scale, 1.0, step, 1);
      auto const   table = holder_experiment(path, deltas, options);
      monotone[c]        = true;
      detail += fmt("%sH=%.1f logK:", c == 0 ? "" : "; ", cases[c].H);
      for (std::size_t i = 0; i < table.cells.size(); ++i)
      {
        detail += fmt(" %.3f", table.cells[i].logK_T);
        if (i > 0 && !(table.cells[i].logK_T > table.cells[i - 1].logK_T))
        {
          monotone[c] = false;
        }
      }
      increase[c] = table.cells.back().logK_T - table.cells.front().logK_T;
    }
    double const t    = seconds_since(start);
    bool const   pass = monotone[0] && monotone[2] && increase[1] < increase[0] && increase[1] < increase[2]
                      && t < holder_time_limit;
    return Verdict{pass, detail};
  });

  report(9, "universal portfolio equals mean of constant accounts", [] {
    std::size_t checked    = 0;
    std::size_t mismatches = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
      UniversalPortfolioConfig config;
      config.accounts = 20 + 10 * seed;
      auto const path = uniform_path(config.domain, 200, seed);
      auto const up   = universal_portfolio(config, path);
      auto const grid = universal_grid(config);
      for (std::size_t n = 1; n <= path.size(); ++n)
      {
        std::span<Outcome const> prefix(path.data(), n);
        double                   total = 0.0;
        for (double a : grid)
        {
          total += std::exp(constant_strategy_capital(Vector::Constant(1, a), prefix));
        }
        double const oracle = total / static_cast<double>(grid.size());
        mismatches += (oracle != up.capital[n - 1]) ? 1 : 0;
        ++checked;
      }
    }
    return Verdict{mismatches == 0, fmt("%zu rounds compared bit for bit, %zu mismatches", checked, mismatches)};
  });

  report(10, "imaginary data regression", [] {
    auto const           domain = Domain::symmetric_box(1, 1.0);
    GameConfig const     config{domain, make_training(domain, 0.1, TrainingScheme::corners_2tod)};
    std::vector<Outcome> path;
    for (std::size_t n = 1; n <= 2000; ++n)
    {
      path.push_back(Outcome::Constant(1, 1.0 / static_cast<double>(n + 1)));
    }
    auto const run = sos_run(config, path);
    double     sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (auto const &rec : run.ledger.records())
    {
      if (rec.n < 200)
      {
        continue;
      }
      double const x = std::log(static_cast<double>(rec.n));
      sx += x;
      sy += rec.logK_true;
      sxx += x * x;
      sxy += x * rec.logK_true;
      m += 1.0;
    }
    double const slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return Verdict{slope > 0.0 && slope < 1.0, fmt("slope of logK vs log n on [200, 2000] = %.4f", slope)};
  });

  report(11, "appendix sequence shrinks", [] {
    std::string detail;
    bool        pass = true;
    for (int d = 1; d <= 3; ++d)
    {
      std::mt19937_64                        rng(1000 + static_cast<std::uint64_t>(d));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::vector<Vector>                    seq;
      while (seq.size() < 5000)
      {
        Vector v = Vector::NullaryExpr(d, [&] { return u(rng); });
        if (v.norm() <= 1.0)
        {
          seq.push_back(v);
        }
      }
      auto const y      = appendix_yn(seq);
      std::size_t const tenth = y.norms.size() / 10;
      auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
        return v[v.size() / 2];
      };
      double const first = median({y.norms.begin(), y.norms.begin() + static_cast<std::ptrdiff_t>(tenth)});
      double const last  = median({y.norms.end() - static_cast<std::ptrdiff_t>(tenth), y.norms.end()});
      double const ratio = last / first;
      pass               = pass && ratio < appendix_ratio;
      detail += fmt("%sd=%d ratio %.4f", d == 1 ? "" : ", ", d, ratio);
    }
    return Verdict{pass, detail + fmt(" (limit %.2f)", appendix_ratio)};
  });

  report(12, "model selection kl term is monotone", [] {
    std::size_t violations = 0;
    double      worst_drop = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
      std::vector<std::vector<double>> items;
      for (int j = 0; j < 5; ++j)
      {
        auto const       path = drifted_path(1, 1000, 0.05 * j, 10 * seed + static_cast<std::uint64_t>(j));
        std::vector<double> v;
        for (auto const &x : path)
        {
          v.push_back(x[0]);
        }
        items.push_back(std::move(v));
      }
      ModelSelectConfig config;
      config.domain     = Domain::symmetric_box(5, 1.0);
      auto const report = select_dimension(items, {4, 3, 2, 1, 0}, config);
      for (std::size_t i = 1; i < report.rows.size(); ++i)
      {
        double const drop = report.rows[i - 1].kl_term - report.rows[i].kl_term;
        worst_drop        = std::max(worst_drop, drop);
        violations += drop > monotone_tol ? 1 : 0;
      }
    }
    return Verdict{violations == 0, fmt("5 datasets, %zu violations, largest drop %.2e (tol %.0e)", violations,
                                        worst_drop, monotone_tol)};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
