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
#include "gtpbet/sos.hpp"

#include <cmath>

#include <json.hpp>

#include "gtpbet/errors.hpp"

namespace gtpbet {

namespace {

double direct_logdet(Matrix const &m)
{
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
  {
    return -std::numeric_limits<double>::infinity();
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

std::vector<Outcome> moves_of(CapitalLedger const &ledger)
{
  std::vector<Outcome> xs;
  xs.reserve(ledger.records().size());
  for (auto const &r : ledger.records())
  {
    xs.push_back(r.x);
  }
  if (xs.size() != ledger.rounds())
  {
    throw InvalidArgument("ledger does not store every round");
  }
  return xs;
}

}  // namespace

SosEngine::SosEngine(GameConfig config, SosOptions options)
  : config_(std::move(config))
  , options_(options)
  , problem_(config_.domain.dim())
{
  auto const &training = config_.training;
  int const   d        = config_.domain.dim();
  if (training.dim() != d)
  {
    throw InvalidArgument("training data dimension does not match the domain");
  }
  if (training_rank(training) < d)
  {
    throw InvalidArgument("training data do not span R^d");
  }
  if (options_.check_every == 0 || options_.record_every == 0)
  {
    throw InvalidArgument("check_every and record_every must be positive");
  }

  for (auto const &x : training.points)
  {
    problem_.outcomes.add(x);
  }
  problem_.training_count = training.size();
  solution_               = solve_phi(problem_, std::nullopt, options_.solver);
  alpha0_                 = solution_.alpha_star;
  phi00_                  = solution_.phi_value;

  state_.alpha_prev_star = alpha0_;
  state_.s0              = Vector::Zero(d);
  state_.V0              = Matrix::Zero(d, d);
  for (auto const &x : training.points)
  {
    state_.s0 += x;
    state_.V0.noalias() += x * x.transpose();
  }
  state_.V0_inverse = state_.V0.llt().solve(Matrix::Identity(d, d));
  state_.logdet_V0  = direct_logdet(state_.V0);
  state_.logdet_V00 = state_.logdet_V0;
  state_.phi_value  = phi00_;
  state_.s          = Vector::Zero(d);
  state_.V          = Matrix::Zero(d, d);
}

RoundDiagnostics const &SosEngine::step(Outcome const &x, bool force_record)
{
  auto &st = state_;
  int const   d = config_.domain.dim();
  std::size_t n = st.n + 1;

  if (x.size() != d)
  {
    throw DomainError("outcome dimension mismatch", n);
  }
  if (options_.check_domain && !config_.domain.contains(x))
  {
    throw DomainError("outcome outside " + config_.domain.describe(), n);
  }

  bool const   store = force_record || (n % options_.record_every == 0);
  Vector const bet   = st.alpha_prev_star;
  RoundRecord *rec   = ledger_.step(bet, x, store);
  double const logK  = ledger_.log_capital();

  RoundDiagnostics diag;
  diag.n = n;

  // Outcome second moments with the training data.
  bool const   checkpoint = (n % options_.check_every == 0);
  Vector const Vinv_x     = st.V0_inverse * x;
  double const a_n        = x.dot(Vinv_x);
  double const prev_direct = checkpoint ? direct_logdet(st.V0) : 0.0;
  st.logdet_V0 += std::log1p(a_n);
  st.V0.noalias() += x * x.transpose();
  st.V0_inverse.noalias() -= (Vinv_x * Vinv_x.transpose()) / (1.0 + a_n);
  st.s0 += x;
  st.s += x;
  st.V.noalias() += x * x.transpose();
  if (checkpoint)
  {
    double const now_direct     = direct_logdet(st.V0);
    double const ratio          = std::exp(now_direct - prev_direct);
    diag.det_recursion_residual = std::abs((1.0 + a_n) - ratio) / ratio;
    st.V0_inverse               = st.V0.llt().solve(Matrix::Identity(d, d));
  }

  // Hindsight optimum including round n.
  problem_.outcomes.add(x);
  try
  {
    solution_ = solve_phi(problem_, bet, options_.solver);
  }
  catch (SolverError const &e)
  {
    throw SolverError(std::string(e.what()) + " at round " + std::to_string(n), e.best_iterate(),
                      e.gradient_norm());
  }
  Vector const &opt = solution_.alpha_star;

  // One pass over the atoms for Phi_n(alpha*_{n-1}), V*_{0,n} and
  // V_{0,n}(alpha*_{n-1}, alpha*_n).
  auto const &set          = problem_.outcomes;
  double      phi_at_bet   = 0.0;
  Matrix      Vstar        = Matrix::Zero(d, d);
  Matrix      Vab          = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < set.distinct(); ++k)
  {
    auto const   xk = set.atom(k);
    double const w  = set.weight(k);
    double const fa = 1.0 + bet.dot(xk);
    double const fb = 1.0 + opt.dot(xk);
    phi_at_bet += w * std::log1p(bet.dot(xk));
    Vstar.selfadjointView<Eigen::Lower>().rankUpdate(xk, w / fb);
    Vab.selfadjointView<Eigen::Lower>().rankUpdate(xk, w / (fa * fb));
  }
  Vstar = Matrix(Vstar.selfadjointView<Eigen::Lower>());
  Vab   = Matrix(Vab.selfadjointView<Eigen::Lower>());

  double const fa_n = 1.0 + bet.dot(x);
  double const fb_n = 1.0 + opt.dot(x);
  Vab.noalias() -= (x * x.transpose()) / (fa_n * fb_n);  // drop round n
  Vector const xa   = x / fa_n;
  Vector const xb   = x / fb_n;

  diag.delta_phi = solution_.phi_value - phi_at_bet;
  st.delta_phi_sum += diag.delta_phi;
  diag.sum_delta_phi   = st.delta_phi_sum;
  diag.delta_phi_upper = std::log1p(xb.dot(Vab.ldlt().solve(xa)));

  // [I_n] increment via the rank-one downdate I_{n-1}(b) = I_n(b) - x_n(b) x_n(b)^t.
  Eigen::LLT<Matrix> info_llt(solution_.information);
  double const       q = xb.dot(info_llt.solve(xb));
  diag.log_I_increment = -std::log1p(-q);
  st.logdet_I_running += diag.log_I_increment;
  diag.log_I = st.logdet_I_running;

  Eigen::LDLT<Matrix> vstar_ldlt(Vstar);
  Vector const        vstar_s = vstar_ldlt.solve(st.s0);
  if (checkpoint)
  {
    diag.eq28b_residual = (opt - vstar_s).norm();
  }

  double training_denominator = 0.0;
  for (auto const &t : config_.training.points)
  {
    training_denominator += 1.0 / (1.0 + opt.dot(t));
  }
  diag.training_denominator = training_denominator;

  diag.logdet_V0  = st.logdet_V0;
  diag.tr_V       = st.V.trace();
  diag.tr_V0      = st.V0.trace();
  diag.alpha_step = (opt - bet).norm();
  diag.alpha_norm = opt.norm();
  diag.decomposition_residual =
      std::abs(solution_.phi_value - logK - (st.delta_phi_sum + phi00_));

  st.n               = n;
  st.alpha_prev_star = opt;
  st.phi_value       = solution_.phi_value;

  if (rec)
  {
    double const count  = problem_.count();
    double const half_I = 0.5 * st.logdet_I_running;
    rec->logK_hindsight = solution_.phi_value;
    rec->logK_approx    = solution_.phi_value - half_I;
    rec->LD1            = solution_.phi_value - logK - phi00_;
    rec->LD2            = half_I;
    rec->LD3            = 1.5 * std::log(static_cast<double>(n));
    rec->GR             = solution_.phi_value / count;
    rec->QR             = 0.5 * st.s0.dot(vstar_s) / count;
    rec->DR             = st.logdet_I_running / (2.0 * static_cast<double>(n));
    diagnostics_.push_back(diag);
  }
  last_ = diag;
  return last_;
}

SosRun sos_run(GameConfig const &config, std::span<Outcome const> path, SosOptions const &options)
{
  SosEngine engine(config, options);
  for (std::size_t i = 0; i < path.size(); ++i)
  {
    engine.step(path[i], i + 1 == path.size());
  }
  SosRun run;
  run.final_state    = engine.state();
  run.phi00          = engine.phi00();
  run.alpha0         = engine.alpha0();
  run.final_solution = engine.solution();
  run.diagnostics    = engine.take_diagnostics();
  run.ledger = engine.take_ledger();
  return run;
}

DeficiencyReport deficiency_bounds(SosRun const &run, GameConfig const &config)
{
  DeficiencyReport r;
  auto const      &training = config.training;
  int const        d        = config.domain.dim();
  r.C1_0                    = config.domain.max_one_step_growth();
  r.C1                      = std::max(r.C1_0, training_max_growth(training, config.domain));
  double const eps          = training.certified_epsilon0;
  r.certified               = eps > 0.0;
  double const inf          = std::numeric_limits<double>::infinity();

  Matrix V00 = Matrix::Zero(d, d);
  for (auto const &x : training.points)
  {
    V00.noalias() += x * x.transpose();
  }
  double const logdet_V00 = direct_logdet(V00);
  if (r.certified)
  {
    r.C2 = r.C1 * r.C1 / (eps * eps);
    r.C3 = r.C2 * (d * V00.trace() - logdet_V00);
  }
  else
  {
    r.C2 = inf;
    r.C3 = inf;
  }

  r.rounds.reserve(run.diagnostics.size());
  for (auto const &diag : run.diagnostics)
  {
    DeficiencyRound row;
    row.n             = diag.n;
    row.sum_delta_phi = diag.sum_delta_phi;
    if (r.certified)
    {
      row.lemma1_bound = r.C2 * (diag.logdet_V0 - logdet_V00);
      double lt        = diag.tr_V > 0.0 ? std::log(diag.tr_V) : 0.0;
      row.lemma2_bound = d * r.C2 * std::max(0.0, lt) + r.C3;
    }
    else
    {
      row.lemma1_bound = inf;
      row.lemma2_bound = inf;
    }
    auto slack = [](double b) { return 1e-10 * std::max(1.0, std::abs(b)); };
    if (row.sum_delta_phi > row.lemma1_bound + slack(row.lemma1_bound))
    {
      ++r.lemma1_violations;
    }
    if (row.sum_delta_phi > row.lemma2_bound + slack(row.lemma2_bound))
    {
      ++r.lemma2_violations;
    }
    r.rounds.push_back(row);
  }
  return r;
}

std::vector<double> slln_ratio(std::span<Outcome const> path)
{
  std::vector<double> out;
  if (path.empty())
  {
    return out;
  }
  out.reserve(path.size());
  Vector s  = Vector::Zero(path.front().size());
  double tr = 0.0;
  for (auto const &x : path)
  {
    s += x;
    tr += x.squaredNorm();
    double denom = tr > 0.0 ? tr * std::log(tr) : 0.0;
    out.push_back(s.norm() / std::sqrt(std::max(1.0, denom)));
  }
  return out;
}

std::vector<double> slln_ratio(CapitalLedger const &ledger)
{
  auto xs = moves_of(ledger);
  return slln_ratio(std::span<Outcome const>(xs));
}

std::vector<std::optional<double>> slln2_ratio(std::span<Outcome const> path)
{
  std::vector<std::optional<double>> out;
  if (path.empty())
  {
    return out;
  }
  out.reserve(path.size());
  auto const d = path.front().size();
  Vector     s = Vector::Zero(d);
  Matrix     V = Matrix::Zero(d, d);
  for (auto const &x : path)
  {
    s += x;
    V.noalias() += x * x.transpose();
    Eigen::LLT<Matrix> llt(V);
    if (llt.info() != Eigen::Success)
    {
      out.emplace_back();
      continue;
    }
    double const logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    if (!(logdet > 0.0) || !std::isfinite(logdet))
    {
      out.emplace_back();
      continue;
    }
    out.emplace_back(s.dot(llt.solve(s)) / logdet);
  }
  return out;
}

std::vector<std::optional<double>> slln2_ratio(CapitalLedger const &ledger)
{
  auto xs = moves_of(ledger);
  return slln2_ratio(std::span<Outcome const>(xs));
}

std::string sos_summary_json(SosRun const &run, DeficiencyReport const &bounds)
{
  nlohmann::json j;
  j["N"]                 = run.ledger.rounds();
  j["logK_true"]         = run.ledger.log_capital();
  auto finite_or_null    = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  j["logK_hindsight"] = finite_or_null(run.final_solution.phi_value);
  j["logK_approx"] =
      finite_or_null(run.final_solution.phi_value - 0.5 * run.final_state.logdet_I_running);
  j["C1"]             = finite_or_null(bounds.C1);
  j["C2"]             = finite_or_null(bounds.C2);
  j["C3"]             = finite_or_null(bounds.C3);
  j["bounds_certified"] = bounds.certified;

  auto const &st = run.final_state;
  double      tr = st.V.trace();
  double      denom = tr > 0.0 ? tr * std::log(tr) : 0.0;
  j["slln_ratio"]   = st.s.norm() / std::sqrt(std::max(1.0, denom));
  Eigen::LLT<Matrix> llt(st.V);
  nlohmann::json     r2 = nullptr;
  if (st.n > 0 && llt.info() == Eigen::Success)
  {
    double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    if (logdet > 0.0)
    {
      r2 = st.s.dot(llt.solve(st.s)) / logdet;
    }
  }
  j["slln2_ratio"] = r2;
  return j.dump(2);
}

}  // namespace gtpbet
