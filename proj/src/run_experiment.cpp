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
#include "gtpbet/run_experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gtpbet/baselines.hpp"
#include "gtpbet/csv.hpp"
#include "gtpbet/errors.hpp"
#include "gtpbet/experiments.hpp"
#include "gtpbet/generators.hpp"
#include "gtpbet/ingest.hpp"
#include "gtpbet/model_select.hpp"
#include "gtpbet/sos.hpp"

namespace gtpbet {
namespace fs = std::filesystem;
using json   = nlohmann::ordered_json;

namespace {

std::string trim(std::string const &s)
{
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  auto const e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

json number(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

struct Bundle
{
  fs::path              dir;
  std::vector<fs::path> files;

  std::ofstream open(std::string const &name)
  {
    auto          path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
      throw Error("cannot write " + path.string());
    }
    files.push_back(path);
    return out;
  }
};

std::vector<Outcome> biased_signs(int d, std::size_t N, Vector const &mean, std::uint64_t seed)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Outcome>                   out;
  out.reserve(N);
  for (std::size_t n = 0; n < N; ++n)
  {
    Outcome x(d);
    for (int j = 0; j < d; ++j)
    {
      x[j] = u(rng) < 0.5 * (1.0 + mean[j]) ? 1.0 : -1.0;
    }
    out.push_back(std::move(x));
  }
  return out;
}

json sos_bundle(Bundle &bundle, GameConfig const &game, std::span<Outcome const> path)
{
  auto const run    = sos_run(game, path);
  auto const bounds = deficiency_bounds(run, game);
  {
    auto out = bundle.open("ledger.csv");
    write_ledger_csv(out, run.ledger);
  }
  {
    auto out = bundle.open("series.csv");
    write_long_series(out, run.ledger);
  }
  auto summary                 = json::parse(sos_summary_json(run, bounds));
  summary["domain"]            = game.domain.describe();
  summary["training"]          = to_string(game.training.scheme);
  summary["lemma2_violations"] = bounds.lemma2_violations;
  return summary;
}

GameConfig synthetic_game(ExperimentConfig const &config, int d)
{
  GameConfig game{Domain::symmetric_box(d, 1.0), {}, "sos", config.seed()};
  auto const scheme = training_scheme_from_string(config.get("training", "axis_2d"));
  game.training     = make_training(game.domain, config.get_double("epsilon0", 0.1), scheme);
  return game;
}

json scenario_sos_csv(ExperimentConfig const &config, Bundle &bundle)
{
  auto const prices = read_price_table_file(config.get_path("input").string());
  auto const tr     = transform_returns(prices, config.get_double("c", 0.17), config.get_double("epsilon0", 0.1));
  GameConfig game{tr.domain, tr.training, "sos", config.seed()};
  auto       summary = sos_bundle(bundle, game, tr.outcomes);
  summary["F"]       = tr.transform.F;
  summary["rho"]     = std::vector<double>(tr.transform.rho.data(), tr.transform.rho.data() + tr.transform.rho.size());
  return summary;
}

json scenario_sos_synthetic(ExperimentConfig const &config, Bundle &bundle)
{
  int const   d    = static_cast<int>(config.get_int("d", 1));
  auto const  N    = static_cast<std::size_t>(config.get_int("N", 1000));
  Vector      mu   = parse_vector(config.get_list("mu"), d, "mu");
  auto const  path = biased_signs(d, N, mu, config.seed());
  auto        game = synthetic_game(config, d);
  return sos_bundle(bundle, game, path);
}

json scenario_imaginary(ExperimentConfig const &config, Bundle &bundle)
{
  auto const           N = static_cast<std::size_t>(config.get_int("N", 2000));
  std::vector<Outcome> path;
  path.reserve(N);
  for (std::size_t n = 1; n <= N; ++n)
  {
    path.push_back(Outcome::Constant(1, 1.0 / static_cast<double>(n + 1)));
  }
  GameConfig game{Domain::symmetric_box(1, 1.0), {}, "sos", config.seed()};
  game.training = make_training(game.domain, config.get_double("epsilon0", 0.1), TrainingScheme::corners_2tod);
  return sos_bundle(bundle, game, path);
}

json scenario_universal_compare(ExperimentConfig const &config, Bundle &bundle)
{
  std::vector<Outcome> path;
  GameConfig           game{Domain::symmetric_box(1, 1.0), {}, "sos", config.seed()};
  if (config.has("input"))
  {
    auto const prices = read_price_table_file(config.get_path("input").string());
    if (prices.dim() != 1)
    {
      throw InvalidArgument("universal_compare needs a single price column");
    }
    auto tr       = transform_returns(prices, config.get_double("c", 0.17), config.get_double("epsilon0", 0.1));
    path          = std::move(tr.outcomes);
    game.domain   = tr.domain;
    game.training = tr.training;
  }
  else
  {
    auto const N = static_cast<std::size_t>(config.get_int("N", 1000));
    path         = biased_signs(1, N, parse_vector(config.get_list("mu"), 1, "mu"), config.seed());
    game.training =
      make_training(game.domain, config.get_double("epsilon0", 0.1), TrainingScheme::corners_2tod);
  }
  auto const run = sos_run(game, path);

  UniversalPortfolioConfig up;
  up.accounts         = static_cast<std::size_t>(config.get_int("M", 100));
  up.domain           = game.domain;
  up.include_training = false;
  auto const u0       = universal_portfolio(up, path);
  up.include_training = true;
  auto const u1       = universal_portfolio(up, path);

  {
    auto out = bundle.open("compare.csv");
    csv::write_row(out, {"n", "K1", "KU0", "KU1", "logK1", "logKU0", "logKU1"});
    for (std::size_t i = 0; i < path.size(); ++i)
    {
      double const lk = run.ledger.records()[i].logK_true;
      csv::write_row(out, {std::to_string(i + 1), csv::format(std::exp(lk)), csv::format(u0.capital[i]),
                           csv::format(u1.capital[i]), csv::format(lk), csv::format(u0.log_capital[i]),
                           csv::format(u1.log_capital[i])});
    }
  }
  {
    auto out = bundle.open("series.csv");
    csv::write_row(out, {"series", "n", "value"});
    auto emit = [&](char const *name, std::function<double(std::size_t)> const &f) {
      for (std::size_t i = 0; i < path.size(); ++i)
      {
        csv::write_row(out, {name, std::to_string(i + 1), csv::format(f(i))});
      }
    };
    emit("logK1", [&](std::size_t i) { return run.ledger.records()[i].logK_true; });
    emit("logKU0", [&](std::size_t i) { return u0.log_capital[i]; });
    emit("logKU1", [&](std::size_t i) { return u1.log_capital[i]; });
  }
  json summary;
  summary["N"]      = path.size();
  summary["M"]      = up.accounts;
  summary["logK1"]  = number(run.ledger.log_capital());
  summary["logKU0"] = number(u0.log_capital.empty() ? 0.0 : u0.log_capital.back());
  summary["logKU1"] = number(u1.log_capital.empty() ? 0.0 : u1.log_capital.back());
  return summary;
}

json scenario_holder(ExperimentConfig const &config, Bundle &bundle)
{
  double const T         = config.get_double("T", 1.0);
  double const grid_step = config.get_double("grid_step", 1e-6);
  auto const   generator = config.get("generator", "fbm");
  std::string  warning;
  PricePath    path = [&] {
    if (generator == "fbm")
    {
      return gen_fbm(config.get_double("H", 0.5), config.get_double("scale", 1.0), T, grid_step, config.seed(),
                     &warning);
    }
    if (generator == "gbm")
    {
      int const d = static_cast<int>(config.get_int("d", 1));
      return gen_gbm(parse_vector(config.get_list("mu"), d, "mu"),
                     parse_matrix(config.get_list("sigma"), d, "sigma"), T, grid_step, config.seed());
    }
    if (generator == "csv")
    {
      std::ifstream in(config.get_path("input"));
      if (!in)
      {
        throw InvalidArgument("cannot open " + config.get_path("input").string());
      }
      return read_price_path_csv(in);
    }
    throw InvalidArgument("unknown generator " + generator);
  }();

  auto deltas = config.get_list("deltas");
  if (deltas.empty())
  {
    deltas = {0.02, 0.01, 0.005};
  }
  bool const fine = config.get_bool("allow_fine_deltas", false);
  for (double delta : deltas)
  {
    if (!(delta > 0.0))
    {
      throw InvalidArgument("deltas must be positive");
    }
    if (delta < 0.0025 && !fine)
    {
      throw InvalidArgument("deltas below 0.0025 need allow_fine_deltas = true");
    }
  }
  HolderOptions options;
  options.game.epsilon0   = config.get_double("epsilon0", 0.1);
  options.activity_factor = config.get_double("activity_factor", 10.0);
  auto const table        = holder_experiment(path, deltas, options);

  {
    auto out = bundle.open("holder.csv");
    csv::write_row(out, {"delta", "N", "trV", "logK_T", "h_hat", "delta_alpha"});
    for (auto const &cell : table.cells)
    {
      csv::write_row(out, {csv::format(cell.delta), std::to_string(cell.N), csv::format(cell.tr_V),
                           csv::format(cell.logK_T), csv::format(cell.h_hat), csv::format(cell.delta_alpha)});
    }
  }
  json summary;
  summary["generator"] = generator;
  summary["K"]         = path.size() - 1;
  json cells           = json::array();
  for (auto const &cell : table.cells)
  {
    cells.push_back({{"delta", cell.delta},
                     {"N", cell.N},
                     {"trV", number(cell.tr_V)},
                     {"logK_T", number(cell.logK_T)},
                     {"h_hat", number(cell.h_hat)},
                     {"delta_alpha", number(cell.delta_alpha)}});
  }
  summary["cells"] = cells;
  auto warnings    = table.warnings;
  if (!warning.empty())
  {
    warnings.push_back(warning);
  }
  summary["warnings"] = warnings;
  return summary;
}

json scenario_girsanov(ExperimentConfig const &config, Bundle &bundle)
{
  int const    d     = static_cast<int>(config.get_int("d", 1));
  Vector const mu    = parse_vector(config.get_list("mu"), d, "mu");
  auto         slist = config.get_list("sigma");
  if (slist.empty())
  {
    slist = {0.3};
  }
  Matrix const    sigma = parse_matrix(slist, d, "sigma");
  GirsanovOptions options;
  options.T           = config.get_double("T", 200.0);
  options.delta       = config.get_double("delta", 0.0);
  options.delta_scale = config.get_double("delta_scale", 0.02);
  options.grid_step   = config.get_double("grid_step", 0.0);
  options.epsilon0    = config.get_double("epsilon0", 0.99);
  auto const seeds    = static_cast<std::size_t>(std::max<long long>(1, config.get_int("seeds", 1)));

  auto   out  = bundle.open("girsanov.csv");
  csv::write_row(out, {"seed", "N", "delta", "logK", "logK_over_T"});
  double mean = 0.0;
  GirsanovResult r;
  for (std::size_t k = 0; k < seeds; ++k)
  {
    options.seed = config.seed() + k;
    r            = girsanov_rate_experiment(mu, sigma, options);
    mean += r.logK_over_T / static_cast<double>(seeds);
    csv::write_row(out, {std::to_string(options.seed), std::to_string(r.N), csv::format(r.delta),
                         csv::format(r.logK), csv::format(r.logK_over_T)});
  }
  json summary;
  summary["T"]           = options.T;
  summary["delta"]       = r.delta;
  summary["grid_step"]   = r.grid_step;
  summary["epsilon0"]    = options.epsilon0;
  summary["seeds"]       = seeds;
  summary["logK_over_T"] = number(mean);
  summary["target"]      = number(r.target);
  return summary;
}

json scenario_model_select(ExperimentConfig const &config, Bundle &bundle)
{
  std::vector<std::vector<double>> items;
  ModelSelectConfig                ms;
  ms.epsilon0 = config.get_double("epsilon0", 0.1);
  if (config.has("input"))
  {
    auto const prices = read_price_table_file(config.get_path("input").string());
    auto const tr     = transform_returns(prices, config.get_double("c", 0.17), ms.epsilon0);
    items.assign(static_cast<std::size_t>(prices.dim()), {});
    for (auto const &x : tr.outcomes)
    {
      for (int j = 0; j < prices.dim(); ++j)
      {
        items[static_cast<std::size_t>(j)].push_back(x[j]);
      }
    }
    ms.domain = tr.domain;
  }
  else
  {
    int const  d    = static_cast<int>(config.get_int("d_max", 5));
    auto const N    = static_cast<std::size_t>(config.get_int("N", 1000));
    auto const path = biased_signs(d, N, parse_vector(config.get_list("mu"), d, "mu"), config.seed());
    items.assign(static_cast<std::size_t>(d), {});
    for (auto const &x : path)
    {
      for (int j = 0; j < d; ++j)
      {
        items[static_cast<std::size_t>(j)].push_back(x[j]);
      }
    }
    ms.domain = Domain::symmetric_box(d, 1.0);
  }
  std::vector<int> order;
  for (double v : config.get_list("order"))
  {
    order.push_back(static_cast<int>(std::llround(v)) - 1);
  }
  if (order.empty())
  {
    for (std::size_t j = 0; j < items.size(); ++j)
    {
      order.push_back(static_cast<int>(j));
    }
  }
  auto const report = select_dimension(items, order, ms);
  {
    auto out = bundle.open("model_select.csv");
    write_model_select_csv(out, report);
  }
  json summary;
  summary["selected"] = report.selected;
  summary["common_c"] = report.common_c;
  json rows           = json::array();
  for (auto const &row : report.rows)
  {
    rows.push_back({{"d", row.d},
                    {"kl_term", number(row.kl_term)},
                    {"penalty", number(row.penalty)},
                    {"criterion", number(row.criterion)},
                    {"logK_true", number(row.logK_true)}});
  }
  summary["rows"]     = rows;
  summary["warnings"] = report.warnings;
  return summary;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream &in, fs::path base_dir)
{
  ExperimentConfig config;
  config.base_dir_ = std::move(base_dir);
  std::string line;
  int         lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    auto const eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(fs::path const &file)
{
  std::ifstream in(file);
  if (!in)
  {
    throw InvalidArgument("cannot open config " + file.string());
  }
  return parse(in, file.parent_path());
}

void ExperimentConfig::set(std::string const &key, std::string value)
{
  if (key.empty())
  {
    throw InvalidArgument("empty config key");
  }
  values_[key] = std::move(value);
}

bool ExperimentConfig::has(std::string const &key) const
{
  return values_.count(key) != 0;
}

std::string ExperimentConfig::get(std::string const &key) const
{
  auto it = values_.find(key);
  if (it == values_.end())
  {
    throw InvalidArgument("missing config key '" + key + "'");
  }
  return it->second;
}

std::string ExperimentConfig::get(std::string const &key, std::string const &fallback) const
{
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(std::string const &key, double fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
  {
    return fallback;
  }
  try
  {
    return csv::parse_double(it->second);
  }
  catch (std::exception const &)
  {
    throw InvalidArgument("config key '" + key + "' is not a number: " + it->second);
  }
}

long long ExperimentConfig::get_int(std::string const &key, long long fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
  {
    return fallback;
  }
  std::size_t used = 0;
  long long   v    = 0;
  try
  {
    v = std::stoll(it->second, &used);
  }
  catch (std::exception const &)
  {
    used = 0;
  }
  if (used != it->second.size() || used == 0)
  {
    throw InvalidArgument("config key '" + key + "' is not an integer: " + it->second);
  }
  return v;
}

bool ExperimentConfig::get_bool(std::string const &key, bool fallback) const
{
  auto it = values_.find(key);
  if (it == values_.end())
  {
    return fallback;
  }
  auto const &v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on")
  {
    return true;
  }
  if (v == "0" || v == "false" || v == "no" || v == "off")
  {
    return false;
  }
  throw InvalidArgument("config key '" + key + "' is not a boolean: " + v);
}

std::vector<double> ExperimentConfig::get_list(std::string const &key) const
{
  std::vector<double> out;
  auto                it = values_.find(key);
  if (it == values_.end())
  {
    return out;
  }
  std::stringstream ss(it->second);
  std::string       item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (item.empty())
    {
      continue;
    }
    try
    {
      out.push_back(csv::parse_double(item));
    }
    catch (std::exception const &)
    {
      throw InvalidArgument("config key '" + key + "' has a non-numeric entry: " + item);
    }
  }
  return out;
}

fs::path ExperimentConfig::get_path(std::string const &key) const
{
  fs::path p = get(key);
  if (p.is_relative() && !base_dir_.empty())
  {
    p = base_dir_ / p;
  }
  return p;
}

std::uint64_t ExperimentConfig::seed() const
{
  if (char const *env = std::getenv("GTPBET_SEED"); env != nullptr && *env != '\0')
  {
    try
    {
      return std::stoull(env);
    }
    catch (std::exception const &)
    {
      throw InvalidArgument(std::string("GTPBET_SEED is not an unsigned integer: ") + env);
    }
  }
  return static_cast<std::uint64_t>(get_int("seed", 0));
}

Vector parse_vector(std::vector<double> const &values, int d, std::string const &key)
{
  if (values.empty())
  {
    return Vector::Zero(d);
  }
  if (values.size() == 1)
  {
    return Vector::Constant(d, values[0]);
  }
  if (static_cast<int>(values.size()) != d)
  {
    throw InvalidArgument("config key '" + key + "' needs 1 or " + std::to_string(d) + " values");
  }
  return Eigen::Map<Vector const>(values.data(), d);
}

Matrix parse_matrix(std::vector<double> const &values, int d, std::string const &key)
{
  auto const n = static_cast<std::size_t>(d);
  if (values.size() == 1)
  {
    return Matrix::Identity(d, d) * values[0];
  }
  if (values.size() == n)
  {
    return Eigen::Map<Vector const>(values.data(), d).asDiagonal();
  }
  if (values.size() == n * n)
  {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
    {
      for (int j = 0; j < d; ++j)
      {
        m(i, j) = values[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
      }
    }
    return m;
  }
  throw InvalidArgument("config key '" + key + "' needs 1, d or d*d values");
}

void write_long_series(std::ostream &out, CapitalLedger const &ledger)
{
  csv::write_row(out, {"series", "n", "value"});
  using Field = double RoundRecord::*;
  std::pair<char const *, Field> const fields[] = {
    {"LK1", &RoundRecord::logK_true}, {"LK0", &RoundRecord::logK_hindsight}, {"LKapprox", &RoundRecord::logK_approx},
    {"LD1", &RoundRecord::LD1},       {"LD2", &RoundRecord::LD2},            {"LD3", &RoundRecord::LD3},
    {"GR", &RoundRecord::GR},         {"QR", &RoundRecord::QR},              {"DR", &RoundRecord::DR},
  };
  for (auto const &[name, field] : fields)
  {
    for (auto const &rec : ledger.records())
    {
      double const v = rec.*field;
      if (std::isfinite(v))
      {
        csv::write_row(out, {name, std::to_string(rec.n), csv::format(v)});
      }
    }
  }
}

ExperimentOutput run_experiment(ExperimentConfig const &config)
{
  using Scenario = json (*)(ExperimentConfig const &, Bundle &);
  static std::map<std::string, Scenario> const scenarios = {
    {"sos_csv", scenario_sos_csv},     {"sos_synthetic", scenario_sos_synthetic},
    {"imaginary", scenario_imaginary}, {"universal_compare", scenario_universal_compare},
    {"holder", scenario_holder},       {"girsanov", scenario_girsanov},
    {"model_select", scenario_model_select},
  };
  auto const name = config.get("scenario");
  auto const it   = scenarios.find(name);
  if (it == scenarios.end())
  {
    throw InvalidArgument("unknown scenario '" + name + "'");
  }

  ExperimentOutput result;
  result.scenario  = name;
  result.directory = config.has("output") ? config.get_path("output") : fs::path("gtpbet_out");
  fs::create_directories(result.directory);
  Bundle bundle{result.directory, {}};

  json summary;
  try
  {
    summary = it->second(config, bundle);
  }
  catch (std::exception const &e)
  {
    throw Error("scenario " + name + ": " + e.what());
  }
  json full;
  full["scenario"] = name;
  full["seed"]     = config.seed();
  full.update(summary);
  result.summary_json = full.dump(2);
  {
    auto out = bundle.open("summary.json");
    out << result.summary_json << '\n';
  }
  result.files = bundle.files;
  return result;
}

}  // namespace gtpbet
