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
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "gtpbet/errors.hpp"
#include "gtpbet/ingest.hpp"
#include "gtpbet/run_experiment.hpp"

using namespace gtpbet;
namespace fs = std::filesystem;

namespace {

PriceTable table_from(std::string const &text)
{
  std::istringstream in(text);
  return read_price_table(in);
}

std::string random_prices(int d, int T, std::uint64_t seed)
{
  std::mt19937_64                  rng(seed);
  std::normal_distribution<double> z(0.0, 0.01);
  std::ostringstream               out;
  out << "date";
  for (int j = 0; j < d; ++j)
  {
    out << ",item" << j;
  }
  out << '\n';
  std::vector<double> p(static_cast<std::size_t>(d), 100.0);
  for (int t = 0; t < T; ++t)
  {
    out << t;
    for (auto &v : p)
    {
      v *= std::exp(z(rng));
      out << ',' << v;
    }
    out << '\n';
  }
  return out.str();
}

fs::path scratch(std::string const &name)
{
  auto dir = fs::temp_directory_path() / ("gtpbet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(fs::path const &file)
{
  std::ifstream      in(file);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentOutput run_with(std::string const &text, fs::path const &dir)
{
  std::istringstream in(text);
  auto               config = ExperimentConfig::parse(in, dir);
  return run_experiment(config);
}

}  // namespace

TEST_CASE("hand computed transform")
{
  auto const tr = transform_returns(table_from("day,a\n1,100\n2,110\n3,99\n4,104.5\n"), 0.2);
  REQUIRE(tr.returns.size() == 3);
  CHECK(tr.transform.s_max[0] == doctest::Approx(0.1));
  CHECK(tr.transform.s_min[0] == doctest::Approx(-0.1));
  CHECK(tr.z[0][0] == 1.0);
  CHECK(tr.z[1][0] == -1.0);
  CHECK(tr.z[2][0] == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(tr.transform.F == 0);
  CHECK(tr.transform.rho[0] == 0.0);
  CHECK(tr.outcomes.size() == 3);
}

TEST_CASE("extremes map to plus and minus one exactly")
{
  auto const tr = transform_returns(table_from(random_prices(3, 400, 7)), 0.17);
  for (int j = 0; j < 3; ++j)
  {
    double lo = 2.0;
    double hi = -2.0;
    for (auto const &z : tr.z)
    {
      lo = std::min(lo, z[j]);
      hi = std::max(hi, z[j]);
    }
    CHECK(lo == -1.0);
    CHECK(hi == 1.0);
  }
}

TEST_CASE("forecast fraction and centering")
{
  auto const table = table_from(random_prices(2, 300, 3));
  auto const a     = transform_returns(table, 0.17);
  auto const b     = transform_returns(table, 0.25);
  CHECK(a.transform.F == 51);
  CHECK(b.transform.F == 75);
  CHECK((a.transform.rho - b.transform.rho).norm() > 0.0);
  // rho = sum of the first F normalised returns over 2^d + F
  Vector sum = Vector::Zero(2);
  for (std::size_t t = 0; t < a.transform.F; ++t)
  {
    sum += a.z[t];
  }
  CHECK((a.transform.rho - sum / (4.0 + 51.0)).norm() <= 1e-14);
  CHECK(a.outcomes.size() == a.z.size() - a.transform.F);
  CHECK((a.outcomes.front() - (a.z[a.transform.F] - a.transform.rho)).norm() == 0.0);
}

TEST_CASE("inverse transform and domain membership")
{
  auto const tr = transform_returns(table_from(random_prices(2, 250, 5)), 0.2);
  for (std::size_t t = 0; t < tr.returns.size(); ++t)
  {
    CHECK((tr.transform.denormalize(tr.z[t]) - tr.returns[t]).norm() <= 1e-12);
  }
  for (auto const &x : tr.outcomes)
  {
    CHECK(tr.domain.contains(x));
  }
  CHECK(tr.training.points.size() == 4);
  for (auto const &x : tr.training.points)
  {
    CHECK(tr.domain.contains(x));
    CHECK(std::abs(std::abs((x + tr.transform.rho)[0]) - 1.0) <= 1e-15);
  }
}

TEST_CASE("transform errors")
{
  CHECK_THROWS_AS(transform_returns(table_from("d,a\n1,100\n2,101\n"), 0.2), InvalidArgument);
  CHECK_THROWS_AS(transform_returns(table_from("d,a\n1,100\n2,100\n3,100\n4,100\n"), 0.2), InvalidArgument);
  CHECK_THROWS_AS(transform_returns(table_from(random_prices(1, 10, 1)), 0.95), InvalidArgument);
  CHECK_THROWS_AS(transform_returns(table_from(random_prices(1, 10, 1)), -0.1), InvalidArgument);
  CHECK_THROWS_AS(table_from("d,a\n1,100\n2,-1\n"), InvalidArgument);
  CHECK_THROWS_AS(table_from("d,a\n1,100,3\n"), InvalidArgument);
  CHECK_THROWS_AS(table_from("d,a\n1,abc\n"), InvalidArgument);
}

TEST_CASE("config parsing")
{
  std::istringstream in("# comment\nscenario = imaginary\nN = 50 # trailing\nmu = 0.1, -0.2\nflag = true\n"
                        "output = out\n");
  auto const config = ExperimentConfig::parse(in, "/base");
  CHECK(config.get("scenario") == "imaginary");
  CHECK(config.get_int("N", 0) == 50);
  CHECK(config.get_list("mu") == std::vector<double>{0.1, -0.2});
  CHECK(config.get_bool("flag", false));
  CHECK(config.get_double("missing", 2.5) == 2.5);
  CHECK(config.get_path("output") == fs::path("/base/out"));
  CHECK_THROWS_AS(config.get("missing"), InvalidArgument);

  Matrix const diag = parse_matrix({0.1, 0.2}, 2, "sigma");
  CHECK(diag(1, 1) == 0.2);
  CHECK(diag(0, 1) == 0.0);
  Matrix const full = parse_matrix({1, 2, 3, 4}, 2, "sigma");
  CHECK(full(0, 1) == 2.0);
  CHECK(parse_vector({0.3}, 3, "mu") == Vector::Constant(3, 0.3));
  CHECK_THROWS_AS(parse_vector({0.3, 0.1}, 3, "mu"), InvalidArgument);
  std::istringstream bad("no equals sign\n");
  CHECK_THROWS_AS(ExperimentConfig::parse(bad), InvalidArgument);
}

TEST_CASE("seed override from the environment")
{
  std::istringstream in("seed = 4\n");
  auto const         config = ExperimentConfig::parse(in);
  ::unsetenv("GTPBET_SEED");
  CHECK(config.seed() == 4);
  ::setenv("GTPBET_SEED", "17", 1);
  CHECK(config.seed() == 17);
  ::unsetenv("GTPBET_SEED");
}

TEST_CASE("imaginary scenario")
{
  auto const dir = scratch("imaginary");
  auto const out = run_with("scenario = imaginary\nN = 500\noutput = out\n", dir);
  CHECK(out.directory == dir / "out");
  CHECK(fs::exists(dir / "out" / "ledger.csv"));
  CHECK(fs::exists(dir / "out" / "series.csv"));
  auto const summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary["scenario"] == "imaginary");
  CHECK(summary["N"] == 500);
  CHECK(summary["logK_true"].get<double>() > 0.0);
}

TEST_CASE("sos_csv scenario on a price file")
{
  auto const dir = scratch("sos_csv");
  {
    std::ofstream f(dir / "prices.csv");
    f << random_prices(2, 300, 9);
  }
  auto const out     = run_with("scenario = sos_csv\ninput = prices.csv\nc = 0.17\noutput = out\n", dir);
  auto const summary = nlohmann::json::parse(out.summary_json);
  CHECK(summary["F"] == 51);
  CHECK(summary["N"] == 299 - 51);
  CHECK(summary["lemma2_violations"] == 0);
}

TEST_CASE("universal_compare columns")
{
  auto const dir = scratch("compare");
  run_with("scenario = universal_compare\nN = 200\nM = 20\nmu = 0.2\nseed = 3\noutput = out\n", dir);
  std::istringstream in(slurp(dir / "out" / "compare.csv"));
  std::string        header;
  std::getline(in, header);
  CHECK(header == "n,K1,KU0,KU1,logK1,logKU0,logKU1");
}

TEST_CASE("girsanov scenario without drift")
{
  auto const dir = scratch("girsanov");
  auto const out = run_with("scenario = girsanov\nmu = 0\nsigma = 0.3\nT = 5\nseeds = 2\noutput = out\n", dir);
  auto const summary = nlohmann::json::parse(out.summary_json);
  CHECK(summary["target"].get<double>() == 0.0);
  CHECK(fs::exists(dir / "out" / "girsanov.csv"));
}

TEST_CASE("model_select scenario")
{
  auto const dir = scratch("model_select");
  run_with("scenario = model_select\nd_max = 3\nN = 500\nmu = 0.3, 0, 0\norder = 1, 2, 3\noutput = out\n", dir);
  CHECK(fs::exists(dir / "out" / "model_select.csv"));
}

TEST_CASE("outputs are deterministic and follow the seed")
{
  auto const dir  = scratch("determinism");
  std::string const text = "scenario = sos_synthetic\nd = 2\nN = 300\nmu = 0.1\nseed = 5\noutput = ";
  run_with(text + "a\n", dir);
  run_with(text + "b\n", dir);
  ::setenv("GTPBET_SEED", "6", 1);
  run_with(text + "c\n", dir);
  ::unsetenv("GTPBET_SEED");
  CHECK(slurp(dir / "a" / "ledger.csv") == slurp(dir / "b" / "ledger.csv"));
  CHECK(slurp(dir / "a" / "ledger.csv") != slurp(dir / "c" / "ledger.csv"));
}

TEST_CASE("scenario errors name the scenario")
{
  auto const dir = scratch("errors");
  CHECK_THROWS_AS(run_with("scenario = nope\n", dir), InvalidArgument);
  try
  {
    run_with("scenario = holder\ngenerator = gbm\ndeltas = 0.001\noutput = out\n", dir);
    FAIL("expected an error");
  }
  catch (Error const &e)
  {
    CHECK(std::string(e.what()).rfind("scenario holder:", 0) == 0);
  }
}
