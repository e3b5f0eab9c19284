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
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gtpbet/csv.hpp"
#include "gtpbet/errors.hpp"
#include "gtpbet/ingest.hpp"
#include "gtpbet/run_experiment.hpp"
#include "gtpbet/selftest.hpp"

namespace {

int cmd_run(std::string const &config_file)
{
  auto const config = gtpbet::ExperimentConfig::load(config_file);
  auto const result = gtpbet::run_experiment(config);
  for (auto const &file : result.files)
  {
    std::cerr << "wrote " << file.string() << '\n';
  }
  std::cout << result.summary_json << '\n';
  return 0;
}

int cmd_transform(std::string const &prices_file, double c, std::string const &output)
{
  auto const prices = gtpbet::read_price_table_file(prices_file);
  auto const tr     = gtpbet::transform_returns(prices, c);

  std::ofstream file;
  if (!output.empty())
  {
    file.open(output, std::ios::binary);
    if (!file)
    {
      throw gtpbet::Error("cannot write " + output);
    }
  }
  std::ostream &out = output.empty() ? std::cout : file;

  std::vector<std::string> row{"n"};
  for (auto const &item : prices.items)
  {
    row.push_back(item);
  }
  gtpbet::csv::write_row(out, row);
  for (std::size_t n = 0; n < tr.outcomes.size(); ++n)
  {
    row.assign(1, std::to_string(n + 1));
    for (Eigen::Index j = 0; j < tr.outcomes[n].size(); ++j)
    {
      row.push_back(gtpbet::csv::format(tr.outcomes[n][j]));
    }
    gtpbet::csv::write_row(out, row);
  }

  std::cerr << "F = " << tr.transform.F << '\n';
  for (int j = 0; j < prices.dim(); ++j)
  {
    std::cerr << prices.items[static_cast<std::size_t>(j)] << ": s_max = " << gtpbet::csv::format(tr.transform.s_max[j])
              << ", s_min = " << gtpbet::csv::format(tr.transform.s_min[j])
              << ", rho = " << gtpbet::csv::format(tr.transform.rho[j]) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"gtpbet: sequential optimizing strategy for bounded forecasting games"};
  app.require_subcommand(1);

  std::string config_file;
  auto       *run = app.add_subcommand("run", "run an experiment described by a key = value config file");
  run->add_option("config", config_file, "config file")->required()->check(CLI::ExistingFile);

  std::string prices_file;
  std::string output;
  double      c = 0.17;
  auto       *transform = app.add_subcommand("transform", "normalise and centre daily returns of a price CSV");
  transform->add_option("prices", prices_file, "price CSV (index column, then one column per item)")
    ->required()
    ->check(CLI::ExistingFile);
  transform->add_option("--c", c, "fraction of the series used for the centering forecast")
    ->check(CLI::Range(0.0, 1.0));
  transform->add_option("-o,--output", output, "write outcomes here instead of stdout");

  auto *selftest = app.add_subcommand("selftest", "run the invariant checks");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*run)
    {
      return cmd_run(config_file);
    }
    if (*transform)
    {
      return cmd_transform(prices_file, c, output);
    }
    if (*selftest)
    {
      return gtpbet::run_selftest(std::cout) == 0 ? 0 : 1;
    }
  }
  catch (std::exception const &e)
  {
    std::cerr << "gtpbet: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
