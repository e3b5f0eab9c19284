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
#include "gtpbet/price_path.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "gtpbet/csv.hpp"
#include "gtpbet/errors.hpp"

namespace gtpbet {

PricePath::PricePath(int dim)
  : dim_(dim)
{
  if (dim <= 0)
  {
    throw InvalidArgument("price path dimension must be positive");
  }
}

PricePath::PricePath(std::vector<double> times, std::vector<double> values, int dim, PathGenerator generator)
  : dim_(dim)
  , times_(std::move(times))
  , values_(std::move(values))
  , generator_(std::move(generator))
{
  if (dim <= 0)
  {
    throw InvalidArgument("price path dimension must be positive");
  }
  validate();
}

void PricePath::validate() const
{
  if (values_.size() != times_.size() * static_cast<std::size_t>(dim_))
  {
    throw InvalidArgument("price path values do not match the grid size");
  }
  for (std::size_t i = 1; i < times_.size(); ++i)
  {
    if (!(times_[i] > times_[i - 1]))
    {
      throw InvalidArgument("price path grid is not strictly increasing at index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i)
  {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
    {
      throw InvalidArgument("price path has a non-positive price at index " +
                            std::to_string(i / static_cast<std::size_t>(dim_)));
    }
  }
}

void write_price_path_csv(std::ostream &out, PricePath const &path)
{
  std::vector<std::string> row{"time"};
  for (int j = 1; j <= path.dim(); ++j)
  {
    row.push_back("S" + std::to_string(j));
  }
  csv::write_row(out, row);
  for (std::size_t i = 0; i < path.size(); ++i)
  {
    row.clear();
    row.push_back(csv::format(path.time(i)));
    auto p = path.point(i);
    for (int j = 0; j < path.dim(); ++j)
    {
      row.push_back(csv::format(p[j]));
    }
    csv::write_row(out, row);
  }
}

PricePath read_price_path_csv(std::istream &in)
{
  auto table = csv::read(in);
  if (table.header.size() < 2)
  {
    throw InvalidArgument("price path CSV needs a time column and at least one price column");
  }
  int const           dim = static_cast<int>(table.header.size()) - 1;
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(table.rows.size());
  values.reserve(table.rows.size() * static_cast<std::size_t>(dim));
  for (auto const &row : table.rows)
  {
    if (row.size() != table.header.size())
    {
      throw InvalidArgument("ragged price path CSV row");
    }
    times.push_back(csv::parse_double(row[0]));
    for (int j = 1; j <= dim; ++j)
    {
      values.push_back(csv::parse_double(row[static_cast<std::size_t>(j)]));
    }
  }
  return PricePath(std::move(times), std::move(values), dim);
}

}  // namespace gtpbet
