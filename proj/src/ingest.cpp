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
#include "gtpbet/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "gtpbet/csv.hpp"
#include "gtpbet/errors.hpp"

namespace gtpbet {

PriceTable read_price_table(std::istream &in)
{
  auto table = csv::read(in);
  if (table.header.size() < 2)
  {
    throw InvalidArgument("price CSV needs an index column and at least one price column");
  }
  PriceTable out;
  out.items.assign(table.header.begin() + 1, table.header.end());
  int const d = out.dim();
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    auto const &row = table.rows[r];
    if (row.size() != table.header.size())
    {
      throw InvalidArgument("price CSV row " + std::to_string(r + 2) + " has the wrong number of fields");
    }
    Vector p(d);
    for (int j = 0; j < d; ++j)
    {
      p[j] = csv::parse_double(row[static_cast<std::size_t>(j) + 1]);
      if (!(p[j] > 0.0) || !std::isfinite(p[j]))
      {
        throw InvalidArgument("non-positive price in row " + std::to_string(r + 2) + ", column " +
                              out.items[static_cast<std::size_t>(j)]);
      }
    }
    out.rows.push_back(std::move(p));
  }
  return out;
}

PriceTable read_price_table_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidArgument("cannot open " + path);
  }
  return read_price_table(in);
}

Vector ReturnTransform::normalize(Vector const &s) const
{
  Vector z(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j)
  {
    z[j] = ((s[j] - s_min[j]) - (s_max[j] - s[j])) / (s_max[j] - s_min[j]);
  }
  return z;
}

Vector ReturnTransform::denormalize(Vector const &z) const
{
  return ((z.array() * (s_max - s_min).array() + s_max.array() + s_min.array()) * 0.5).matrix();
}

TransformResult transform_returns(PriceTable const &prices, double c, double epsilon0)
{
  if (!(c > 0.0 && c < 1.0))
  {
    throw InvalidArgument("c must lie in (0, 1)");
  }
  std::size_t const T = prices.rows.size();
  int const         d = prices.dim();
  if (T < 3)
  {
    throw InvalidArgument("return transform needs at least 3 price rows");
  }
  for (std::size_t t = 0; t < T; ++t)
  {
    if (prices.rows[t].size() != d || !(prices.rows[t].array() > 0.0).all())
    {
      throw InvalidArgument("non-positive price in row " + std::to_string(t + 1));
    }
  }

  TransformResult out;
  auto           &tr = out.transform;
  tr.c               = c;
  tr.F               = static_cast<std::size_t>(std::floor(c * static_cast<double>(T)));
  if (tr.F + 1 >= T)
  {
    throw InvalidArgument("forecast horizon leaves no live rounds");
  }

  out.returns.reserve(T - 1);
  for (std::size_t t = 1; t < T; ++t)
  {
    out.returns.push_back((prices.rows[t].array() / prices.rows[t - 1].array() - 1.0).matrix());
  }
  tr.s_max = out.returns.front();
  tr.s_min = out.returns.front();
  for (auto const &s : out.returns)
  {
    tr.s_max = tr.s_max.cwiseMax(s);
    tr.s_min = tr.s_min.cwiseMin(s);
  }
  for (int j = 0; j < d; ++j)
  {
    if (!(tr.s_max[j] > tr.s_min[j]))
    {
      throw InvalidArgument("item " + prices.items[static_cast<std::size_t>(j)] + " has constant returns");
    }
  }

  out.z.reserve(out.returns.size());
  for (auto const &s : out.returns)
  {
    out.z.push_back(tr.normalize(s));
  }

  // The 2^d corners sum to zero, so only the first F returns move rho.
  Vector sum = Vector::Zero(d);
  for (std::size_t t = 0; t < tr.F; ++t)
  {
    sum += out.z[t];
  }
  double const corners = std::ldexp(1.0, d);
  tr.rho               = sum / (corners + static_cast<double>(tr.F));

  Vector const lo = (-1.0 - tr.rho.array()).matrix();
  Vector const hi = (1.0 - tr.rho.array()).matrix();
  out.domain      = Domain::box(lo, hi);
  out.training    = make_training(out.domain, epsilon0, TrainingScheme::corners_2tod);

  out.outcomes.reserve(out.z.size() - tr.F);
  for (std::size_t t = tr.F; t < out.z.size(); ++t)
  {
    out.outcomes.push_back(out.z[t] - tr.rho);
  }
  return out;
}

}  // namespace gtpbet
