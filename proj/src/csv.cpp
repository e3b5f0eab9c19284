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
#include "gtpbet/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "gtpbet/errors.hpp"

namespace gtpbet::csv {

std::string format(double value)
{
  if (std::isnan(value))
  {
    return "nan";
  }
  if (std::isinf(value))
  {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_row(std::ostream &out, std::vector<std::string> const &fields)
{
  for (std::size_t i = 0; i < fields.size(); ++i)
  {
    if (i)
    {
      out << ',';
    }
    auto const &f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos)
    {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f)
    {
      if (c == '"')
      {
        out << '"';
      }
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

namespace {

// Splits one logical record; returns false at end of input.
bool read_record(std::istream &in, std::vector<std::string> &fields)
{
  fields.clear();
  std::string field;
  bool        quoted = false;
  bool        any    = false;
  int         ch;
  while ((ch = in.get()) != EOF)
  {
    any    = true;
    auto c = static_cast<char>(ch);
    if (quoted)
    {
      if (c == '"')
      {
        if (in.peek() == '"')
        {
          field.push_back('"');
          in.get();
        }
        else
        {
          quoted = false;
        }
      }
      else
      {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"')
    {
      quoted = true;
    }
    else if (c == ',')
    {
      fields.push_back(std::move(field));
      field.clear();
    }
    else if (c == '\n')
    {
      break;
    }
    else if (c != '\r')
    {
      field.push_back(c);
    }
  }
  if (!any)
  {
    return false;
  }
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

Table read(std::istream &in)
{
  Table                    table;
  std::vector<std::string> fields;
  bool                     first = true;
  while (read_record(in, fields))
  {
    if (fields.size() == 1 && fields.front().empty())
    {
      continue;  // blank line
    }
    if (first)
    {
      table.header = fields;
      first        = false;
    }
    else
    {
      table.rows.push_back(fields);
    }
  }
  return table;
}

Table read_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidArgument("cannot open CSV file: " + path);
  }
  return read(in);
}

double parse_double(std::string const &field)
{
  char const *begin = field.c_str();
  char       *end   = nullptr;
  errno             = 0;
  double v          = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t'))
  {
    ++end;
  }
  if (end == begin || (end && *end != '\0') || errno == ERANGE)
  {
    throw InvalidArgument("not a number: '" + field + "'");
  }
  return v;
}

}  // namespace gtpbet::csv
