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
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gtpbet::csv {

/// 17 significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format(double value);

/// Writes one RFC-4180 record terminated by LF. Fields containing a comma,
/// quote or newline are quoted.
void write_row(std::ostream &out, std::vector<std::string> const &fields);

struct Table
{
  std::vector<std::string>              header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a CSV document with a header row. Accepts CRLF and quoted fields.
Table read(std::istream &in);
Table read_file(std::string const &path);

double parse_double(std::string const &field);

}  // namespace gtpbet::csv
