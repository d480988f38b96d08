// Copyright 2026 The pbssp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include "pbssp/bench/experiment.hpp"

namespace pbssp::bench {

inline constexpr const char* kCsvHeader = "procedure,nu,T,m,calls,mean_gap,fail_prob,samples,seed";

// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace detail {

template <class T>
std::string opt_field(const std::optional<T>& v) {
  if (!v) return "-";
  if constexpr (std::is_floating_point_v<T>)
    return format_real(*v);
  else
    return std::to_string(*v);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline std::string csv_row(const Summary& s) {
  std::string r = s.procedure;
  r += ',' + detail::opt_field(s.nu);
  r += ',' + detail::opt_field(s.T);
  r += ',' + detail::opt_field(s.m);
  r += ',' + format_real(s.calls);
  r += ',' + format_real(s.mean_gap);
  r += ',' + format_real(s.fail_prob);
  r += ',' + format_real(s.samples);
  r += ',' + std::to_string(s.seed);
  return r;
}

inline std::string to_csv(const std::vector<Summary>& rows) {
  std::string out = std::string(kCsvHeader) + '\n';
  for (const Summary& s : rows) out += csv_row(s) + '\n';
  return out;
}

// Columns of the comparison tables: procedure, (nu, T, m), # of calls,
// mean gap, failure probability with its 95% interval.
inline std::string to_table(const std::vector<Summary>& rows, double epsilon) {
  std::vector<std::vector<std::string>> cells;
  char gapcol[64];
  std::snprintf(gapcol, sizeof gapcol, "P[gap > %g]", epsilon);
  cells.push_back({"Procedure", "(nu, T, m)", "# of calls", "E[gap]", gapcol, "95% CI", "samples", "done"});
  for (const Summary& s : rows) {
    std::string sched = "-";
    if (s.nu || s.T || s.m) sched = "(" + detail::opt_field(s.nu) + ", " + detail::opt_field(s.T) + ", " +
                                     detail::opt_field(s.m) + ")";
    char calls[32], gap[32], fail[32], ci[48], samp[32], done[32];
    std::snprintf(calls, sizeof calls, "%.1f", s.calls);
    std::snprintf(gap, sizeof gap, "%.4e", s.mean_gap);
    std::snprintf(fail, sizeof fail, "%.1f%%", 100.0 * s.fail_prob);
    std::snprintf(ci, sizeof ci, "[%.1f%%, %.1f%%]", 100.0 * s.fail_lo, 100.0 * s.fail_hi);
    std::snprintf(samp, sizeof samp, "%.0f", s.samples);
    std::snprintf(done, sizeof done, "%zu/%zu", s.completed, s.replications);
    cells.push_back({s.procedure, sched, calls, gap, fail, ci, samp, done});
  }
  std::vector<std::size_t> w(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) w[c] = std::max(w[c], row[c].size());
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      const std::string& v = cells[r][c];
      if (c) line += "  ";
      // First column left-aligned, numbers right-aligned.
      line += c == 0 ? v + std::string(w[c] - v.size(), ' ') : std::string(w[c] - v.size(), ' ') + v;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < w.size(); ++c) total += w[c] + (c ? 2 : 0);
      out += std::string(total, '-') + '\n';
    }
  }
  return out;
}

// Writes the rows to `path` ("-" or empty: standard output).
inline void emit_results(const std::vector<Summary>& rows, const std::string& format, const std::string& path,
                         double epsilon) {
  if (rows.empty()) throw DomainError("no results to emit");
  std::string body;
  if (format == "csv")
    body = to_csv(rows);
  else if (format == "table")
    body = to_table(rows, epsilon);
  else
    throw DomainError("format must be csv or table");
  if (path.empty() || path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

// Parses CSV produced by to_csv.
inline std::vector<Summary> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("CSV header mismatch");
  std::vector<Summary> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw IoError("CSV row has " + std::to_string(f.size()) + " fields, expected 9");
    Summary s;
    s.procedure = f[0];
    if (f[1] != "-") s.nu = std::stod(f[1]);
    if (f[2] != "-") s.T = std::stoi(f[2]);
    if (f[3] != "-") s.m = static_cast<std::size_t>(std::stoull(f[3]));
    s.calls = std::stod(f[4]);
    s.mean_gap = std::stod(f[5]);
    s.fail_prob = std::stod(f[6]);
    s.samples = std::stod(f[7]);
    s.seed = std::stoull(f[8]);
    rows.push_back(std::move(s));
  }
  return rows;
}

}  // namespace pbssp::bench
