#include "bcomb/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bcomb {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_trace_rows(std::ostream& out, std::size_t rep, const RegretTrace& trace) {
  for (const auto& row : trace.rows) {
    out << rep << ',' << row.t << ',' << row.chosen << ',' << format_double(row.inst_regret) << ','
        << format_double(row.cum_regret) << ',' << row.active_count << '\n';
  }
}

void write_trace_csv(const std::string& path, const std::vector<RegretTrace>& reps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << kTraceHeader << '\n';
  for (std::size_t r = 0; r < reps.size(); ++r) write_trace_rows(out, r, reps[r]);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<SummaryRow> summarize(const std::vector<RegretTrace>& reps) {
  if (reps.empty()) return {};
  const std::size_t T = reps.front().rows.size();
  for (const auto& r : reps)
    if (r.rows.size() != T) throw std::invalid_argument("summarize: traces differ in length");
  const double n = static_cast<double>(reps.size());
  std::vector<SummaryRow> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (const auto& r : reps) sum += r.rows[t].cum_regret;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : reps) {
      const double d = r.rows[t].cum_regret - mean;
      ss += d * d;
    }
    out[t] = SummaryRow{reps.front().rows[t].t, mean, reps.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bcomb
