#pragma once

// Plot-ready CSV emission. Floats use 17 significant digits so that every
// value round-trips exactly.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bcomb/core.hpp"

namespace bcomb {

inline constexpr std::string_view kTraceHeader = "rep,t,chosen,inst_regret,cum_regret,active_count";
inline constexpr std::string_view kSummaryHeader = "policy,t,mean_cum_regret,std_cum_regret";

/// General-format rendering with 17 significant digits.
std::string format_double(double value);

void write_trace_rows(std::ostream& out, std::size_t rep, const RegretTrace& trace);
void write_trace_csv(const std::string& path, const std::vector<RegretTrace>& reps);

struct SummaryRow {
  std::size_t t = 0;
  double mean = 0.0;
  double std = 0.0;
};

/// Per-round mean and sample standard deviation of cumulative regret.
std::vector<SummaryRow> summarize(const std::vector<RegretTrace>& reps);

/// 64-bit FNV-1a digest, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace bcomb
