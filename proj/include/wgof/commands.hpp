#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgof/report.hpp"
#include "wgof/resampling.hpp"

namespace wgof {

/// "KS", "CM", "LS", "KR", "KR:a", "KR:a:m", "S1:a", "S2:a"; case-insensitive.
StatisticSpec parse_statistic(const std::string& text);
/// Empty input or a single "all" gives table_statistics().
std::vector<StatisticSpec> parse_statistics(const std::vector<std::string>& texts);

/// "W:1.5", "W:1.5,2" (shape, scale), "gamma:2", "LN:0.5", "chi2:8",
/// "beta:0.5,1", "lindley:2". Table labels such as "LN(0.5)" are accepted too.
AlternativeSpec parse_alternative(const std::string& text);

/// The thirteen alternatives of the power tables, in table order.
std::vector<AlternativeSpec> table_alternatives();
/// W(0.5), W(1.5), W(2).
std::vector<AlternativeSpec> null_alternatives();

/// "none", or "model:proportion" with model one of exponential (exp),
/// uniform (unif), koziol-green (kg) or all (the three models).
std::vector<CensoringTarget> parse_censoring(const std::string& text);

/// "infinite" or "largest".
CensoringResampler::Tail parse_tail(const std::string& text);
std::string to_string(CensoringResampler::Tail tail);

/// Rendered output plus diagnostics meant for stderr.
struct CommandOutput {
  ReportTable table;
  std::vector<std::string> warnings;
};

struct FitOptions {
  std::string data;
  std::vector<StatisticSpec> statistics = table_statistics();
};

/// MLE with standard errors, log-likelihood and observed statistic values.
CommandOutput run_fit(const FitOptions& options);

struct TestOptions {
  std::string data;
  std::vector<StatisticSpec> statistics = table_statistics();
  int replications = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite;
};

/// Bootstrap p-value per statistic.
CommandOutput run_test(const TestOptions& options);

struct PowerOptions {
  std::vector<AlternativeSpec> alternatives = table_alternatives();
  std::vector<CensoringTarget> censoring{CensoringTarget{}};
  int n = 100;
  int reps = 5000;
  double alpha = 0.10;
  std::uint64_t seed = 0;
  std::vector<StatisticSpec> statistics = table_statistics();
  unsigned threads = 1;
  CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite;
};

/// Overrides fields of `options` from a JSON object with any of the keys
/// alternatives, censoring, n, reps, alpha, statistics (strings use the
/// grammars above). Throws ConfigError on unknown keys or bad values.
void apply_power_config(const std::string& json_text, PowerOptions& options);

/// Warp-speed rejection rates, one row per alternative and censoring model.
/// Every cell uses the same seed, so a cell can be rerun on its own.
CommandOutput run_power(const PowerOptions& options);

struct CriticalOptions {
  int n = 100;
  std::vector<StatisticSpec> statistics{StatisticSpec::s1(5.0)};
  CensoringTarget censoring;
  int reps = 5000;
  std::vector<double> alphas{0.10};
  std::uint64_t seed = 0;
  unsigned threads = 1;
  CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite;
};

/// Null critical values: Monte Carlo from Weibull(1, 1) for full samples,
/// the warp-speed bootstrap pool under Weibull(1, 1) lifetimes otherwise.
CommandOutput run_critical(const CriticalOptions& options);

/// Order statistic standard error from the spread of neighbouring order
/// statistics, half the distance between ranks k -+ sqrt(B alpha (1 - alpha)).
double critical_value_se(const Vector& values, double alpha);

}  // namespace wgof
