#pragma once

#include <string>
#include <vector>

#include "wgof/estimation.hpp"

namespace wgof {

enum class StatisticKind { S1, S2, KS, CM, LS, KR };

/// Which statistic to compute and its tuning parameters.
///  - S1, S2: weight parameter a > 0.
///  - KR: weight parameter a (any real) and m >= 1 Riemann points.
struct StatisticSpec {
  StatisticKind kind = StatisticKind::S1;
  double a = 1.0;
  int m = 100;

  static StatisticSpec s1(double a) { return {StatisticKind::S1, a, 0}; }
  static StatisticSpec s2(double a) { return {StatisticKind::S2, a, 0}; }
  static StatisticSpec ks() { return {StatisticKind::KS, 0.0, 0}; }
  static StatisticSpec cm() { return {StatisticKind::CM, 0.0, 0}; }
  static StatisticSpec ls() { return {StatisticKind::LS, 0.0, 0}; }
  static StatisticSpec kr(double a = -5.0, int m = 100) { return {StatisticKind::KR, a, m}; }

  /// "KS", "S1(a=5)", "KR" (default tuning) or "KR(a=-3;m=50)".
  std::string label() const;

  bool operator==(const StatisticSpec&) const = default;
};

/// Throws ConfigError for unknown kinds or invalid tuning parameters.
void validate(const StatisticSpec& spec);

/// The ten statistics of the power tables, in column order:
/// KS, CM, LS, KR, S1 a=1,5,10, S2 a=1,5,10.
std::vector<StatisticSpec> table_statistics();

struct StatisticValue {
  double value = 0.0;
  StatisticSpec spec;
};

/// Stein-type statistic with Gaussian weight exp(-a t^2), closed form.
StatisticValue stat_s1(const TransformedSample& ts, const KaplanMeierFit& km, double a);

/// Stein-type statistic with Laplace weight exp(-a |t|), closed form.
StatisticValue stat_s2(const TransformedSample& ts, const KaplanMeierFit& km, double a);

enum class OracleWeight { Gaussian, Laplace };

struct OracleOptions {
  /// Integrate over [0, T] and double instead of [-T, T].
  bool half_line = false;
  double abs_tolerance = 1e-10;
};

/// Direct numerical integral n * int |sum_j Delta_j (i t + 1 - e^Y_j) e^{i t Y_j}|^2 w_a(t) dt,
/// by adaptive Gauss-Kronrod on unit panels. Independent of the closed forms.
StatisticValue stat_oracle(const TransformedSample& ts, const KaplanMeierFit& km, OracleWeight weight,
                           double a, const OracleOptions& options = {});

/// sup_t |G_n(t) - G(t)| for the fitted EV(0,1) law G.
StatisticValue stat_ks(const TransformedSample& ts, const KaplanMeierFit& km);

/// Cramer-von Mises distance n * int_0^1 (G_n(G^-1(u)) - u)^2 du, integrated
/// exactly over the pieces of the step function.
StatisticValue stat_cm(const TransformedSample& ts, const KaplanMeierFit& km);

/// Liao-Shimokawa statistic with Kaplan-Meier plotting positions.
StatisticValue stat_ls(const TransformedSample& ts, const KaplanMeierFit& km);

/// Laplace-transform statistic
///   n sum_{k=-m}^{-1} [sum_j Delta_j e^{-Y_j k/m} - Gamma(1 - k/m)]^2 e^{a k/m - e^{a k/m}}.
/// No 1/m mesh factor is applied; divide by m for the integral scale.
StatisticValue stat_kr(const TransformedSample& ts, const KaplanMeierFit& km, double a = -5.0,
                       int m = 100);

/// Dispatch on spec.kind.
StatisticValue evaluate(const StatisticSpec& spec, const TransformedSample& ts, const KaplanMeierFit& km);

/// mle -> transform -> Kaplan-Meier -> each statistic.
std::vector<double> evaluate_all(const std::vector<StatisticSpec>& specs, const CensoredSample& sample);
std::vector<double> evaluate_all(const std::vector<StatisticSpec>& specs, const CensoredSample& sample,
                                 const WeibullParams& mle);

}  // namespace wgof
