#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wgof/distributions.hpp"
#include "wgof/statistics.hpp"

namespace wgof {

/// Draws censoring times from the Kaplan-Meier estimate of the censoring
/// law. The estimate is built on the transformed scale
/// theta (log C - log lambda) with flipped indicators 1 - delta, then
/// mapped back with lambda exp(y / theta). When the largest observation is
/// an event the estimate is defective; `Tail` decides where the missing
/// mass goes. Without censored observations nothing is censored (C* = +inf).
class CensoringResampler {
 public:
  /// Where the censoring estimate puts the mass beyond the largest observation.
  enum class Tail {
    LargestObservation,  ///< an atom at max T, so every X* > max T is censored there
    Infinite,            ///< C* = +inf, so X* > max T stays uncensored (default)
  };

  CensoringResampler(const CensoredSample& sample, const WeibullParams& mle, Tail tail = Tail::Infinite);

  bool censors() const { return censors_; }
  double draw(Rng& rng) const;
  const KaplanMeierFit& fit() const { return fit_; }
  /// Support mapped back to the time scale.
  const Vector& times() const { return times_; }

 private:
  KaplanMeierFit fit_;
  Vector times_;
  bool censors_ = false;
  Tail tail_ = Tail::LargestObservation;
};

/// Parametric bootstrap settings.
struct BootstrapConfig {
  int replications = 1000;
  double alpha = 0.10;
  std::uint64_t seed = 0;
  StatisticSpec statistic = StatisticSpec::s1(5.0);
  unsigned threads = 1;
  CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite;
};

void validate(const BootstrapConfig& config);

/// Redraw bookkeeping for one resampling run.
struct ResamplingAudit {
  long long draws = 0;    ///< successful replicates
  long long redraws = 0;  ///< replicates discarded after a failed refit
};

/// One bootstrap replicate: X* ~ Weibull(mle), C* from the censoring
/// resampler, T* = min, refit, retransform, evaluate. Failed refits are
/// redrawn from the same stream; `redraws` counts them.
std::vector<double> bootstrap_replicate(Index n, const WeibullParams& mle, const CensoringResampler& censoring,
                                        const std::vector<StatisticSpec>& specs, Rng& rng, long long& redraws,
                                        long long max_redraws);

/// B x specs matrix of bootstrap statistics. Replicate b uses the stream
/// derived from (seed, b), so results do not depend on `threads`.
/// Throws NumericError once redraws push total attempts past 10 B.
Eigen::ArrayXXd bootstrap_null_matrix(const CensoredSample& sample, const std::vector<StatisticSpec>& specs,
                                      int replications, std::uint64_t seed, unsigned threads = 1,
                                      ResamplingAudit* audit = nullptr,
                                      CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite);

Vector bootstrap_null_statistics(const CensoredSample& sample, const StatisticSpec& spec, int replications,
                                 std::uint64_t seed, unsigned threads = 1);

/// Order statistic W*_(floor(B (1 - alpha))), index clamped to [1, B].
double critical_value_from(const Vector& bootstrap_values, double alpha);

/// (1 + #{W* >= observed}) / (B + 1).
double p_value_from(double observed, const Vector& bootstrap_values);

double critical_value(const CensoredSample& sample, const StatisticSpec& spec, int replications, double alpha,
                      std::uint64_t seed, unsigned threads = 1);

/// Requires B >= 99.
double p_value(const CensoredSample& sample, const StatisticSpec& spec, int replications, std::uint64_t seed,
               unsigned threads = 1);

/// Same, driven by a BootstrapConfig.
double critical_value(const CensoredSample& sample, const BootstrapConfig& config);
double p_value(const CensoredSample& sample, const BootstrapConfig& config);

struct TestOutcome {
  StatisticSpec spec;
  double observed = 0.0;
  double p_value = 1.0;
  double standard_error = 0.0;
};

struct BootstrapTest {
  WeibullParams mle;
  double censored_fraction = 0.0;
  int replications = 0;
  std::vector<TestOutcome> outcomes;
  ResamplingAudit audit;
};

/// p-values for several statistics from one shared set of bootstrap draws.
BootstrapTest bootstrap_test(const CensoredSample& sample, const std::vector<StatisticSpec>& specs,
                             int replications, std::uint64_t seed, unsigned threads = 1,
                             CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite);

/// Censoring given as a target proportion, calibrated per lifetime law.
struct CensoringTarget {
  CensoringModel model = CensoringModel::None;
  double proportion = 0.0;
};

struct PowerStudyConfig {
  AlternativeSpec lifetime;
  std::variant<CensoringSpec, CensoringTarget> censoring = CensoringSpec::none();
  int n = 100;
  int reps = 5000;
  double alpha = 0.10;
  std::uint64_t seed = 0;
  std::vector<StatisticSpec> statistics = table_statistics();
  unsigned threads = 1;
  CensoringResampler::Tail tail = CensoringResampler::Tail::Infinite;
};

void validate(const PowerStudyConfig& config);

/// Censoring law actually used: calibrated when a target was given.
CensoringSpec resolve_censoring(const PowerStudyConfig& config);

/// W_r (from the alternative) and one W*_r (from the fitted null with
/// resampled censoring) per replication, one column per statistic.
struct WarpSpeedPools {
  Eigen::ArrayXXd observed;
  Eigen::ArrayXXd bootstrap;
  CensoringSpec censoring;
  ResamplingAudit audit;
};

WarpSpeedPools warp_speed_pools(const PowerStudyConfig& config);

struct PowerEntry {
  StatisticSpec spec;
  double power = 0.0;
  double standard_error = 0.0;
  double critical_value = 0.0;
};

struct PowerResult {
  std::vector<PowerEntry> entries;
  CensoringSpec censoring;
  ResamplingAudit audit;
  /// Set when more than 1% of replications needed a redraw.
  bool redraw_warning = false;
};

/// Warp-speed bootstrap power: per-statistic critical value from the pooled
/// W*, power = #{W_r > c} / reps.
PowerResult warp_speed_power(const PowerStudyConfig& config);

/// reps x specs matrix of statistics of full Weibull(1, 1) samples of size n.
/// The statistics are scale and shape invariant, so any Weibull law serves.
Eigen::ArrayXXd monte_carlo_null(const std::vector<StatisticSpec>& specs, int n, int reps, std::uint64_t seed,
                                 unsigned threads = 1);

}  // namespace wgof
