#pragma once

#include <Eigen/Dense>

#include "wgof/types.hpp"

namespace wgof {

/// Censored Weibull log-likelihood
///   d log(theta) - d theta log(lambda) + (theta - 1) sum_{delta=1} log t - lambda^-theta sum t^theta.
///
/// The printed form of this likelihood in some references writes the third
/// term as d (theta - 1) log(X_j); the sum runs over uncensored times only.
double weibull_loglik(const CensoredSample& sample, const WeibullParams& params);

/// Observed information -d2 loglik at `params`, ordered (lambda, theta).
Eigen::Matrix2d observed_information(const CensoredSample& sample, const WeibullParams& params);

/// Asymptotic standard errors of (lambda, theta) from the inverse observed
/// information. Throws NumericError when the information is not positive definite.
Eigen::Vector2d mle_standard_errors(const CensoredSample& sample, const WeibullParams& params);

/// Derivative of the profile log-likelihood in theta (lambda profiled out).
/// Strictly decreasing in theta, so its root is the shape MLE.
double profile_score(const CensoredSample& sample, double theta);

/// Scale maximising the likelihood for a fixed shape:
/// (sum t^theta / d)^(1/theta).
double profile_scale(const CensoredSample& sample, double theta);

struct MleOptions {
  double score_tolerance = 1e-10;
  int max_iterations = 200;
};

/// Maximum-likelihood (lambda, theta) for right-censored Weibull data.
///
/// Solves the profile score equation in theta with a safeguarded Newton
/// iteration inside a bracket grown geometrically from the log-scale moment
/// start 1.2826 / sd(log t). Throws InsufficientEventsError when fewer than
/// two events are observed, DegenerateError when all uncensored times
/// coincide, NumericError when the iteration cap is reached.
WeibullParams weibull_mle(const CensoredSample& sample, const MleOptions& options = {});

/// Y_j = theta [log T_j - log lambda], sorted ascending with indicators
/// carried along. At tied values events precede censored observations.
struct TransformedSample {
  Vector y;
  Indicators deltas;
  WeibullParams mle;

  Index size() const { return y.size(); }
};

TransformedSample transform(const CensoredSample& sample, const WeibullParams& params);

/// Where the product-limit estimator puts the mass left over after the
/// last event.
enum class LastJump {
  /// Delta_n is the full leftover product, whatever delta_(n) is. Total mass is 1.
  LeftoverMass,
  /// Delta_n = delta_(n) times the leftover product; defective when the
  /// largest observation is censored.
  EventOnly,
};

/// Kaplan-Meier estimate as point masses on the sorted support.
struct KaplanMeierFit {
  Vector support;
  Vector jumps;
  /// cumulative(j) = jumps(0) + ... + jumps(j).
  Vector cumulative;

  Index size() const { return support.size(); }
  /// Right-continuous G_n(t).
  double cdf(double t) const;
  /// Left limit G_n(t-).
  double cdf_left(double t) const;
};

/// Jump masses on a sorted support:
///   Delta_1 = delta_(1)/n,
///   Delta_j = delta_(j)/(n-j+1) prod_{k<j} ((n-k)/(n-k+1))^delta_(k),
///   Delta_n = prod_{k<n} ((n-k)/(n-k+1))^delta_(k)   (LeftoverMass).
KaplanMeierFit km_jumps(const Vector& sorted_support, const Indicators& sorted_deltas,
                        LastJump convention = LastJump::LeftoverMass);
KaplanMeierFit km_jumps(const TransformedSample& ts, LastJump convention = LastJump::LeftoverMass);

/// G_n(t): sum of jumps at support points <= t.
double km_cdf(const KaplanMeierFit& fit, double t);

}  // namespace wgof
