#include "wgof/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace wgof {

namespace {

// Log-times centred on the mean uncensored log-time. Centring leaves the
// shape estimate unchanged and keeps exp(theta * s) in range.
struct CentredLogs {
  Vector s;
  Indicators deltas;
  double centre = 0.0;
  double events = 0.0;

  explicit CentredLogs(const CensoredSample& sample) : deltas(sample.deltas) {
    validate(sample);
    const Vector logs = sample.times.log();
    events = static_cast<double>(sample.events());
    if (events > 0) {
      centre = (logs * sample.deltas.cast<double>()).sum() / events;
    }
    s = logs - centre;
  }

  struct Moments {
    double shift;  // max theta * s
    double a;      // sum w
    double b;      // sum w s
    double c;      // sum w s^2
  };

  Moments moments(double theta) const {
    const Vector ts = theta * s;
    const double shift = ts.maxCoeff();
    const Vector w = (ts - shift).exp();
    return {shift, w.sum(), (w * s).sum(), (w * s.square()).sum()};
  }

  // The event-sum of s vanishes by construction, so the score is d/theta - d B/A.
  double score(const Moments& m, double theta) const { return events / theta - events * m.b / m.a; }

  double score_derivative(const Moments& m, double theta) const {
    const double mean = m.b / m.a;
    return -events / (theta * theta) - events * (m.c / m.a - mean * mean);
  }

  double log_scale(const Moments& m, double theta) const {
    return centre + (m.shift + std::log(m.a / events)) / theta;
  }
};

void require_events(const CensoredSample& sample) {
  if (sample.events() < 2) {
    throw InsufficientEventsError("Weibull MLE needs at least two uncensored observations, got " +
                                  std::to_string(sample.events()));
  }
}

}  // namespace

double weibull_loglik(const CensoredSample& sample, const WeibullParams& params) {
  validate(sample);
  validate(params);
  const double d = static_cast<double>(sample.events());
  const Vector logs = sample.times.log();
  const double event_logs = (logs * sample.deltas.cast<double>()).sum();
  const double log_lambda = std::log(params.lambda);
  const double power_sum = (params.theta * (logs - log_lambda)).exp().sum();
  return d * std::log(params.theta) - d * params.theta * log_lambda +
         (params.theta - 1.0) * event_logs - power_sum;
}

Eigen::Matrix2d observed_information(const CensoredSample& sample, const WeibullParams& params) {
  validate(sample);
  validate(params);
  const double lambda = params.lambda;
  const double theta = params.theta;
  const double d = static_cast<double>(sample.events());
  const Vector l = sample.times.log() - std::log(lambda);
  const Vector z = (theta * l).exp();
  const double sz = z.sum();
  const double szl = (z * l).sum();
  const double szl2 = (z * l.square()).sum();
  Eigen::Matrix2d info;
  info(0, 0) = -(d * theta - theta * (theta + 1.0) * sz) / (lambda * lambda);
  info(0, 1) = info(1, 0) = -(-d + sz + theta * szl) / lambda;
  info(1, 1) = d / (theta * theta) + szl2;
  return info;
}

Eigen::Vector2d mle_standard_errors(const CensoredSample& sample, const WeibullParams& params) {
  const Eigen::Matrix2d info = observed_information(sample, params);
  const Eigen::LLT<Eigen::Matrix2d> llt(info);
  if (llt.info() != Eigen::Success) {
    throw NumericError("observed information is not positive definite");
  }
  const Eigen::Matrix2d cov = llt.solve(Eigen::Matrix2d::Identity());
  return cov.diagonal().cwiseSqrt();
}

double profile_score(const CensoredSample& sample, double theta) {
  require_events(sample);
  const CentredLogs logs(sample);
  return logs.score(logs.moments(theta), theta);
}

double profile_scale(const CensoredSample& sample, double theta) {
  if (sample.events() < 1) {
    throw InsufficientEventsError("profile scale needs at least one uncensored observation");
  }
  const CentredLogs logs(sample);
  return std::exp(logs.log_scale(logs.moments(theta), theta));
}

WeibullParams weibull_mle(const CensoredSample& sample, const MleOptions& options) {
  require_events(sample);
  const CentredLogs logs(sample);

  double sum = 0.0;
  double sum_sq = 0.0;
  double lo_s = std::numeric_limits<double>::infinity();
  double hi_s = -lo_s;
  for (Index i = 0; i < logs.s.size(); ++i) {
    if (logs.deltas[i] == 1) {
      sum += logs.s[i];
      sum_sq += logs.s[i] * logs.s[i];
      lo_s = std::min(lo_s, logs.s[i]);
      hi_s = std::max(hi_s, logs.s[i]);
    }
  }
  if (!(hi_s > lo_s)) {
    throw DegenerateError("all uncensored times are equal; the shape estimate diverges");
  }
  const double d = logs.events;
  const double sd = std::sqrt(std::max(0.0, (sum_sq - sum * sum / d) / (d - 1.0)));
  double theta = sd > 0.0 ? 1.2826 / sd : 1.0;

  auto score_at = [&](double t) { return logs.score(logs.moments(t), t); };

  // Bracket the root by geometric steps from the moment start.
  double lo = theta;
  double hi = theta;
  const double f0 = score_at(theta);
  if (f0 == 0.0) {
    return {std::exp(logs.log_scale(logs.moments(theta), theta)), theta};
  }
  for (int i = 0;; ++i) {
    if (i == 2000) {
      throw NumericError("could not bracket the Weibull shape estimate");
    }
    if (f0 > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (score_at(hi) < 0.0) break;
    } else {
      hi = lo;
      lo *= 0.5;
      if (score_at(lo) > 0.0) break;
    }
  }

  theta = std::clamp(theta, lo, hi);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const auto m = logs.moments(theta);
    const double f = logs.score(m, theta);
    if (!std::isfinite(f)) {
      throw NumericError("non-finite profile score at theta = " + std::to_string(theta));
    }
    if (std::abs(f) < options.score_tolerance) {
      return {std::exp(logs.log_scale(m, theta)), theta};
    }
    if (f > 0.0) {
      lo = theta;
    } else {
      hi = theta;
    }
    double next = theta - f / logs.score_derivative(m, theta);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    // Machine-precision stall: the score cannot be resolved any further.
    if (std::abs(next - theta) <= 4.0 * std::numeric_limits<double>::epsilon() * theta) {
      const auto mn = logs.moments(next);
      return {std::exp(logs.log_scale(mn, next)), next};
    }
    theta = next;
  }
  throw NumericError("Weibull MLE did not converge in " + std::to_string(options.max_iterations) +
                     " iterations (theta = " + std::to_string(theta) + ", bracket [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "])");
}

TransformedSample transform(const CensoredSample& sample, const WeibullParams& params) {
  validate(sample);
  validate(params);
  const Index n = sample.size();
  const Vector y = params.theta * (sample.times.log() - std::log(params.lambda));

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (y[a] != y[b]) return y[a] < y[b];
    return sample.deltas[a] > sample.deltas[b];
  });

  TransformedSample out{Vector(n), Indicators(n), params};
  for (Index j = 0; j < n; ++j) {
    out.y[j] = y[order[static_cast<std::size_t>(j)]];
    out.deltas[j] = sample.deltas[order[static_cast<std::size_t>(j)]];
  }
  return out;
}

KaplanMeierFit km_jumps(const Vector& sorted_support, const Indicators& sorted_deltas,
                        LastJump convention) {
  const Index n = sorted_support.size();
  if (n == 0) {
    throw DomainError("Kaplan-Meier estimate of an empty sample");
  }
  if (sorted_deltas.size() != n) {
    throw DomainError("support and indicators differ in length");
  }

  // A run of consecutive events a..b telescopes to the single factor
  // (n-b)/(n-a+1), so each jump inside a run is closed_runs / (n-a+1).
  // This keeps the full-sample masses exactly 1/n.
  KaplanMeierFit fit{sorted_support, Vector::Zero(n), Vector(n)};
  const double nn = static_cast<double>(n);
  double closed_runs = 1.0;
  Index run_start = -1;  // 0-based start of the open run, -1 when none
  for (Index j = 0; j + 1 < n; ++j) {
    if (sorted_deltas[j] == 1) {
      if (run_start < 0) run_start = j;
      fit.jumps[j] = closed_runs / (nn - static_cast<double>(run_start));
    } else if (run_start >= 0) {
      closed_runs *= (nn - static_cast<double>(j)) / (nn - static_cast<double>(run_start));
      run_start = -1;
    }
  }
  const double leftover =
      run_start >= 0 ? closed_runs / (nn - static_cast<double>(run_start)) : closed_runs;
  const bool last_event = sorted_deltas[n - 1] == 1;
  fit.jumps[n - 1] = (convention == LastJump::LeftoverMass || last_event) ? leftover : 0.0;

  double running = 0.0;
  for (Index j = 0; j < n; ++j) {
    running += fit.jumps[j];
    fit.cumulative[j] = running;
  }
  return fit;
}

KaplanMeierFit km_jumps(const TransformedSample& ts, LastJump convention) {
  return km_jumps(ts.y, ts.deltas, convention);
}

double KaplanMeierFit::cdf(double t) const {
  const auto* begin = support.data();
  const auto* it = std::upper_bound(begin, begin + support.size(), t);
  const Index count = it - begin;
  return count == 0 ? 0.0 : cumulative[count - 1];
}

double KaplanMeierFit::cdf_left(double t) const {
  const auto* begin = support.data();
  const auto* it = std::lower_bound(begin, begin + support.size(), t);
  const Index count = it - begin;
  return count == 0 ? 0.0 : cumulative[count - 1];
}

double km_cdf(const KaplanMeierFit& fit, double t) { return fit.cdf(t); }

}  // namespace wgof
