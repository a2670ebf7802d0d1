#include "wgof/resampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

#include "wgof/parallel.hpp"

namespace wgof {

namespace {

void require_replications(int replications) {
  if (replications < 1) {
    throw ConfigError("bootstrap needs at least one replication");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ConfigError("significance level must lie in (0,1)");
  }
}

void validate_all(const std::vector<StatisticSpec>& specs) {
  if (specs.empty()) {
    throw ConfigError("no statistics requested");
  }
  for (const auto& s : specs) validate(s);
}

// Replicate draw with redraw-on-failure against a shared budget.
std::vector<double> replicate_with_budget(Index n, const WeibullParams& mle, const CensoringResampler& censoring,
                                          const std::vector<StatisticSpec>& specs, Rng& rng,
                                          std::atomic<long long>& redraws, long long max_redraws) {
  for (;;) {
    Vector x = sample_weibull(mle, n, rng);
    CensoredSample s;
    if (censoring.censors()) {
      Vector c(n);
      for (Index i = 0; i < n; ++i) c[i] = censoring.draw(rng);
      s = apply_censoring(x, c);
    } else {
      s = full_sample(x);
    }
    try {
      return evaluate_all(specs, s);
    } catch (const NumericError&) {
    } catch (const DomainError&) {
    }
    if (++redraws > max_redraws) {
      throw NumericError("bootstrap refits failed too often (" + std::to_string(max_redraws) +
                         " redraws); the fitted null model is degenerate for this sample size");
    }
  }
}

}  // namespace

void validate(const BootstrapConfig& config) {
  require_replications(config.replications);
  require_alpha(config.alpha);
  validate(config.statistic);
}

CensoringResampler::CensoringResampler(const CensoredSample& sample, const WeibullParams& mle, Tail tail)
    : tail_(tail) {
  validate(sample);
  validate(mle);
  censors_ = sample.events() < sample.size();
  if (!censors_) {
    return;
  }
  const Index n = sample.size();
  const Vector y = mle.theta * (sample.times.log() - std::log(mle.lambda));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  // For the censoring law a censored observation is the event; at ties it comes first.
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (y[a] != y[b]) return y[a] < y[b];
    return sample.deltas[a] < sample.deltas[b];
  });
  Vector sorted(n);
  Indicators flipped(n);
  for (Index j = 0; j < n; ++j) {
    sorted[j] = y[order[static_cast<std::size_t>(j)]];
    flipped[j] = 1 - sample.deltas[order[static_cast<std::size_t>(j)]];
  }
  fit_ = km_jumps(sorted, flipped, tail == Tail::Infinite ? LastJump::EventOnly : LastJump::LeftoverMass);
  times_ = mle.lambda * (fit_.support / mle.theta).exp();
}

double CensoringResampler::draw(Rng& rng) const {
  if (!censors_) {
    return std::numeric_limits<double>::infinity();
  }
  const double u = uniform_open(rng);
  const auto* begin = fit_.cumulative.data();
  const auto* end = begin + fit_.cumulative.size();
  const auto* it = std::lower_bound(begin, end, u);
  if (it == end) {
    return tail_ == Tail::Infinite ? std::numeric_limits<double>::infinity() : times_[fit_.cumulative.size() - 1];
  }
  return times_[it - begin];
}

std::vector<double> bootstrap_replicate(Index n, const WeibullParams& mle, const CensoringResampler& censoring,
                                        const std::vector<StatisticSpec>& specs, Rng& rng, long long& redraws,
                                        long long max_redraws) {
  std::atomic<long long> counter{redraws};
  try {
    auto out = replicate_with_budget(n, mle, censoring, specs, rng, counter, max_redraws);
    redraws = counter.load();
    return out;
  } catch (...) {
    redraws = counter.load();
    throw;
  }
}

Eigen::ArrayXXd bootstrap_null_matrix(const CensoredSample& sample, const std::vector<StatisticSpec>& specs,
                                      int replications, std::uint64_t seed, unsigned threads,
                                      ResamplingAudit* audit, CensoringResampler::Tail tail) {
  require_replications(replications);
  validate_all(specs);
  const WeibullParams mle = weibull_mle(sample);
  const CensoringResampler censoring(sample, mle, tail);
  const Index n = sample.size();

  Eigen::ArrayXXd out(replications, static_cast<Index>(specs.size()));
  std::atomic<long long> redraws{0};
  const long long max_redraws = 9LL * replications;
  parallel_for(static_cast<std::size_t>(replications), threads, [&](std::size_t b) {
    Rng rng = derived_stream(seed, b);
    const auto values = replicate_with_budget(n, mle, censoring, specs, rng, redraws, max_redraws);
    for (std::size_t s = 0; s < values.size(); ++s) {
      out(static_cast<Index>(b), static_cast<Index>(s)) = values[s];
    }
  });
  if (audit != nullptr) {
    audit->draws = replications;
    audit->redraws = redraws.load();
  }
  return out;
}

Vector bootstrap_null_statistics(const CensoredSample& sample, const StatisticSpec& spec, int replications,
                                 std::uint64_t seed, unsigned threads) {
  return bootstrap_null_matrix(sample, {spec}, replications, seed, threads).col(0);
}

double critical_value_from(const Vector& bootstrap_values, double alpha) {
  require_alpha(alpha);
  const Index b = bootstrap_values.size();
  if (b == 0) {
    throw ConfigError("critical value of an empty bootstrap sample");
  }
  // The small offset keeps products such as 10 * 0.9 from flooring to 8.
  const auto raw = static_cast<Index>(std::floor(static_cast<double>(b) * (1.0 - alpha) + 1e-9));
  const Index k = std::clamp<Index>(raw, 1, b);
  std::vector<double> sorted(bootstrap_values.begin(), bootstrap_values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[static_cast<std::size_t>(k - 1)];
}

double p_value_from(double observed, const Vector& bootstrap_values) {
  const auto exceed = (bootstrap_values >= observed).count();
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(bootstrap_values.size()) + 1.0);
}

double critical_value(const CensoredSample& sample, const StatisticSpec& spec, int replications, double alpha,
                      std::uint64_t seed, unsigned threads) {
  require_alpha(alpha);
  return critical_value_from(bootstrap_null_statistics(sample, spec, replications, seed, threads), alpha);
}

double p_value(const CensoredSample& sample, const StatisticSpec& spec, int replications, std::uint64_t seed,
               unsigned threads) {
  if (replications < 99) {
    throw ConfigError("p-values need at least 99 bootstrap replications");
  }
  const double observed = evaluate_all({spec}, sample).front();
  return p_value_from(observed, bootstrap_null_statistics(sample, spec, replications, seed, threads));
}

double critical_value(const CensoredSample& sample, const BootstrapConfig& config) {
  validate(config);
  const Eigen::ArrayXXd pool =
      bootstrap_null_matrix(sample, {config.statistic}, config.replications, config.seed, config.threads, nullptr,
                            config.tail);
  return critical_value_from(pool.col(0), config.alpha);
}

double p_value(const CensoredSample& sample, const BootstrapConfig& config) {
  validate(config);
  return bootstrap_test(sample, {config.statistic}, config.replications, config.seed, config.threads, config.tail)
      .outcomes.front()
      .p_value;
}

BootstrapTest bootstrap_test(const CensoredSample& sample, const std::vector<StatisticSpec>& specs,
                             int replications, std::uint64_t seed, unsigned threads, CensoringResampler::Tail tail) {
  if (replications < 99) {
    throw ConfigError("p-values need at least 99 bootstrap replications");
  }
  validate_all(specs);
  BootstrapTest out;
  out.mle = weibull_mle(sample);
  out.censored_fraction = sample.censored_fraction();
  out.replications = replications;
  const auto observed = evaluate_all(specs, sample, out.mle);
  const Eigen::ArrayXXd pool = bootstrap_null_matrix(sample, specs, replications, seed, threads, &out.audit, tail);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const double p = p_value_from(observed[s], pool.col(static_cast<Index>(s)));
    out.outcomes.push_back({specs[s], observed[s], p, std::sqrt(p * (1.0 - p) / replications)});
  }
  return out;
}

void validate(const PowerStudyConfig& config) {
  validate(config.lifetime);
  if (config.n < 10) {
    throw ConfigError("power studies need n >= 10");
  }
  if (config.reps < 100) {
    throw ConfigError("power studies need at least 100 replications");
  }
  require_alpha(config.alpha);
  validate_all(config.statistics);
  if (const auto* spec = std::get_if<CensoringSpec>(&config.censoring)) {
    validate(*spec);
  } else {
    const auto& target = std::get<CensoringTarget>(config.censoring);
    if (target.model != CensoringModel::None && !(target.proportion > 0.0 && target.proportion < 1.0)) {
      throw ConfigError("censoring proportion must lie in (0,1)");
    }
  }
}

CensoringSpec resolve_censoring(const PowerStudyConfig& config) {
  if (const auto* spec = std::get_if<CensoringSpec>(&config.censoring)) {
    return *spec;
  }
  const auto& target = std::get<CensoringTarget>(config.censoring);
  if (target.model == CensoringModel::None) {
    return CensoringSpec::none();
  }
  return calibrate_censoring(target.model, config.lifetime, target.proportion);
}

WarpSpeedPools warp_speed_pools(const PowerStudyConfig& config) {
  validate(config);
  WarpSpeedPools pools;
  pools.censoring = resolve_censoring(config);
  const auto& specs = config.statistics;
  const auto columns = static_cast<Index>(specs.size());
  pools.observed.resize(config.reps, columns);
  pools.bootstrap.resize(config.reps, columns);

  std::atomic<long long> redraws{0};
  const long long max_redraws = 10LL * config.reps;
  parallel_for(static_cast<std::size_t>(config.reps), config.threads, [&](std::size_t r) {
    Rng rng = derived_stream(config.seed, r);
    CensoredSample sample;
    WeibullParams mle;
    std::vector<double> observed;
    for (;;) {
      sample = sample_censored(config.lifetime, pools.censoring, config.n, rng);
      try {
        mle = weibull_mle(sample);
        observed = evaluate_all(specs, sample, mle);
        break;
      } catch (const NumericError&) {
      } catch (const DomainError&) {
      }
      if (++redraws > max_redraws) {
        throw NumericError("too many degenerate samples drawn from " + config.lifetime.label());
      }
    }
    const CensoringResampler censoring(sample, mle, config.tail);
    const auto boot = replicate_with_budget(sample.size(), mle, censoring, specs, rng, redraws, max_redraws);
    for (Index s = 0; s < columns; ++s) {
      pools.observed(static_cast<Index>(r), s) = observed[static_cast<std::size_t>(s)];
      pools.bootstrap(static_cast<Index>(r), s) = boot[static_cast<std::size_t>(s)];
    }
  });
  pools.audit.draws = config.reps;
  pools.audit.redraws = redraws.load();
  return pools;
}

PowerResult warp_speed_power(const PowerStudyConfig& config) {
  const WarpSpeedPools pools = warp_speed_pools(config);
  PowerResult out;
  out.censoring = pools.censoring;
  out.audit = pools.audit;
  out.redraw_warning = static_cast<double>(pools.audit.redraws) > 0.01 * config.reps;
  for (std::size_t s = 0; s < config.statistics.size(); ++s) {
    const auto col = static_cast<Index>(s);
    const double c = critical_value_from(pools.bootstrap.col(col), config.alpha);
    const double power = static_cast<double>((pools.observed.col(col) > c).count()) / config.reps;
    out.entries.push_back({config.statistics[s], power, std::sqrt(power * (1.0 - power) / config.reps), c});
  }
  return out;
}

Eigen::ArrayXXd monte_carlo_null(const std::vector<StatisticSpec>& specs, int n, int reps, std::uint64_t seed,
                                 unsigned threads) {
  validate_all(specs);
  require_replications(reps);
  if (n < 2) {
    throw ConfigError("null simulation needs n >= 2");
  }
  Eigen::ArrayXXd out(reps, static_cast<Index>(specs.size()));
  std::atomic<long long> redraws{0};
  const long long max_redraws = 10LL * reps;
  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    Rng rng = derived_stream(seed, r);
    for (;;) {
      try {
        const auto values = evaluate_all(specs, full_sample(sample_weibull({1.0, 1.0}, n, rng)));
        for (std::size_t s = 0; s < values.size(); ++s) {
          out(static_cast<Index>(r), static_cast<Index>(s)) = values[s];
        }
        return;
      } catch (const NumericError&) {
      } catch (const DomainError&) {
      }
      if (++redraws > max_redraws) {
        throw NumericError("null simulation failed too often");
      }
    }
  });
  return out;
}

}  // namespace wgof
