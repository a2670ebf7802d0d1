#include "wgof/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include "wgof/quadrature.hpp"

namespace wgof {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double upper_support(const AlternativeSpec& spec) {
  return spec.family == Family::Beta ? 1.0 : std::numeric_limits<double>::infinity();
}

double draw_gamma(double shape, Rng& rng) {
  std::gamma_distribution<double> g(shape, 1.0);
  return g(rng);
}

template <typename F>
double integrate(F f, double lo, double hi) {
  if (!(hi > lo)) {
    return 0.0;
  }
  const auto result = integrate_abs(f, lo, hi, 1e-10 * std::max(1.0, hi - lo), 40);
  if (!std::isfinite(result.value) || result.error > 1e-10 * std::max(1.0, hi - lo)) {
    throw NumericError("censoring probability quadrature did not reach 1e-10 (error estimate " +
                       format_number(result.error) + ")");
  }
  return result.value;
}

}  // namespace

void validate(const WeibullParams& params) {
  if (!(params.lambda > 0.0) || !(params.theta > 0.0) || !std::isfinite(params.lambda) ||
      !std::isfinite(params.theta)) {
    throw DomainError("Weibull parameters must be finite and positive");
  }
}

CensoredSample full_sample(const Vector& times) {
  return {times, Indicators::Ones(times.size())};
}

void validate(const CensoredSample& sample) {
  if (sample.times.size() != sample.deltas.size()) {
    throw DomainError("times and deltas differ in length");
  }
  for (Index i = 0; i < sample.size(); ++i) {
    if (!(sample.times[i] > 0.0) || !std::isfinite(sample.times[i])) {
      throw DomainError("observation " + std::to_string(i + 1) + " is not a positive finite time");
    }
    if (sample.deltas[i] != 0 && sample.deltas[i] != 1) {
      throw DomainError("observation " + std::to_string(i + 1) + " has an indicator outside {0,1}");
    }
  }
}

std::string AlternativeSpec::label() const {
  switch (family) {
    case Family::Weibull:
      return second == 1.0 ? "W(" + format_number(first) + ")"
                           : "W(" + format_number(first) + ",scale=" + format_number(second) + ")";
    case Family::Gamma:
      return "Gamma(" + format_number(first) + ")";
    case Family::Lognormal:
      return "LN(" + format_number(first) + ")";
    case Family::ChiSquare:
      return "Chi2(" + format_number(first) + ")";
    case Family::Beta:
      return "beta(" + format_number(first) + "," + format_number(second) + ")";
    case Family::Lindley:
      return "Lind(" + format_number(first) + ")";
  }
  throw ConfigError("unsupported lifetime family");
}

void validate(const AlternativeSpec& spec) {
  switch (spec.family) {
    case Family::Weibull:
    case Family::Gamma:
    case Family::Lognormal:
    case Family::ChiSquare:
    case Family::Beta:
    case Family::Lindley:
      break;
    default:
      throw ConfigError("unsupported lifetime family");
  }
  if (!(spec.first > 0.0) || !(spec.second > 0.0) || !std::isfinite(spec.first) ||
      !std::isfinite(spec.second)) {
    throw ConfigError("lifetime parameters must be finite and positive: " + spec.label());
  }
}

double density(const AlternativeSpec& spec, double x) {
  if (!(x > 0.0) || x >= upper_support(spec)) {
    return 0.0;
  }
  const double t = spec.first;
  switch (spec.family) {
    case Family::Weibull: {
      const double z = x / spec.second;
      return t / spec.second * std::pow(z, t - 1.0) * std::exp(-std::pow(z, t));
    }
    case Family::Gamma:
      return boost::math::gamma_p_derivative(t, x);
    case Family::Lognormal: {
      const double l = std::log(x);
      return std::exp(-l * l / (2.0 * t * t)) / (t * x * std::sqrt(2.0 * std::numbers::pi));
    }
    case Family::ChiSquare:
      return 0.5 * boost::math::gamma_p_derivative(0.5 * t, 0.5 * x);
    case Family::Beta:
      return boost::math::ibeta_derivative(spec.first, spec.second, x);
    case Family::Lindley:
      return t * t / (t + 1.0) * (1.0 + x) * std::exp(-t * x);
  }
  throw ConfigError("unsupported lifetime family");
}

double survival(const AlternativeSpec& spec, double x) {
  if (!(x > 0.0)) {
    return 1.0;
  }
  if (x >= upper_support(spec)) {
    return 0.0;
  }
  const double t = spec.first;
  switch (spec.family) {
    case Family::Weibull:
      return std::exp(-std::pow(x / spec.second, t));
    case Family::Gamma:
      return boost::math::gamma_q(t, x);
    case Family::Lognormal:
      return 0.5 * std::erfc(std::log(x) / (t * std::numbers::sqrt2));
    case Family::ChiSquare:
      return boost::math::gamma_q(0.5 * t, 0.5 * x);
    case Family::Beta:
      return boost::math::ibetac(spec.first, spec.second, x);
    case Family::Lindley:
      return (1.0 + t * x / (t + 1.0)) * std::exp(-t * x);
  }
  throw ConfigError("unsupported lifetime family");
}

double cdf(const AlternativeSpec& spec, double x) {
  if (!(x > 0.0)) {
    return 0.0;
  }
  if (x >= upper_support(spec)) {
    return 1.0;
  }
  const double t = spec.first;
  switch (spec.family) {
    case Family::Weibull:
      return -std::expm1(-std::pow(x / spec.second, t));
    case Family::Gamma:
      return boost::math::gamma_p(t, x);
    case Family::Lognormal:
      return 0.5 * std::erfc(-std::log(x) / (t * std::numbers::sqrt2));
    case Family::ChiSquare:
      return boost::math::gamma_p(0.5 * t, 0.5 * x);
    case Family::Beta:
      return boost::math::ibeta(spec.first, spec.second, x);
    case Family::Lindley:
      return 1.0 - survival(spec, x);
  }
  throw ConfigError("unsupported lifetime family");
}

double inverse_survival(const AlternativeSpec& spec, double s) {
  if (!(s > 0.0) || !(s < 1.0)) {
    throw DomainError("inverse_survival needs s in (0,1)");
  }
  const double t = spec.first;
  switch (spec.family) {
    case Family::Weibull:
      return spec.second * std::pow(-std::log(s), 1.0 / t);
    case Family::Gamma:
      return boost::math::gamma_q_inv(t, s);
    case Family::Lognormal:
      return std::exp(t * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * s));
    case Family::ChiSquare:
      return 2.0 * boost::math::gamma_q_inv(0.5 * t, s);
    case Family::Beta:
      return boost::math::ibetac_inv(spec.first, spec.second, s);
    case Family::Lindley: {
      // (1 + theta + theta x) exp(-(1 + theta + theta x)) = s (1 + theta) exp(-(1 + theta)),
      // solved on the lower real branch because 1 + theta + theta x >= 1.
      const double z = -s * (1.0 + t) * std::exp(-(1.0 + t));
      const double w = boost::math::lambert_wm1(z);
      return std::max(0.0, (-w - 1.0 - t) / t);
    }
  }
  throw ConfigError("unsupported lifetime family");
}

double mean(const AlternativeSpec& spec) {
  const double t = spec.first;
  switch (spec.family) {
    case Family::Weibull:
      return spec.second * std::tgamma(1.0 + 1.0 / t);
    case Family::Gamma:
    case Family::ChiSquare:
      return t;
    case Family::Lognormal:
      return std::exp(0.5 * t * t);
    case Family::Beta:
      return spec.first / (spec.first + spec.second);
    case Family::Lindley:
      return (t + 2.0) / (t * (t + 1.0));
  }
  throw ConfigError("unsupported lifetime family");
}

void validate(const CensoringSpec& spec) {
  switch (spec.model) {
    case CensoringModel::None:
      return;
    case CensoringModel::Exponential:
    case CensoringModel::Uniform:
    case CensoringModel::KoziolGreen:
      if (!(spec.param > 0.0) || !std::isfinite(spec.param)) {
        throw ConfigError("censoring parameter must be finite and positive");
      }
      return;
  }
  throw ConfigError("unsupported censoring model");
}

std::string to_string(CensoringModel model) {
  switch (model) {
    case CensoringModel::None:
      return "none";
    case CensoringModel::Exponential:
      return "exponential";
    case CensoringModel::Uniform:
      return "uniform";
    case CensoringModel::KoziolGreen:
      return "koziol-green";
  }
  return "unknown";
}

double ev01_cdf(double x) { return -std::expm1(-std::exp(x)); }

double ev01_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("ev01_quantile needs p in (0,1)");
  }
  return std::log(-std::log1p(-p));
}

double weibull_from_uniform(const WeibullParams& params, double u) {
  return params.lambda * std::pow(-std::log(u), 1.0 / params.theta);
}

Vector sample_weibull(const WeibullParams& params, Index n, Rng& rng) {
  validate(params);
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    out[i] = weibull_from_uniform(params, uniform_open(rng));
  }
  return out;
}

Vector sample_alternative(const AlternativeSpec& spec, Index n, Rng& rng) {
  validate(spec);
  Vector out(n);
  const double t = spec.first;
  switch (spec.family) {
    case Family::Weibull:
      return sample_weibull({spec.second, t}, n, rng);
    case Family::Gamma:
      for (Index i = 0; i < n; ++i) out[i] = draw_gamma(t, rng);
      break;
    case Family::Lognormal: {
      std::normal_distribution<double> normal(0.0, t);
      for (Index i = 0; i < n; ++i) out[i] = std::exp(normal(rng));
      break;
    }
    case Family::ChiSquare:
      for (Index i = 0; i < n; ++i) out[i] = 2.0 * draw_gamma(0.5 * t, rng);
      break;
    case Family::Beta:
      for (Index i = 0; i < n; ++i) {
        const double a = draw_gamma(spec.first, rng);
        const double b = draw_gamma(spec.second, rng);
        out[i] = a / (a + b);
      }
      break;
    case Family::Lindley:
      // Mixture: Exp(theta) w.p. theta/(theta+1), Gamma(2, rate theta) otherwise.
      for (Index i = 0; i < n; ++i) {
        const bool exponential = uniform_open(rng) < t / (t + 1.0);
        double x = -std::log(uniform_open(rng));
        if (!exponential) {
          x -= std::log(uniform_open(rng));
        }
        out[i] = x / t;
      }
      break;
  }
  return out;
}

Vector sample_censoring_times(const CensoringSpec& censor, const AlternativeSpec& lifetime, Index n,
                              Rng& rng) {
  validate(censor);
  Vector out(n);
  switch (censor.model) {
    case CensoringModel::None:
      out.setConstant(std::numeric_limits<double>::infinity());
      break;
    case CensoringModel::Exponential:
      for (Index i = 0; i < n; ++i) out[i] = -std::log(uniform_open(rng)) / censor.param;
      break;
    case CensoringModel::Uniform:
      for (Index i = 0; i < n; ++i) out[i] = censor.param * uniform_open(rng);
      break;
    case CensoringModel::KoziolGreen: {
      constexpr double top = 1.0 - std::numeric_limits<double>::epsilon();
      for (Index i = 0; i < n; ++i) {
        const double s = std::clamp(std::pow(uniform_open(rng), 1.0 / censor.param),
                                    std::numeric_limits<double>::min(), top);
        out[i] = inverse_survival(lifetime, s);
      }
      break;
    }
  }
  return out;
}

CensoredSample apply_censoring(const Vector& lifetimes, const Vector& censoring_times) {
  if (lifetimes.size() != censoring_times.size()) {
    throw DomainError("lifetimes and censoring times differ in length");
  }
  CensoredSample out{lifetimes.min(censoring_times), (lifetimes <= censoring_times).cast<int>()};
  return out;
}

CensoredSample sample_censored(const AlternativeSpec& lifetime, const CensoringSpec& censor, Index n,
                               Rng& rng) {
  Vector x = sample_alternative(lifetime, n, rng);
  if (censor.model == CensoringModel::None) {
    return full_sample(x);
  }
  const Vector c = sample_censoring_times(censor, lifetime, n, rng);
  return apply_censoring(x, c);
}

double censoring_probability(const AlternativeSpec& lifetime, const CensoringSpec& censor) {
  validate(lifetime);
  validate(censor);
  const double top = upper_support(lifetime);
  switch (censor.model) {
    case CensoringModel::None:
      return 0.0;
    case CensoringModel::KoziolGreen:
      return censor.param / (1.0 + censor.param);
    case CensoringModel::Exponential: {
      // P(C < X) = E S_X(C); with v = exp(-mu c) this is the integral of S_X(-log v / mu) on (0,1).
      const double mu = censor.param;
      const double lo = std::isfinite(top) ? std::exp(-mu * top) : 0.0;
      return integrate([&](double v) { return survival(lifetime, -std::log(v) / mu); }, lo, 1.0);
    }
    case CensoringModel::Uniform: {
      const double b = censor.param;
      return integrate([&](double c) { return survival(lifetime, c); }, 0.0, std::min(b, top)) / b;
    }
  }
  throw ConfigError("unsupported censoring model");
}

CensoringSpec calibrate_censoring(CensoringModel model, const AlternativeSpec& lifetime, double target) {
  validate(lifetime);
  if (!(target > 0.0) || !(target < 1.0)) {
    throw CalibrationError("censoring proportion must lie in (0,1)");
  }
  switch (model) {
    case CensoringModel::None:
      throw CalibrationError("model 'none' cannot reach a positive censoring proportion");
    case CensoringModel::KoziolGreen:
      return CensoringSpec::koziol_green(target / (1.0 - target));
    case CensoringModel::Exponential:
    case CensoringModel::Uniform:
      break;
  }
  // Exponential: proportion increases with the rate. Uniform: decreases with the endpoint.
  const bool increasing = model == CensoringModel::Exponential;
  auto gap = [&](double param) {
    return censoring_probability(lifetime, {model, param}) - target;
  };
  const double start = increasing ? 1.0 / mean(lifetime) : 2.0 * mean(lifetime);
  double a = start;
  double ga = gap(a);
  if (ga == 0.0) {
    return {model, a};
  }
  const double factor = ((ga < 0.0) == increasing) ? 2.0 : 0.5;
  double b = a;
  double gb = ga;
  bool bracketed = false;
  for (int i = 0; i < 400 && !bracketed; ++i) {
    b = a * factor;
    gb = gap(b);
    bracketed = (gb < 0.0) != (ga < 0.0) || gb == 0.0;
    if (!bracketed) {
      a = b;
      ga = gb;
    }
  }
  if (!bracketed) {
    throw CalibrationError("could not bracket censoring proportion " + format_number(target) +
                           " for " + lifetime.label());
  }
  double lo = std::min(a, b);
  double hi = std::max(a, b);
  double glo = lo == a ? ga : gb;
  for (int i = 0; i < 200 && hi / lo - 1.0 > 1e-14; ++i) {
    const double mid = std::sqrt(lo * hi);
    const double gm = gap(mid);
    if (gm == 0.0) {
      return {model, mid};
    }
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return {model, std::sqrt(lo * hi)};
}

CensoringSpec calibrate_censoring(CensoringModel model, const WeibullParams& lifetime, double target) {
  validate(lifetime);
  return calibrate_censoring(model, AlternativeSpec::weibull(lifetime), target);
}

}  // namespace wgof
