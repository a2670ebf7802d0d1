#pragma once

#include <string>

#include "wgof/rng.hpp"
#include "wgof/types.hpp"

namespace wgof {

/// Lifetime families used as alternatives in power studies.
enum class Family { Weibull, Gamma, Lognormal, ChiSquare, Beta, Lindley };

/// A lifetime law in the unit-scale parameterisation of the alternatives table.
///
/// | family    | first        | second                | density                                   |
/// |-----------|--------------|-----------------------|-------------------------------------------|
/// | Weibull   | shape theta  | scale (default 1)     | theta x^(theta-1) exp(-x^theta), scale 1  |
/// | Gamma     | shape theta  | -                     | x^(theta-1) exp(-x) / Gamma(theta)        |
/// | Lognormal | theta        | -                     | exp(-log^2 x / 2 theta^2) / (theta x sqrt(2 pi)) |
/// | ChiSquare | dof theta    | -                     | chi-square with theta degrees of freedom  |
/// | Beta      | alpha        | theta                 | x^(alpha-1) (1-x)^(theta-1) / B(alpha, theta) |
/// | Lindley   | theta        | -                     | theta^2/(theta+1) (1+x) exp(-theta x)     |
struct AlternativeSpec {
  Family family = Family::Weibull;
  double first = 1.0;
  double second = 1.0;

  static AlternativeSpec weibull(double shape, double scale = 1.0) { return {Family::Weibull, shape, scale}; }
  static AlternativeSpec weibull(const WeibullParams& p) { return {Family::Weibull, p.theta, p.lambda}; }
  static AlternativeSpec gamma(double shape) { return {Family::Gamma, shape, 1.0}; }
  static AlternativeSpec lognormal(double theta) { return {Family::Lognormal, theta, 1.0}; }
  static AlternativeSpec chi_square(double dof) { return {Family::ChiSquare, dof, 1.0}; }
  static AlternativeSpec beta(double alpha, double theta) { return {Family::Beta, alpha, theta}; }
  static AlternativeSpec lindley(double theta) { return {Family::Lindley, theta, 1.0}; }

  /// Table-style label, e.g. "LN(0.5)" or "beta(0.5,1)".
  std::string label() const;

  bool operator==(const AlternativeSpec&) const = default;
};

/// Throws ConfigError for an unknown family or nonpositive parameters.
void validate(const AlternativeSpec& spec);

double density(const AlternativeSpec& spec, double x);
double cdf(const AlternativeSpec& spec, double x);
double survival(const AlternativeSpec& spec, double x);
/// x such that survival(spec, x) = s, for s in (0, 1).
double inverse_survival(const AlternativeSpec& spec, double s);
double mean(const AlternativeSpec& spec);

enum class CensoringModel { None, Exponential, Uniform, KoziolGreen };

/// Censoring law. `param` is the exponential rate, the uniform upper endpoint,
/// or the Koziol-Green exponent beta; ignored for None.
struct CensoringSpec {
  CensoringModel model = CensoringModel::None;
  double param = 0.0;

  static CensoringSpec none() { return {}; }
  static CensoringSpec exponential(double rate) { return {CensoringModel::Exponential, rate}; }
  static CensoringSpec uniform(double upper) { return {CensoringModel::Uniform, upper}; }
  static CensoringSpec koziol_green(double beta) { return {CensoringModel::KoziolGreen, beta}; }

  bool operator==(const CensoringSpec&) const = default;
};

void validate(const CensoringSpec& spec);
std::string to_string(CensoringModel model);

/// Standard type I extreme value distribution function 1 - exp(-exp(x)).
double ev01_cdf(double x);
/// Inverse of ev01_cdf for p in (0, 1).
double ev01_quantile(double p);

/// Inverse transform lambda * (-log u)^(1/theta). Decreasing in u.
double weibull_from_uniform(const WeibullParams& params, double u);

Vector sample_weibull(const WeibullParams& params, Index n, Rng& rng);
Vector sample_alternative(const AlternativeSpec& spec, Index n, Rng& rng);

/// Censoring times for `n` subjects. Koziol-Green times are drawn with
/// survival S(c)^beta, S being the lifetime survival function.
Vector sample_censoring_times(const CensoringSpec& censor, const AlternativeSpec& lifetime, Index n,
                              Rng& rng);

/// T = min(X, C), delta = 1{X <= C}.
CensoredSample apply_censoring(const Vector& lifetimes, const Vector& censoring_times);

/// Lifetimes are drawn before censoring times, so model None reproduces
/// sample_alternative exactly under the same stream.
CensoredSample sample_censored(const AlternativeSpec& lifetime, const CensoringSpec& censor, Index n,
                               Rng& rng);

/// P(C < X) under the given lifetime and censoring laws, by quadrature.
double censoring_probability(const AlternativeSpec& lifetime, const CensoringSpec& censor);

/// Censoring parameter whose censoring probability equals `target`.
/// Koziol-Green is closed form; exponential and uniform use bisection on
/// the quadrature value. Throws CalibrationError when unreachable.
CensoringSpec calibrate_censoring(CensoringModel model, const AlternativeSpec& lifetime, double target);
CensoringSpec calibrate_censoring(CensoringModel model, const WeibullParams& lifetime, double target);

}  // namespace wgof
