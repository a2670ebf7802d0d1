#include "wgof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wgof/distributions.hpp"
#include "wgof/quadrature.hpp"

namespace wgof {

namespace {

using Matrix = Eigen::ArrayXXd;

void check_shapes(const TransformedSample& ts, const KaplanMeierFit& km) {
  if (ts.size() == 0) {
    throw DomainError("statistic of an empty sample");
  }
  if (km.size() != ts.size()) {
    throw DomainError("Kaplan-Meier fit does not match the transformed sample");
  }
}

// D(j, k) = Y_j - Y_k.
Matrix differences(const Vector& y) {
  const Index n = y.size();
  return y.replicate(1, n) - y.transpose().replicate(n, 1);
}

double quadratic_form(const Vector& w, const Matrix& kernel) {
  return w.matrix().dot((kernel.matrix() * w.matrix()));
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string StatisticSpec::label() const {
  switch (kind) {
    case StatisticKind::S1:
      return "S1(a=" + format_number(a) + ")";
    case StatisticKind::S2:
      return "S2(a=" + format_number(a) + ")";
    case StatisticKind::KS:
      return "KS";
    case StatisticKind::CM:
      return "CM";
    case StatisticKind::LS:
      return "LS";
    case StatisticKind::KR:
      if (a == -5.0 && m == 100) return "KR";
      return "KR(a=" + format_number(a) + ";m=" + std::to_string(m) + ")";
  }
  return "unknown";
}

void validate(const StatisticSpec& spec) {
  switch (spec.kind) {
    case StatisticKind::S1:
    case StatisticKind::S2:
      if (!(spec.a > 0.0) || !std::isfinite(spec.a)) {
        throw ConfigError(spec.label() + ": tuning parameter a must be positive");
      }
      return;
    case StatisticKind::KR:
      if (!std::isfinite(spec.a)) {
        throw ConfigError("KR: tuning parameter a must be finite");
      }
      if (spec.m < 1) {
        throw ConfigError("KR: m must be at least 1");
      }
      return;
    case StatisticKind::KS:
    case StatisticKind::CM:
    case StatisticKind::LS:
      return;
  }
  throw ConfigError("unknown statistic kind");
}

std::vector<StatisticSpec> table_statistics() {
  return {StatisticSpec::ks(),    StatisticSpec::cm(),    StatisticSpec::ls(),  StatisticSpec::kr(),
          StatisticSpec::s1(1),   StatisticSpec::s1(5),   StatisticSpec::s1(10), StatisticSpec::s2(1),
          StatisticSpec::s2(5),   StatisticSpec::s2(10)};
}

StatisticValue stat_s1(const TransformedSample& ts, const KaplanMeierFit& km, double a) {
  check_shapes(ts, km);
  if (!(a > 0.0)) {
    throw DomainError("S1 needs a > 0");
  }
  const Vector& y = ts.y;
  const Index n = y.size();
  const Vector b = 1.0 - y.exp();
  const Matrix d = differences(y);
  const Matrix d2 = d.square();
  const Matrix kernel =
      (-d2 / (4.0 * a)).exp() *
      (-(d2 - 2.0 * a) / (4.0 * a * a) + b.replicate(1, n) * d / a + (b.matrix() * b.matrix().transpose()).array());
  const double value = static_cast<double>(n) * std::sqrt(std::numbers::pi / a) * quadratic_form(km.jumps, kernel);
  return {value, StatisticSpec::s1(a)};
}

StatisticValue stat_s2(const TransformedSample& ts, const KaplanMeierFit& km, double a) {
  check_shapes(ts, km);
  if (!(a > 0.0)) {
    throw DomainError("S2 needs a > 0");
  }
  const Vector& y = ts.y;
  const Index n = y.size();
  const Vector b = 1.0 - y.exp();
  const Matrix d = differences(y);
  const Matrix d2 = d.square();
  const Matrix r = d2 + a * a;
  const Matrix kernel = -4.0 * a * (3.0 * d2 - a * a) / r.cube() + 8.0 * a * d * b.replicate(1, n) / r.square() +
                        2.0 * a * (b.matrix() * b.matrix().transpose()).array() / r;
  const double value = static_cast<double>(n) * quadratic_form(km.jumps, kernel);
  return {value, StatisticSpec::s2(a)};
}

StatisticValue stat_oracle(const TransformedSample& ts, const KaplanMeierFit& km, OracleWeight weight,
                           double a, const OracleOptions& options) {
  check_shapes(ts, km);
  if (!(a > 0.0)) {
    throw DomainError("oracle weight needs a > 0");
  }
  const Vector& y = ts.y;
  const Vector& w = km.jumps;
  const Vector b = 1.0 - y.exp();
  const double n = static_cast<double>(ts.size());

  auto integrand = [&](double t) {
    const Vector c = (t * y).cos();
    const Vector s = (t * y).sin();
    const double re = (w * (-t * s + b * c)).sum();
    const double im = (w * (t * c + b * s)).sum();
    const double weight_value = weight == OracleWeight::Gaussian ? std::exp(-a * t * t) : std::exp(-a * std::abs(t));
    return n * (re * re + im * im) * weight_value;
  };

  const double limit = weight == OracleWeight::Gaussian ? std::max(10.0, std::sqrt(60.0 / a))
                                                        : std::max(50.0, 60.0 / a);
  const int panels = static_cast<int>(std::ceil(limit));
  const double width = limit / panels;

  double total = 0.0;
  double error_total = 0.0;
  const double panel_tolerance = 0.25 * options.abs_tolerance / panels;
  auto add_panel = [&](double lo, double hi) {
    const auto r = integrate_abs(integrand, lo, hi, panel_tolerance, 20);
    total += r.value;
    error_total += r.error;
  };
  for (int p = 0; p < panels; ++p) {
    add_panel(p * width, (p + 1) * width);
  }
  if (options.half_line) {
    total *= 2.0;
    error_total *= 2.0;
  } else {
    for (int p = 0; p < panels; ++p) {
      add_panel(-(p + 1) * width, -p * width);
    }
  }
  if (!std::isfinite(total) || error_total > options.abs_tolerance) {
    throw NumericError("oracle quadrature did not reach tolerance (error estimate " + format_number(error_total) +
                       ")");
  }
  return {total, weight == OracleWeight::Gaussian ? StatisticSpec::s1(a) : StatisticSpec::s2(a)};
}

StatisticValue stat_ks(const TransformedSample& ts, const KaplanMeierFit& km) {
  check_shapes(ts, km);
  double sup = 0.0;
  for (Index j = 0; j < ts.size(); ++j) {
    const double fitted = ev01_cdf(ts.y[j]);
    sup = std::max({sup, km.cdf(ts.y[j]) - fitted, fitted - km.cdf_left(ts.y[j])});
  }
  return {sup, StatisticSpec::ks()};
}

StatisticValue stat_cm(const TransformedSample& ts, const KaplanMeierFit& km) {
  check_shapes(ts, km);
  const Index n = ts.size();
  // On [u_j, u_{j+1}) the step function equals cumulative(j); the integral
  // of (c - u)^2 over [p, q] is ((q - c)^3 - (p - c)^3) / 3.
  auto piece = [](double p, double q, double c) {
    const double hi = q - c;
    const double lo = p - c;
    return (hi * hi * hi - lo * lo * lo) / 3.0;
  };
  double total = 0.0;
  double left = 0.0;
  double level = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double u = ev01_cdf(ts.y[j]);
    total += piece(left, u, level);
    left = u;
    level = km.cumulative[j];
  }
  total += piece(left, 1.0, level);
  return {static_cast<double>(n) * total, StatisticSpec::cm()};
}

StatisticValue stat_ls(const TransformedSample& ts, const KaplanMeierFit& km) {
  check_shapes(ts, km);
  const Index n = ts.size();
  double total = 0.0;
  double below = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double e = std::exp(ts.y[j]);
    const double upper_tail = std::exp(-e);
    const double fitted = -std::expm1(-e);
    const double variance = fitted * upper_tail;
    if (!(variance > 0.0)) {
      throw DomainError("LS: fitted probability at Y = " + format_number(ts.y[j]) + " is 0 or 1");
    }
    const double above = km.cumulative[j];
    total += std::max(above - fitted, fitted - below) / std::sqrt(variance);
    below = above;
  }
  return {total / std::sqrt(static_cast<double>(n)), StatisticSpec::ls()};
}

StatisticValue stat_kr(const TransformedSample& ts, const KaplanMeierFit& km, double a, int m) {
  check_shapes(ts, km);
  if (m < 1) {
    throw DomainError("KR needs m >= 1");
  }
  const Vector& y = ts.y;
  const Vector& w = km.jumps;
  const double mm = static_cast<double>(m);
  double total = 0.0;
  for (int k = -m; k <= -1; ++k) {
    const double t = k / mm;
    // psi_n(t) = sum_j Delta_j e^{-t Y_j}, accumulated relative to the largest exponent.
    const Vector x = -t * y;
    double shift = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < y.size(); ++j) {
      if (w[j] > 0.0) shift = std::max(shift, x[j]);
    }
    const double psi = std::exp(shift) * (w * (x - shift).exp()).sum();
    if (!std::isfinite(psi)) {
      throw NumericError("KR: empirical Laplace transform overflows at t = " + format_number(t));
    }
    const double gap = psi - std::tgamma(1.0 - t);
    const double at = a * t;
    total += gap * gap * std::exp(at - std::exp(at));
  }
  return {static_cast<double>(ts.size()) * total, StatisticSpec::kr(a, m)};
}

StatisticValue evaluate(const StatisticSpec& spec, const TransformedSample& ts, const KaplanMeierFit& km) {
  validate(spec);
  switch (spec.kind) {
    case StatisticKind::S1:
      return stat_s1(ts, km, spec.a);
    case StatisticKind::S2:
      return stat_s2(ts, km, spec.a);
    case StatisticKind::KS:
      return stat_ks(ts, km);
    case StatisticKind::CM:
      return stat_cm(ts, km);
    case StatisticKind::LS:
      return stat_ls(ts, km);
    case StatisticKind::KR:
      return stat_kr(ts, km, spec.a, spec.m);
  }
  throw ConfigError("unknown statistic kind");
}

std::vector<double> evaluate_all(const std::vector<StatisticSpec>& specs, const CensoredSample& sample,
                                 const WeibullParams& mle) {
  const TransformedSample ts = transform(sample, mle);
  const KaplanMeierFit km = km_jumps(ts);
  std::vector<double> out;
  out.reserve(specs.size());
  for (const auto& spec : specs) {
    const double v = evaluate(spec, ts, km).value;
    if (!std::isfinite(v)) {
      throw NumericError(spec.label() + " evaluated to a non-finite value");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> evaluate_all(const std::vector<StatisticSpec>& specs, const CensoredSample& sample) {
  return evaluate_all(specs, sample, weibull_mle(sample));
}

}  // namespace wgof
