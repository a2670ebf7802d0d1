#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "wgof/distributions.hpp"
#include "wgof/statistics.hpp"

using namespace wgof;

namespace {

CensoredSample small_censored(std::uint64_t index, Index max_n = 10) {
  Rng rng = derived_stream(4242, index);
  for (;;) {
    const Index n = 3 + static_cast<Index>((max_n - 2) * uniform_open(rng));
    const double shape = 0.5 + 2.5 * uniform_open(rng);
    const Vector x = sample_weibull({1.0, shape}, n, rng);
    const Vector c = sample_weibull({1.5, 1.0}, n, rng);
    CensoredSample s = apply_censoring(x, c);
    try {
      weibull_mle(s);
      return s;
    } catch (const NumericError&) {
    }
  }
}

struct Prepared {
  TransformedSample ts;
  KaplanMeierFit km;
};

Prepared prepare(const CensoredSample& s) {
  TransformedSample ts = transform(s, weibull_mle(s));
  KaplanMeierFit km = km_jumps(ts);
  return {ts, km};
}

// Jumps from the exact product formula, in double.
std::vector<double> oracle_jumps(const TransformedSample& ts) {
  const auto exact = oracle::km_jumps_exact(std::vector<int>(ts.deltas.begin(), ts.deltas.end()));
  std::vector<double> out;
  for (const auto& e : exact) out.push_back(static_cast<double>(e));
  return out;
}

}  // namespace

TEST_CASE("closed forms match the direct integral on 100 censored samples") {
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto [ts, km] = prepare(small_censored(r));
    CAPTURE(r);
    for (double a : {1.0, 5.0, 10.0}) {
      CAPTURE(a);
      const double s1 = stat_s1(ts, km, a).value;
      const double s2 = stat_s2(ts, km, a).value;
      CHECK(s1 == doctest::Approx(stat_oracle(ts, km, OracleWeight::Gaussian, a).value).epsilon(1e-6));
      CHECK(s2 == doctest::Approx(stat_oracle(ts, km, OracleWeight::Laplace, a).value).epsilon(1e-6));
    }
  }
}

TEST_CASE("half-line oracle agrees with the full line") {
  const auto [ts, km] = prepare(small_censored(500));
  const double full = stat_oracle(ts, km, OracleWeight::Laplace, 2.0).value;
  const double half = stat_oracle(ts, km, OracleWeight::Laplace, 2.0, {true, 1e-10}).value;
  CHECK(half == doctest::Approx(full).epsilon(1e-9));
}

TEST_CASE("single observation closed form") {
  // One point Y with unit mass: S1 = sqrt(pi/a) (1/(2a) + (1 - e^Y)^2), S2 = 4/a^3 + 2 (1 - e^Y)^2 / a.
  TransformedSample ts;
  ts.y = Vector::Constant(1, 0.3);
  ts.deltas = Indicators::Ones(1);
  const KaplanMeierFit km = km_jumps(ts);
  const double b = 1.0 - std::exp(0.3);
  for (double a : {0.5, 2.0}) {
    CHECK(stat_s1(ts, km, a).value == doctest::Approx(std::sqrt(M_PI / a) * (1.0 / (2 * a) + b * b)));
    CHECK(stat_s2(ts, km, a).value == doctest::Approx(4.0 / (a * a * a) + 2.0 * b * b / a));
  }
}

TEST_CASE("KS equals the supremum of |G_n - G| by exhaustive scan") {
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto [ts, km] = prepare(small_censored(r, 30));
    const auto jumps = oracle_jumps(ts);
    // The supremum is attained at a support point, from the left or the right.
    double sup = 0.0;
    double cum = 0.0;
    for (Index j = 0; j < ts.size(); ++j) {
      const double g = oracle::ev_cdf(ts.y[j]);
      sup = std::max(sup, std::abs(g - cum));
      cum += jumps[static_cast<std::size_t>(j)];
      // Tied support points share a single right limit.
      if (j + 1 == ts.size() || ts.y[j + 1] != ts.y[j]) sup = std::max(sup, std::abs(cum - g));
    }
    CAPTURE(r);
    CHECK(stat_ks(ts, km).value == doctest::Approx(sup).epsilon(1e-12));
  }
}

TEST_CASE("CM equals n times the integral of (G_n(G^-1(u)) - u)^2") {
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto [ts, km] = prepare(small_censored(r, 30));
    const auto jumps = oracle_jumps(ts);
    const int steps = 400000;
    double total = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double u = (i + 0.5) / steps;
      const double y = std::log(-std::log1p(-u));
      double g = 0.0;
      for (Index j = 0; j < ts.size() && ts.y[j] <= y; ++j) g += jumps[static_cast<std::size_t>(j)];
      total += (g - u) * (g - u);
    }
    const double expected = static_cast<double>(ts.size()) * total / steps;
    CAPTURE(r);
    CHECK(stat_cm(ts, km).value == doctest::Approx(expected).epsilon(1e-4));
  }
}

TEST_CASE("CM and KS in the full-sample case reduce to the textbook formulas") {
  Rng rng = derived_stream(8, 0);
  const CensoredSample s = full_sample(sample_weibull({2.0, 1.3}, 40, rng));
  const auto [ts, km] = prepare(s);
  const double n = 40.0;
  double cm = 1.0 / (12.0 * n);
  double ks = 0.0;
  for (int j = 0; j < 40; ++j) {
    const double g = oracle::ev_cdf(ts.y[j]);
    cm += std::pow(g - (2.0 * j + 1.0) / (2.0 * n), 2);
    ks = std::max({ks, (j + 1) / n - g, g - j / n});
  }
  CHECK(stat_cm(ts, km).value == doctest::Approx(cm).epsilon(1e-12));
  CHECK(stat_ks(ts, km).value == doctest::Approx(ks).epsilon(1e-12));
}

TEST_CASE("LS with full samples is the Liao-Shimokawa statistic") {
  Rng rng = derived_stream(8, 1);
  const CensoredSample s = full_sample(sample_weibull({1.0, 0.7}, 25, rng));
  const auto [ts, km] = prepare(s);
  double total = 0.0;
  const double n = 25.0;
  for (int j = 0; j < 25; ++j) {
    const double g = oracle::ev_cdf(ts.y[j]);
    total += std::max((j + 1) / n - g, g - j / n) / std::sqrt(g * (1 - g));
  }
  CHECK(stat_ls(ts, km).value == doctest::Approx(total / std::sqrt(n)).epsilon(1e-12));
}

TEST_CASE("LS with censoring uses Kaplan-Meier plotting positions") {
  const auto [ts, km] = prepare(small_censored(3, 20));
  const auto jumps = oracle_jumps(ts);
  double total = 0.0;
  double below = 0.0;
  for (Index j = 0; j < ts.size(); ++j) {
    const double g = oracle::ev_cdf(ts.y[j]);
    const double above = below + jumps[static_cast<std::size_t>(j)];
    total += std::max(above - g, g - below) / std::sqrt(g * (1 - g));
    below = above;
  }
  CHECK(stat_ls(ts, km).value == doctest::Approx(total / std::sqrt(static_cast<double>(ts.size()))).epsilon(1e-12));
}

TEST_CASE("KR equals the printed Riemann sum") {
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto [ts, km] = prepare(small_censored(r, 20));
    const auto jumps = oracle_jumps(ts);
    for (auto [a, m] : {std::pair{-5.0, 100}, {-2.0, 37}, {1.0, 10}}) {
      long double total = 0.0L;
      for (int k = -m; k <= -1; ++k) {
        const long double t = static_cast<long double>(k) / m;
        long double psi = 0.0L;
        for (Index j = 0; j < ts.size(); ++j) psi += jumps[static_cast<std::size_t>(j)] * std::exp(-ts.y[j] * t);
        const long double gap = psi - std::tgamma(1.0L - t);
        total += gap * gap * std::exp(a * t - std::exp(a * t));
      }
      const double expected = static_cast<double>(ts.size() * total);
      CAPTURE(r);
      CHECK(stat_kr(ts, km, a, m).value == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("KR divided by m converges to the integral form") {
  const auto [ts, km] = prepare(small_censored(17, 20));
  const double a = -5.0;
  auto integrand = [&](double t) {
    double psi = 0.0;
    for (Index j = 0; j < ts.size(); ++j) psi += km.jumps[j] * std::exp(-t * ts.y[j]);
    const double gap = psi - std::tgamma(1.0 - t);
    return gap * gap * std::exp(a * t - std::exp(a * t));
  };
  const double integral = static_cast<double>(ts.size()) *
                          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -1.0, 0.0, 15, 1e-13);
  const double e1 = std::abs(stat_kr(ts, km, a, 1000).value / 1000 - integral);
  const double e2 = std::abs(stat_kr(ts, km, a, 10000).value / 10000 - integral);
  CHECK(e1 < 2e-2 * integral);
  CHECK(e2 < 2e-3 * integral);
  // First-order Riemann convergence: ten times the points, about a tenth of the error.
  CHECK(e2 < 0.2 * e1);
}

TEST_CASE("gamma function values used by KR") {
  CHECK(std::tgamma(1.5) == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-15));
  CHECK(std::tgamma(2.0) == 1.0);
  CHECK(std::tgamma(1.0) == 1.0);
  CHECK(std::tgamma(1.25) == doctest::Approx(0.9064024770554771).epsilon(1e-15));
}

TEST_CASE("statistics are invariant under c T^p") {
  const CensoredSample s = small_censored(21, 30);
  CensoredSample u = s;
  u.times = 7.5 * s.times.pow(0.4);
  const auto specs = table_statistics();
  const auto v = evaluate_all(specs, s);
  const auto w = evaluate_all(specs, u);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CAPTURE(specs[i].label());
    CHECK(w[i] == doctest::Approx(v[i]).epsilon(1e-8));
  }
}

TEST_CASE("statistics are nonnegative") {
  for (std::uint64_t r = 0; r < 30; ++r) {
    const auto v = evaluate_all(table_statistics(), small_censored(r, 40));
    for (double x : v) CHECK(x >= 0.0);
  }
}

TEST_CASE("specs, labels and validation") {
  CHECK(StatisticSpec::s1(5).label() == "S1(a=5)");
  CHECK(StatisticSpec::s2(0.5).label() == "S2(a=0.5)");
  CHECK(StatisticSpec::kr().label() == "KR");
  CHECK(StatisticSpec::kr(-3, 50).label() == "KR(a=-3;m=50)");
  const auto table = table_statistics();
  REQUIRE(table.size() == 10);
  CHECK(table[0].label() == "KS");
  CHECK(table[3].label() == "KR");
  CHECK(table[5] == StatisticSpec::s1(5));
  CHECK(table[9] == StatisticSpec::s2(10));
  CHECK_THROWS_AS(validate(StatisticSpec::s1(0.0)), ConfigError);
  CHECK_THROWS_AS(validate(StatisticSpec::kr(-5, 0)), ConfigError);
  CHECK_THROWS_AS(validate(StatisticSpec{static_cast<StatisticKind>(42), 1.0, 1}), ConfigError);
  const auto [ts, km] = prepare(small_censored(0));
  CHECK_THROWS_AS(stat_s1(ts, km, -1.0), DomainError);
  CHECK_THROWS_AS(stat_s2(ts, km, 0.0), DomainError);
}

TEST_CASE("evaluate dispatches to the matching statistic") {
  const auto [ts, km] = prepare(small_censored(9));
  CHECK(evaluate(StatisticSpec::s1(5), ts, km).value == stat_s1(ts, km, 5).value);
  CHECK(evaluate(StatisticSpec::kr(), ts, km).value == stat_kr(ts, km).value);
  CHECK(evaluate(StatisticSpec::cm(), ts, km).value == stat_cm(ts, km).value);
}
