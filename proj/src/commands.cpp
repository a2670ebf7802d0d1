#include "wgof/commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "wgof/dataset.hpp"

namespace wgof {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double to_double(const std::string& text, const std::string& context) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(context + ": '" + text + "' is not a number");
  }
  return v;
}

int to_int(const std::string& text, const std::string& context) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(context + ": '" + text + "' is not an integer");
  }
  return v;
}

std::string number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

std::string censoring_label(const CensoringTarget& target) {
  if (target.model == CensoringModel::None) return "full";
  return to_string(target.model) + " " + number(100.0 * target.proportion) + "%";
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ';';
    out += p;
  }
  return out;
}

void require_positive_count(long long value, const char* what) {
  if (value < 1) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

StatisticSpec parse_statistic(const std::string& text) {
  const auto parts = split(lower(text), ':');
  const std::string& name = parts.front();
  const std::string context = "statistic '" + text + "'";
  StatisticSpec spec;
  if (name == "ks" || name == "cm" || name == "ls") {
    if (parts.size() != 1) throw ConfigError(context + " takes no parameters");
    spec = name == "ks" ? StatisticSpec::ks() : name == "cm" ? StatisticSpec::cm() : StatisticSpec::ls();
  } else if (name == "kr") {
    if (parts.size() > 3) throw ConfigError(context + ": expected KR[:a[:m]]");
    spec = StatisticSpec::kr();
    if (parts.size() >= 2) spec.a = to_double(parts[1], context);
    if (parts.size() == 3) spec.m = to_int(parts[2], context);
  } else if (name == "s1" || name == "s2") {
    if (parts.size() != 2) throw ConfigError(context + ": expected " + name + ":a");
    const double a = to_double(parts[1], context);
    spec = name == "s1" ? StatisticSpec::s1(a) : StatisticSpec::s2(a);
  } else {
    throw ConfigError("unknown statistic '" + text + "' (expected KS, CM, LS, KR, S1:a or S2:a)");
  }
  validate(spec);
  return spec;
}

std::vector<StatisticSpec> parse_statistics(const std::vector<std::string>& texts) {
  if (texts.empty() || (texts.size() == 1 && lower(texts.front()) == "all")) return table_statistics();
  std::vector<StatisticSpec> out;
  for (const auto& t : texts) out.push_back(parse_statistic(t));
  return out;
}

AlternativeSpec parse_alternative(const std::string& text) {
  std::string normalised = text;
  if (const auto open = normalised.find('('); open != std::string::npos && normalised.back() == ')') {
    normalised = normalised.substr(0, open) + ":" + normalised.substr(open + 1, normalised.size() - open - 2);
  }
  const auto colon = normalised.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("alternative '" + text + "': expected name:parameters, e.g. LN:0.5");
  }
  const std::string name = lower(normalised.substr(0, colon));
  const auto fields = split(normalised.substr(colon + 1), ',');
  const std::string context = "alternative '" + text + "'";
  std::vector<double> p;
  for (const auto& f : fields) p.push_back(to_double(f, context));

  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi) throw ConfigError(context + ": wrong number of parameters");
  };
  AlternativeSpec spec;
  if (name == "w" || name == "weibull") {
    expect(1, 2);
    spec = AlternativeSpec::weibull(p[0], p.size() == 2 ? p[1] : 1.0);
  } else if (name == "gamma" || name == "g") {
    expect(1, 1);
    spec = AlternativeSpec::gamma(p[0]);
  } else if (name == "ln" || name == "lognormal") {
    expect(1, 1);
    spec = AlternativeSpec::lognormal(p[0]);
  } else if (name == "chi2" || name == "chisq") {
    expect(1, 1);
    spec = AlternativeSpec::chi_square(p[0]);
  } else if (name == "beta") {
    expect(2, 2);
    spec = AlternativeSpec::beta(p[0], p[1]);
  } else if (name == "lind" || name == "lindley") {
    expect(1, 1);
    spec = AlternativeSpec::lindley(p[0]);
  } else {
    throw ConfigError(context + ": unknown family (expected W, gamma, LN, chi2, beta or lindley)");
  }
  validate(spec);
  return spec;
}

std::vector<AlternativeSpec> table_alternatives() {
  return {AlternativeSpec::weibull(0.5),  AlternativeSpec::weibull(1.5),   AlternativeSpec::weibull(2.0),
          AlternativeSpec::gamma(2.0),    AlternativeSpec::gamma(3.0),     AlternativeSpec::lognormal(0.5),
          AlternativeSpec::lognormal(1.0), AlternativeSpec::chi_square(8.0), AlternativeSpec::chi_square(10.0),
          AlternativeSpec::beta(1.0, 1.0), AlternativeSpec::beta(0.5, 1.0), AlternativeSpec::lindley(0.5),
          AlternativeSpec::lindley(2.0)};
}

std::vector<AlternativeSpec> null_alternatives() {
  return {AlternativeSpec::weibull(0.5), AlternativeSpec::weibull(1.5), AlternativeSpec::weibull(2.0)};
}

std::vector<CensoringTarget> parse_censoring(const std::string& text) {
  const std::string t = lower(text);
  if (t == "none" || t == "full") return {CensoringTarget{}};
  const auto colon = t.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("censoring '" + text + "': expected none or model:proportion");
  }
  const std::string model = t.substr(0, colon);
  const double p = to_double(t.substr(colon + 1), "censoring '" + text + "'");
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("censoring '" + text + "': proportion must lie in (0,1)");
  }
  if (model == "exponential" || model == "exp") return {{CensoringModel::Exponential, p}};
  if (model == "uniform" || model == "unif") return {{CensoringModel::Uniform, p}};
  if (model == "koziol-green" || model == "kg") return {{CensoringModel::KoziolGreen, p}};
  if (model == "all") {
    return {{CensoringModel::Exponential, p}, {CensoringModel::Uniform, p}, {CensoringModel::KoziolGreen, p}};
  }
  throw ConfigError("censoring '" + text + "': unknown model (expected exponential, uniform, koziol-green or all)");
}

CensoringResampler::Tail parse_tail(const std::string& text) {
  const std::string t = lower(text);
  if (t == "infinite") return CensoringResampler::Tail::Infinite;
  if (t == "largest") return CensoringResampler::Tail::LargestObservation;
  throw ConfigError("censoring tail '" + text + "': expected infinite or largest");
}

std::string to_string(CensoringResampler::Tail tail) {
  return tail == CensoringResampler::Tail::Infinite ? "infinite" : "largest";
}

CommandOutput run_fit(const FitOptions& options) {
  const CensoredSample sample = ingest(options.data);
  const WeibullParams mle = weibull_mle(sample);
  const Eigen::Vector2d se = mle_standard_errors(sample, mle);
  const std::string config = join({"n=" + std::to_string(sample.size()), "events=" + std::to_string(sample.events())});

  CommandOutput out;
  auto& table = out.table;
  table.note("n = " + std::to_string(sample.size()) + ", events = " + std::to_string(sample.events()) +
             ", censored fraction = " + number(sample.censored_fraction()));
  table.add({"", "lambda", mle.lambda, se[0], config});
  table.add({"", "theta", mle.theta, se[1], config});
  table.add({"", "loglik", weibull_loglik(sample, mle), 0.0, config});
  const auto values = evaluate_all(options.statistics, sample, mle);
  for (std::size_t s = 0; s < values.size(); ++s) {
    table.add({"", options.statistics[s].label(), values[s], 0.0, config});
  }
  return out;
}

CommandOutput run_test(const TestOptions& options) {
  const CensoredSample sample = ingest(options.data);
  const BootstrapTest result =
      bootstrap_test(sample, options.statistics, options.replications, options.seed, options.threads, options.tail);
  const std::string config = join({"lambda=" + number(result.mle.lambda), "theta=" + number(result.mle.theta),
                                   "censored=" + number(result.censored_fraction),
                                   "B=" + std::to_string(options.replications),
                                   "seed=" + std::to_string(options.seed), "tail=" + to_string(options.tail)});
  CommandOutput out;
  auto& table = out.table;
  table.note("lambda = " + number(result.mle.lambda) + ", theta = " + number(result.mle.theta) +
             ", censored fraction = " + number(result.censored_fraction) +
             ", B = " + std::to_string(options.replications));
  for (const auto& o : result.outcomes) {
    table.add({"", o.spec.label(), o.p_value, o.standard_error, config});
  }
  if (result.audit.redraws > 0) {
    out.warnings.push_back(std::to_string(result.audit.redraws) + " bootstrap replicates were redrawn after a failed refit");
  }
  return out;
}

void apply_power_config(const std::string& json_text, PowerOptions& options) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  auto strings = [](const nlohmann::json& v, const std::string& key) {
    std::vector<std::string> out;
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& item : v) {
        if (!item.is_string()) throw ConfigError("config: '" + key + "' entries must be strings");
        out.push_back(item.get<std::string>());
      }
    } else {
      throw ConfigError("config: '" + key + "' must be a string or an array of strings");
    }
    return out;
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "alternatives") {
        options.alternatives.clear();
        for (const auto& s : strings(value, key)) options.alternatives.push_back(parse_alternative(s));
      } else if (key == "censoring") {
        options.censoring.clear();
        for (const auto& s : strings(value, key)) {
          const auto targets = parse_censoring(s);
          options.censoring.insert(options.censoring.end(), targets.begin(), targets.end());
        }
      } else if (key == "statistics") {
        options.statistics = parse_statistics(strings(value, key));
      } else if (key == "n") {
        options.n = value.get<int>();
      } else if (key == "reps") {
        options.reps = value.get<int>();
      } else if (key == "alpha") {
        options.alpha = value.get<double>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

CommandOutput run_power(const PowerOptions& options) {
  if (options.alternatives.empty()) throw ConfigError("no alternatives requested");
  if (options.censoring.empty()) throw ConfigError("no censoring model requested");
  CommandOutput out;
  out.table = ReportTable("alternative");
  out.table.set_digits(3);
  for (const auto& alternative : options.alternatives) {
    for (const auto& target : options.censoring) {
      PowerStudyConfig config;
      config.lifetime = alternative;
      config.censoring = target;
      config.n = options.n;
      config.reps = options.reps;
      config.alpha = options.alpha;
      config.seed = options.seed;
      config.statistics = options.statistics;
      config.threads = options.threads;
      config.tail = options.tail;
      const PowerResult result = warp_speed_power(config);

      const std::string row = alternative.label() + " " + censoring_label(target);
      std::vector<std::string> echo{"censoring=" + to_string(target.model)};
      if (target.model != CensoringModel::None) {
        echo.push_back("proportion=" + number(target.proportion));
        echo.push_back("param=" + number(result.censoring.param));
        echo.push_back("tail=" + to_string(options.tail));
      }
      echo.insert(echo.end(), {"n=" + std::to_string(options.n), "reps=" + std::to_string(options.reps),
                               "alpha=" + number(options.alpha), "seed=" + std::to_string(options.seed)});
      const std::string config_echo = join(echo);
      for (const auto& e : result.entries) {
        out.table.add({row, e.spec.label(), e.power, e.standard_error, config_echo});
      }
      if (result.redraw_warning) {
        out.warnings.push_back(row + ": " + std::to_string(result.audit.redraws) + " redraws in " +
                               std::to_string(options.reps) + " replications");
      }
    }
  }
  return out;
}

double critical_value_se(const Vector& values, double alpha) {
  const Index b = values.size();
  const auto k = std::clamp<Index>(static_cast<Index>(std::floor(static_cast<double>(b) * (1.0 - alpha) + 1e-9)), 1, b);
  const auto j = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(b) * alpha * (1.0 - alpha))));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const Index hi = std::min(k + j, b);
  const Index lo = std::max<Index>(k - j, 1);
  return 0.5 * (sorted[static_cast<std::size_t>(hi - 1)] - sorted[static_cast<std::size_t>(lo - 1)]);
}

CommandOutput run_critical(const CriticalOptions& options) {
  if (options.alphas.empty()) throw ConfigError("no significance level requested");
  for (double a : options.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("significance level must lie in (0,1)");
  }
  require_positive_count(options.reps, "replication count");
  const bool censored = options.censoring.model != CensoringModel::None;

  Eigen::ArrayXXd pool;
  std::string method;
  std::string param;
  if (!censored) {
    if (options.n < 2) throw ConfigError("n must be at least 2");
    pool = monte_carlo_null(options.statistics, options.n, options.reps, options.seed, options.threads);
    method = "monte-carlo";
  } else {
    PowerStudyConfig config;
    config.lifetime = AlternativeSpec::weibull(1.0);
    config.censoring = options.censoring;
    config.n = options.n;
    config.reps = options.reps;
    config.alpha = options.alphas.front();
    config.seed = options.seed;
    config.statistics = options.statistics;
    config.threads = options.threads;
    config.tail = options.tail;
    WarpSpeedPools pools = warp_speed_pools(config);
    pool = std::move(pools.bootstrap);
    method = "warp-speed";
    param = "param=" + number(pools.censoring.param);
  }

  CommandOutput out;
  out.table = ReportTable("alpha");
  for (double alpha : options.alphas) {
    std::vector<std::string> echo{"method=" + method, "censoring=" + to_string(options.censoring.model)};
    if (censored) {
      echo.push_back("proportion=" + number(options.censoring.proportion));
      echo.push_back(param);
      echo.push_back("tail=" + to_string(options.tail));
    }
    echo.insert(echo.end(), {"n=" + std::to_string(options.n), "reps=" + std::to_string(options.reps),
                             "seed=" + std::to_string(options.seed)});
    const std::string config_echo = join(echo);
    for (std::size_t s = 0; s < options.statistics.size(); ++s) {
      const Vector column = pool.col(static_cast<Index>(s));
      out.table.add({number(alpha), options.statistics[s].label(), critical_value_from(column, alpha),
                     critical_value_se(column, alpha), config_echo});
    }
  }
  return out;
}

}  // namespace wgof
