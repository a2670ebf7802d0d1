// Command line front end: fit, test, power, critical.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wgof/commands.hpp"

namespace {

constexpr int kUsage = 64;
constexpr int kData = 65;
constexpr int kNumeric = 70;

struct Common {
  std::string format = "text";
  unsigned threads = 1;
  std::string tail = "infinite";
};

void add_tail(CLI::App* cmd, Common& common) {
  cmd->add_option("--censor-tail", common.tail,
                  "Bootstrap censoring beyond the largest observation: infinite (never censored) or largest")
      ->check(CLI::IsMember({"infinite", "largest"}))
      ->capture_default_str();
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  cmd->add_option("--threads", common.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
}

void emit(const wgof::CommandOutput& out, const Common& common) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
  if (common.format == "csv") {
    out.table.write_csv(std::cout);
  } else {
    out.table.write_text(std::cout);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wgof::ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goodness-of-fit tests for the Weibull law with right-censored data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wgof 1.0");

  Common common;
  std::vector<std::string> stats;
  std::uint64_t seed = 0;

  wgof::FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Weibull MLE and observed statistics for a data file");
  fit_cmd->add_option("data", fit.data, "CSV with time,delta rows")->required();
  fit_cmd->add_option("--stat", stats, "Statistics (KS, CM, LS, KR[:a[:m]], S1:a, S2:a, all)");
  add_common(fit_cmd, common);

  wgof::TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "Parametric bootstrap p-values for a data file");
  test_cmd->add_option("data", test.data, "CSV with time,delta rows")->required();
  test_cmd->add_option("--stat", stats, "Statistics (KS, CM, LS, KR[:a[:m]], S1:a, S2:a, all)");
  test_cmd->add_option("-B,--bootstrap", test.replications, "Bootstrap replications (>= 99)")->capture_default_str();
  test_cmd->add_option("--seed", seed, "Random seed")->required();
  add_common(test_cmd, common);
  add_tail(test_cmd, common);

  wgof::PowerOptions power;
  std::vector<std::string> alternatives;
  std::vector<std::string> censor;
  std::string config_path;
  bool null_only = false;
  auto* power_cmd = app.add_subcommand("power", "Warp-speed bootstrap power study");
  power_cmd->add_option("--config", config_path, "JSON file with alternatives, censoring, n, reps, alpha, statistics");
  power_cmd->add_option("--alt", alternatives, "Alternative, e.g. LN:0.5, beta:0.5,1, W:1.5 (default: table set)");
  power_cmd->add_flag("--null-only", null_only, "Only the Weibull rows W(0.5), W(1.5), W(2)");
  power_cmd->add_option("--censor", censor, "none or model:proportion (exponential, uniform, koziol-green, all)");
  power_cmd->add_option("--n", power.n, "Sample size")->capture_default_str();
  power_cmd->add_option("--reps", power.reps, "Monte Carlo replications")->capture_default_str();
  power_cmd->add_option("--alpha", power.alpha, "Significance level")->capture_default_str();
  power_cmd->add_option("--stat", stats, "Statistics (default: the ten table statistics)");
  power_cmd->add_option("--seed", seed, "Random seed")->required();
  add_common(power_cmd, common);
  add_tail(power_cmd, common);

  wgof::CriticalOptions critical;
  std::string critical_censor = "none";
  auto* critical_cmd = app.add_subcommand("critical", "Null critical values by simulation");
  critical_cmd->add_option("--n", critical.n, "Sample size")->capture_default_str();
  critical_cmd->add_option("--stat", stats, "Statistics (default: S1:5)");
  critical_cmd->add_option("--censor", critical_censor, "none or model:proportion")->capture_default_str();
  critical_cmd->add_option("--reps", critical.reps, "Replications")->capture_default_str();
  critical_cmd->add_option("--alpha", critical.alphas, "Significance levels")->capture_default_str();
  critical_cmd->add_option("--seed", seed, "Random seed")->required();
  add_common(critical_cmd, common);
  add_tail(critical_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    wgof::CommandOutput out;
    if (*fit_cmd) {
      if (!stats.empty()) fit.statistics = wgof::parse_statistics(stats);
      out = wgof::run_fit(fit);
    } else if (*test_cmd) {
      if (!stats.empty()) test.statistics = wgof::parse_statistics(stats);
      test.seed = seed;
      test.threads = common.threads;
      test.tail = wgof::parse_tail(common.tail);
      out = wgof::run_test(test);
    } else if (*power_cmd) {
      wgof::PowerOptions base;
      if (!config_path.empty()) wgof::apply_power_config(read_file(config_path), base);
      if (power_cmd->count("--n") == 0) power.n = base.n;
      if (power_cmd->count("--reps") == 0) power.reps = base.reps;
      if (power_cmd->count("--alpha") == 0) power.alpha = base.alpha;
      power.statistics = stats.empty() ? base.statistics : wgof::parse_statistics(stats);
      if (!alternatives.empty() && null_only) {
        throw wgof::ConfigError("--alt and --null-only are mutually exclusive");
      }
      if (null_only) {
        power.alternatives = wgof::null_alternatives();
      } else if (!alternatives.empty()) {
        power.alternatives.clear();
        for (const auto& a : alternatives) power.alternatives.push_back(wgof::parse_alternative(a));
      } else {
        power.alternatives = base.alternatives;
      }
      if (!censor.empty()) {
        power.censoring.clear();
        for (const auto& c : censor) {
          const auto targets = wgof::parse_censoring(c);
          power.censoring.insert(power.censoring.end(), targets.begin(), targets.end());
        }
      } else {
        power.censoring = base.censoring;
      }
      power.seed = seed;
      power.threads = common.threads;
      power.tail = wgof::parse_tail(common.tail);
      out = wgof::run_power(power);
    } else if (*critical_cmd) {
      if (!stats.empty()) critical.statistics = wgof::parse_statistics(stats);
      const auto targets = wgof::parse_censoring(critical_censor);
      if (targets.size() != 1) throw wgof::ConfigError("critical takes a single censoring model");
      critical.censoring = targets.front();
      critical.seed = seed;
      critical.threads = common.threads;
      critical.tail = wgof::parse_tail(common.tail);
      out = wgof::run_critical(critical);
    }
    emit(out, common);
    return 0;
  } catch (const wgof::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const wgof::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const wgof::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const wgof::DomainError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
}
