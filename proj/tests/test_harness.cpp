#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wgof/commands.hpp"
#include "wgof/dataset.hpp"

using namespace wgof;

namespace {

const std::string kLeukemia = std::string(WGOF_DATA_DIR) + "/leukemia_survival.csv";
const std::string kRemission = std::string(WGOF_DATA_DIR) + "/remission_times.csv";

CensoredSample parse(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

long error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("bundled survival data: 43 uncensored times") {
  const CensoredSample s = ingest(kLeukemia);
  CHECK(s.size() == 43);
  CHECK(s.events() == 43);
  const std::vector<double> listed = {7,    47,   58,   74,   177,  232,  273,  285,  317,  429,  440,
                                      445,  455,  468,  495,  497,  532,  571,  579,  581,  650,  702,
                                      715,  779,  881,  900,  930,  968,  1077, 1109, 1314, 1334, 1367,
                                      1534, 1712, 1784, 1877, 1886, 2045, 2056, 2260, 2429, 2509};
  REQUIRE(listed.size() == 43);
  for (Index j = 0; j < 43; ++j) CHECK(s.times[j] == listed[static_cast<std::size_t>(j)]);
}

TEST_CASE("bundled remission data: asterisked values are censored") {
  const CensoredSample s = ingest(kRemission);
  CHECK(s.size() == 66);
  CHECK(s.events() == 52);
  const std::vector<double> listed = {4,   5,   8,   8,   9,   10,  10,  10,  10,  10,  11,  12,  12,  12,
                                      13,  14,  20,  20,  23,  23,  25,  25,  25,  28,  28,  28,  28,  29,
                                      31,  31,  31,  32,  37,  40,  41,  41,  48,  48,  57,  62,  70,  74,
                                      75,  89,  99,  100, 103, 124, 139, 143, 159, 161, 162, 169, 190, 195,
                                      196, 197, 199, 205, 217, 219, 220, 245, 258, 269};
  const std::vector<int> starred = {13, 17, 50, 51, 54, 56, 57, 58, 59, 60, 61, 63, 64, 65};
  REQUIRE(listed.size() == 66);
  for (Index j = 0; j < 66; ++j) {
    CAPTURE(j);
    CHECK(s.times[j] == listed[static_cast<std::size_t>(j)]);
    const bool censored = std::find(starred.begin(), starred.end(), j) != starred.end();
    CHECK(s.deltas[j] == (censored ? 0 : 1));
  }
}

TEST_CASE("bundled data files are pinned") {
  CHECK(oracle::fnv1a_file(kLeukemia) == 0x388b51aa02123111ULL);
  CHECK(oracle::fnv1a_file(kRemission) == 0x467728c69b155ee2ULL);
}

TEST_CASE("dataset parsing") {
  const CensoredSample s = parse("# comment\ntime,delta\n\n 1.5 , 1\n2,0\r\n# trailing\n3e2,1\n");
  CHECK(s.size() == 3);
  CHECK(s.times[2] == 300.0);
  CHECK(s.deltas[1] == 0);
  CHECK(parse("1,1\n2,1\n").size() == 2);

  CHECK(error_line("time,delta\n1,1\n5,2\n") == 3);
  CHECK(error_line("1,1\n0,1\n") == 2);
  CHECK(error_line("1,1\n-3,1\n") == 2);
  CHECK(error_line("1,1\nabc,1\n") == 2);
  CHECK(error_line("1,1\n2\n") == 2);
  CHECK(error_line("1,1\n2,1,3\n") == 2);
  CHECK(error_line("1,1\ninf,1\n") == 2);
  CHECK(error_line("1,1\n2,\n") == 2);
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(parse("# only comments\ntime,delta\n"), DataError);
  CHECK_THROWS_AS(ingest("/nonexistent/file.csv"), DataError);
  try {
    parse("1,1\n5,2\n");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("write then read reproduces the sample exactly") {
  Rng rng = derived_stream(12, 0);
  CensoredSample s;
  s.times = sample_weibull({3.7, 0.6}, 500, rng);
  s.times[0] = 1e-300;
  s.times[1] = 1.7976931348623157e308;
  s.times[2] = 0.1;
  s.deltas = Indicators::Zero(500);
  for (Index i = 0; i < 500; i += 3) s.deltas[i] = 1;
  std::ostringstream out;
  write_dataset(out, s);
  const CensoredSample back = parse(out.str());
  CHECK((back.times == s.times).all());
  CHECK((back.deltas == s.deltas).all());
}

TEST_CASE("report CSV layout") {
  ReportTable table("alternative");
  table.add({"beta(0.5,1) full", "S1(a=5)", 0.25, 0.01, "n=10"});
  table.add({"LN(1) full", "KS", 0.5, 0.02, "n=10"});
  std::ostringstream csv;
  table.write_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("statistic,value,se,config-echo\n", 0) == 0);
  CHECK(text.find("S1(a=5),0.25,0.01,\"alternative=beta(0.5,1) full;n=10\"\n") != std::string::npos);
  CHECK(text.find("KS,0.5,0.02,alternative=LN(1) full;n=10\n") != std::string::npos);
  CHECK(csv_field("a\"b") == "\"a\"\"b\"");
}

TEST_CASE("report text layout pivots rows and statistics") {
  ReportTable table("alternative");
  table.set_digits(3);
  table.add({"A", "KS", 0.1, 0.01, ""});
  table.add({"A", "CM", 0.2, 0.01, ""});
  table.add({"Longer row", "KS", 0.3, 0.01, ""});
  std::ostringstream out;
  table.write_text(out);
  std::istringstream lines(out.str());
  std::string header;
  std::string first;
  std::string second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header == "alternative     KS     CM");
  CHECK(first == "A            0.100  0.200");
  CHECK(second == "Longer row   0.300      -");
}

TEST_CASE("statistic, alternative and censoring grammars") {
  CHECK(parse_statistic("KS") == StatisticSpec::ks());
  CHECK(parse_statistic("s1:5") == StatisticSpec::s1(5));
  CHECK(parse_statistic("S2:0.5") == StatisticSpec::s2(0.5));
  CHECK(parse_statistic("KR") == StatisticSpec::kr());
  CHECK(parse_statistic("KR:-3:50") == StatisticSpec::kr(-3, 50));
  CHECK_THROWS_AS(parse_statistic("S1"), ConfigError);
  CHECK_THROWS_AS(parse_statistic("S1:-1"), ConfigError);
  CHECK_THROWS_AS(parse_statistic("AD"), ConfigError);
  CHECK_THROWS_AS(parse_statistic("KS:1"), ConfigError);
  CHECK(parse_statistics({}).size() == 10);
  CHECK(parse_statistics({"all"}).size() == 10);

  CHECK(parse_alternative("LN:0.5") == AlternativeSpec::lognormal(0.5));
  CHECK(parse_alternative("beta:0.5,1") == AlternativeSpec::beta(0.5, 1));
  CHECK(parse_alternative("W:1.5") == AlternativeSpec::weibull(1.5));
  CHECK(parse_alternative("W:1.5,3") == AlternativeSpec::weibull(1.5, 3));
  CHECK(parse_alternative("gamma:2") == AlternativeSpec::gamma(2));
  CHECK(parse_alternative("chi2:8") == AlternativeSpec::chi_square(8));
  CHECK(parse_alternative("lindley:0.5") == AlternativeSpec::lindley(0.5));
  CHECK(parse_alternative("LN(1)") == AlternativeSpec::lognormal(1));
  CHECK(parse_alternative("beta(0.5,1)") == AlternativeSpec::beta(0.5, 1));
  CHECK_THROWS_AS(parse_alternative("beta:0.5"), ConfigError);
  CHECK_THROWS_AS(parse_alternative("cauchy:1"), ConfigError);
  CHECK_THROWS_AS(parse_alternative("LN:-1"), ConfigError);
  CHECK(table_alternatives().size() == 13);
  CHECK(null_alternatives().size() == 3);

  CHECK(parse_censoring("none").front().model == CensoringModel::None);
  const auto kg = parse_censoring("koziol-green:0.10");
  REQUIRE(kg.size() == 1);
  CHECK(kg.front().model == CensoringModel::KoziolGreen);
  CHECK(kg.front().proportion == 0.10);
  CHECK(parse_censoring("all:0.2").size() == 3);
  CHECK(parse_censoring("exp:0.2").front().model == CensoringModel::Exponential);
  CHECK_THROWS_AS(parse_censoring("exponential"), ConfigError);
  CHECK_THROWS_AS(parse_censoring("exponential:1.5"), ConfigError);
  CHECK_THROWS_AS(parse_censoring("weird:0.1"), ConfigError);
}

TEST_CASE("power config file") {
  PowerOptions options;
  apply_power_config(R"({"alternatives": ["LN:0.5", "beta:1,1"], "censoring": "all:0.2", "n": 50, "reps": 300,
                         "alpha": 0.05, "statistics": ["KS", "S1:5"]})",
                     options);
  CHECK(options.alternatives.size() == 2);
  CHECK(options.censoring.size() == 3);
  CHECK(options.n == 50);
  CHECK(options.reps == 300);
  CHECK(options.alpha == 0.05);
  CHECK(options.statistics.size() == 2);
  CHECK_THROWS_AS(apply_power_config(R"({"sample_size": 5})", options), ConfigError);
  CHECK_THROWS_AS(apply_power_config(R"({"n": "ten"})", options), ConfigError);
  CHECK_THROWS_AS(apply_power_config("not json", options), ConfigError);
}

TEST_CASE("fit reports the maximum-likelihood estimate") {
  FitOptions options;
  options.data = kLeukemia;
  const CommandOutput out = run_fit(options);
  const CensoredSample s = ingest(kLeukemia);
  const auto grid = oracle::mle_grid(std::vector<double>(s.times.begin(), s.times.end()),
                                     std::vector<int>(s.deltas.begin(), s.deltas.end()));
  const auto& cells = out.table.cells();
  REQUIRE(cells.size() == 13);
  CHECK(cells[0].statistic == "lambda");
  CHECK(cells[0].value == doctest::Approx(grid.lambda).epsilon(1e-8));
  CHECK(cells[1].value == doctest::Approx(grid.theta).epsilon(1e-8));
  CHECK(cells[0].se > 0.0);
  CHECK(cells[3].statistic == "KS");
}

TEST_CASE("test command: B = 99 smoke run") {
  TestOptions options;
  options.data = kRemission;
  options.replications = 99;
  options.seed = 1;
  const CommandOutput out = run_test(options);
  const auto& cells = out.table.cells();
  REQUIRE(cells.size() == 10);
  for (const auto& c : cells) {
    CHECK(c.value > 0.0);
    CHECK(c.value <= 1.0);
    CHECK(c.config.find("theta=") != std::string::npos);
    CHECK(c.config.find("censored=") != std::string::npos);
  }
  options.replications = 50;
  CHECK_THROWS_AS(run_test(options), ConfigError);
}

TEST_CASE("critical command") {
  CriticalOptions options;
  options.n = 100;
  options.reps = 5000;
  options.alphas = {0.01, 0.10};
  options.seed = 2;
  const CommandOutput a = run_critical(options);
  const CommandOutput b = run_critical(options);
  REQUIRE(a.table.cells().size() == 2);
  const double c01 = a.table.cells()[0].value;
  const double c10 = a.table.cells()[1].value;
  CHECK(c10 > 0.0);
  CHECK(c01 > c10);
  CHECK(c10 == b.table.cells()[1].value);

  // Applied to fresh null samples the 10% critical value rejects about 10% of them.
  const Eigen::ArrayXXd fresh = monte_carlo_null({StatisticSpec::s1(5)}, 100, 5000, 777);
  const double rate = (fresh.col(0) > c10).cast<double>().mean();
  CHECK(rate == doctest::Approx(0.10).epsilon(0.15));

  options.censoring = {CensoringModel::Exponential, 0.2};
  options.reps = 300;
  options.n = 40;
  const CommandOutput censored = run_critical(options);
  CHECK(censored.table.cells()[0].config.find("method=warp-speed") != std::string::npos);
  CHECK(censored.table.cells()[0].value > censored.table.cells()[1].value);
}

TEST_CASE("power command rows") {
  PowerOptions options;
  options.alternatives = {AlternativeSpec::lognormal(0.5)};
  options.censoring = parse_censoring("all:0.1");
  options.n = 30;
  options.reps = 100;
  options.seed = 3;
  options.statistics = {StatisticSpec::ks()};
  const CommandOutput out = run_power(options);
  const auto& cells = out.table.cells();
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].row == "LN(0.5) exponential 10%");
  CHECK(cells[2].row == "LN(0.5) koziol-green 10%");
  CHECK(cells[2].config.find("param=0.1111111111") != std::string::npos);
}
