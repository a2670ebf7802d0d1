#include "wgof/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace wgof {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool looks_numeric(std::string_view s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.' ||
                        s.front() == '-' || s.front() == '+');
}

}  // namespace

CensoredSample read_dataset(std::istream& in) {
  std::vector<double> times;
  std::vector<int> deltas;
  std::string raw;
  long line = 0;
  bool seen_content = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const bool first = !seen_content;
    seen_content = true;
    if (first && !looks_numeric(text)) continue;  // header

    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
      throw DataError("expected 'time,delta', got '" + std::string(text) + "'", line);
    }
    const std::string_view time_field = trim(text.substr(0, comma));
    const std::string_view delta_field = trim(text.substr(comma + 1));
    if (delta_field.find(',') != std::string_view::npos) {
      throw DataError("too many fields in '" + std::string(text) + "'", line);
    }
    double t = 0.0;
    if (!parse_double(time_field, t)) {
      throw DataError("time '" + std::string(time_field) + "' is not a number", line);
    }
    if (!std::isfinite(t) || !(t > 0.0)) {
      throw DataError("time must be positive and finite, got '" + std::string(time_field) + "'", line);
    }
    if (delta_field != "0" && delta_field != "1") {
      throw DataError("delta must be 0 or 1, got '" + std::string(delta_field) + "'", line);
    }
    times.push_back(t);
    deltas.push_back(delta_field == "1" ? 1 : 0);
  }
  if (in.bad()) {
    throw DataError("read error");
  }
  if (times.empty()) {
    throw DataError("no data rows");
  }
  CensoredSample s;
  s.times = Eigen::Map<const Vector>(times.data(), static_cast<Index>(times.size()));
  s.deltas = Eigen::Map<const Indicators>(deltas.data(), static_cast<Index>(deltas.size()));
  return s;
}

CensoredSample ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path + "'");
  }
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const CensoredSample& sample) {
  validate(sample);
  out << "time,delta\n";
  char buffer[64];
  for (Index j = 0; j < sample.size(); ++j) {
    std::snprintf(buffer, sizeof buffer, "%.17g,%d\n", sample.times[j], sample.deltas[j]);
    out << buffer;
  }
}

}  // namespace wgof
