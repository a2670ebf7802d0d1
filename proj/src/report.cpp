#include "wgof/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

namespace wgof {

namespace {

std::string fixed(double v, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
  return buffer;
}

std::string general(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", v);
  return buffer;
}

template <typename T>
std::vector<T> unique_in_order(const std::vector<T>& items) {
  std::vector<T> out;
  for (const auto& item : items) {
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  return out;
}

void write_grid(std::ostream& out, const std::vector<std::vector<std::string>>& grid) {
  if (grid.empty()) return;
  std::vector<std::size_t> width(grid.front().size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c == 0) {
        out << line[c] << std::string(width[c] - line[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - line[c].size(), ' ') << line[c];
      }
    }
    out << '\n';
  }
}

}  // namespace

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

void ReportTable::write_text(std::ostream& out) const {
  for (const auto& line : notes_) out << line << '\n';
  if (!notes_.empty() && !cells_.empty()) out << '\n';

  const bool pivot = std::any_of(cells_.begin(), cells_.end(), [](const ReportCell& c) { return !c.row.empty(); });
  std::vector<std::vector<std::string>> grid;
  if (!pivot) {
    grid.push_back({"statistic", "value", "se"});
    for (const auto& c : cells_) grid.push_back({c.statistic, fixed(c.value, digits_), fixed(c.se, digits_)});
    write_grid(out, grid);
    return;
  }

  std::vector<std::string> rows;
  std::vector<std::string> columns;
  for (const auto& c : cells_) {
    rows.push_back(c.row);
    columns.push_back(c.statistic);
  }
  rows = unique_in_order(rows);
  columns = unique_in_order(columns);
  std::map<std::pair<std::string, std::string>, double> lookup;
  double max_se = 0.0;
  for (const auto& c : cells_) {
    lookup[{c.row, c.statistic}] = c.value;
    max_se = std::max(max_se, c.se);
  }
  std::vector<std::string> header{row_header_};
  header.insert(header.end(), columns.begin(), columns.end());
  grid.push_back(header);
  for (const auto& r : rows) {
    std::vector<std::string> line{r};
    for (const auto& col : columns) {
      const auto it = lookup.find({r, col});
      line.push_back(it == lookup.end() ? "-" : fixed(it->second, digits_));
    }
    grid.push_back(line);
  }
  write_grid(out, grid);
  out << "\nlargest standard error: " << fixed(max_se, digits_) << '\n';
}

void ReportTable::write_csv(std::ostream& out) const {
  out << "statistic,value,se,config-echo\n";
  for (const auto& c : cells_) {
    std::string config = c.row.empty() ? c.config : row_header_ + "=" + c.row + (c.config.empty() ? "" : ";" + c.config);
    out << csv_field(c.statistic) << ',' << general(c.value) << ',' << general(c.se) << ',' << csv_field(config)
        << '\n';
  }
}

}  // namespace wgof
