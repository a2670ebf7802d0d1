#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wgof {

/// One reported number.
struct ReportCell {
  std::string row;        ///< e.g. "LN(0.5) exponential 10%"; empty for single-row reports
  std::string statistic;  ///< column label
  double value = 0.0;
  double se = 0.0;        ///< Monte Carlo standard error; 0 for exact quantities
  std::string config;     ///< key=value pairs joined by ';'
};

/// Grid of labelled cells with text and CSV emitters.
class ReportTable {
 public:
  explicit ReportTable(std::string row_header = "row") : row_header_(std::move(row_header)) {}

  void add(ReportCell cell) { cells_.push_back(std::move(cell)); }
  /// Lines printed above the text table, e.g. fitted parameters.
  void note(std::string line) { notes_.push_back(std::move(line)); }
  void set_digits(int digits) { digits_ = digits; }

  const std::vector<ReportCell>& cells() const { return cells_; }
  const std::vector<std::string>& notes() const { return notes_; }

  /// Rows x statistics grid when cells carry row labels, otherwise a
  /// statistic/value/se listing. Columns are right-aligned.
  void write_text(std::ostream& out) const;

  /// Header `statistic,value,se,config-echo`, one line per cell. The row
  /// label is folded into config-echo.
  void write_csv(std::ostream& out) const;

 private:
  std::string row_header_;
  std::vector<ReportCell> cells_;
  std::vector<std::string> notes_;
  int digits_ = 4;
};

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& text);

}  // namespace wgof
