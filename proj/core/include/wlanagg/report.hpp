#ifndef WLANAGG_REPORT_HPP
#define WLANAGG_REPORT_HPP

#include <span>
#include <string>
#include <vector>

#include "wlanagg/sweep.hpp"

namespace wlanagg {

// Fixed, documented column order; identical rows serialize to identical
// bytes. Numbers use shortest-round-trip decimal form.
extern const char* const kComparisonCsvHeader;

std::string rows_to_csv(std::span<const ComparisonRow> rows);
std::vector<ComparisonRow> rows_from_csv_text(const std::string& text);
std::vector<ComparisonRow> load_rows_csv(const std::string& path);

// One threshold violation, human-readable.
struct Violation {
  std::string scenario_id;
  std::string what;
};

struct SweepSummary {
  std::string sweep_name;
  std::size_t rows = 0;
  std::size_t flagged = 0;
  double max_rel_err_agg = 0.0;   // over rows with finite rel err
  double mean_rel_err_agg = 0.0;
  double max_rel_err_std = 0.0;   // linear-regime rows
  double mean_rel_err_std = 0.0;
  std::vector<Violation> violations;
  bool pass = true;

  std::string to_text() const;
};

// Applies thresholds to every row. Flagged rows are reported but do not
// fail the summary (infeasible points are data, not errors); threshold
// violations do.
SweepSummary summarize(std::span<const ComparisonRow> rows, const Thresholds& thresholds);

// Writes <name>_rows.csv, <name>_agg.svg (+ _std.svg and _delay.svg when
// the data is present) and <name>_summary.txt under out_dir. Returns the
// summary. Throws std::invalid_argument on empty rows and
// std::runtime_error with the offending path on I/O failure.
SweepSummary emit_report(std::span<const ComparisonRow> rows,
                         const Thresholds& thresholds, const std::string& out_dir,
                         const std::string& name);

}  // namespace wlanagg

#endif  // WLANAGG_REPORT_HPP
