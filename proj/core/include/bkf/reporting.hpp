#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bkf/gibbs.hpp"
#include "bkf/rationality.hpp"
#include "bkf/trial_record.hpp"

namespace bkf {

/// Per-cell descriptive statistics over updated expectations. Mean and sd
/// are kept at full precision; two-decimal rounding happens at render time.
struct CellStats {
  std::string model_id;
  PersonaKind persona = PersonaKind::Household;
  ScenarioId scenario = ScenarioId::S1;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample sd (n-1), 0 for a single response
};

/// Groups records by (model, persona, scenario), sorted on that key.
/// Throws InvalidParameter on empty input.
std::vector<CellStats> descriptive_stats(const std::vector<TrialRecord>& records);

// --- two-line-cell tables ---

/// "7.02" over "(1.02)", or "0.48" over "[0.42, 0.54]". A missing cell
/// renders as a placeholder and is listed in a footnote instead of failing.
struct TableCell {
  std::string main;
  std::string sub;
  bool missing = false;
};

struct ReportTable {
  std::string title;
  std::string row_header;
  std::vector<std::string> columns;
  struct Row {
    std::string label;
    std::vector<TableCell> cells;
  };
  std::vector<Row> rows;
  std::vector<std::string> footnotes;
};

/// Aligned plain text, deterministic for identical inputs.
std::string render_text(const ReportTable& table);

/// Long-format CSV (row,column,value,dispersion) carrying exactly the same
/// rendered numbers as the text table.
std::string render_csv(const ReportTable& table);

/// Scenario columns, one row per (model, persona), mean over "(sd)" cells.
ReportTable scenario_mean_table(const std::vector<CellStats>& stats);

/// Side-by-side conditions (e.g. base vs fine-tuned): scenario rows, one
/// column per condition x persona.
ReportTable comparison_table(
    const std::vector<std::pair<std::string, std::vector<CellStats>>>& conditions);

struct LabeledPosterior {
  std::string label;
  PosteriorSummary posterior;
};

/// Coefficient columns, one row per fit, mean over "[lo, hi]" cells.
ReportTable coefficient_table(const std::string& title,
                              const std::vector<LabeledPosterior>& fits);

// --- rationality verdicts ---

struct VerdictReport {
  std::string text;  // one line per condition plus the verdict
  nlohmann::ordered_json document;
};

VerdictReport verdict_report(
    const std::vector<std::pair<std::string, RationalityCheck>>& verdicts);

// --- plotting exports ---

/// Scenario means with error-bar inputs, full precision.
void write_scenario_plot_csv(const std::vector<CellStats>& stats, std::ostream& out);

/// Forest-plot data: one line per (fit, coefficient) with mean and HDI.
void write_forest_plot_csv(const std::vector<LabeledPosterior>& fits, std::ostream& out);

}  // namespace bkf
