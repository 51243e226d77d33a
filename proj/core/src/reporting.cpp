#include "bkf/reporting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "bkf/errors.hpp"
#include "bkf/format.hpp"
#include "bkf/scenario.hpp"

namespace bkf {

namespace {

constexpr const char* kMissingCell = "n/a";

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return std::string(width - std::min(width, s.size()), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s + std::string(width - std::min(width, s.size()), ' ');
}

std::string full_precision(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

TableCell stats_cell(const CellStats& s) {
  return {format_fixed2(s.mean), "(" + format_fixed2(s.sd) + ")", false};
}

TableCell posterior_cell(const CoefficientSummary& c) {
  return {format_fixed2(c.mean),
          "[" + format_fixed2(c.hdi95.lo) + ", " + format_fixed2(c.hdi95.hi) + "]", false};
}

void note_missing(ReportTable& table) {
  std::string missing;
  for (const auto& row : table.rows)
    for (std::size_t c = 0; c < row.cells.size(); ++c)
      if (row.cells[c].missing) {
        if (!missing.empty()) missing += ", ";
        missing += row.label + " x " + table.columns[c];
      }
  if (table.rows.empty())
    table.footnotes.push_back("missing: all cells (no data)");
  else if (!missing.empty())
    table.footnotes.push_back("missing: " + missing);
}

std::string scenario_column(ScenarioId id) {
  return std::string(to_string(id)) + " " + information_state(id);
}

}  // namespace

std::vector<CellStats> descriptive_stats(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw InvalidParameter("descriptive_stats needs at least one record");

  std::map<std::tuple<std::string, int, int>, std::vector<double>> cells;
  for (const TrialRecord& r : records) {
    cells[{r.model_id, static_cast<int>(r.persona), static_cast<int>(r.scenario)}].push_back(
        r.updated_expectation);
  }

  std::vector<CellStats> out;
  out.reserve(cells.size());
  for (const auto& [key, values] : cells) {
    CellStats s;
    s.model_id = std::get<0>(key);
    s.persona = static_cast<PersonaKind>(std::get<1>(key));
    s.scenario = static_cast<ScenarioId>(std::get<2>(key));
    s.n = values.size();
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_text(const ReportTable& table) {
  const std::size_t ncols = table.columns.size();
  std::size_t label_width = table.row_header.size();
  for (const auto& row : table.rows) label_width = std::max(label_width, row.label.size());

  std::vector<std::size_t> widths(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    widths[c] = table.columns[c].size();
    for (const auto& row : table.rows) {
      if (c >= row.cells.size()) continue;
      const TableCell& cell = row.cells[c];
      const std::size_t need =
          cell.missing ? std::string(kMissingCell).size()
                       : std::max(cell.main.size(), cell.sub.size());
      widths[c] = std::max(widths[c], need);
    }
  }

  std::ostringstream out;
  out << table.title << '\n';
  out << pad_right(table.row_header, label_width);
  for (std::size_t c = 0; c < ncols; ++c) out << "  " << pad_left(table.columns[c], widths[c]);
  out << '\n';
  std::size_t rule = label_width;
  for (std::size_t w : widths) rule += 2 + w;
  out << std::string(rule, '-') << '\n';

  for (const auto& row : table.rows) {
    out << pad_right(row.label, label_width);
    for (std::size_t c = 0; c < ncols; ++c) {
      const bool have = c < row.cells.size() && !row.cells[c].missing;
      out << "  " << pad_left(have ? row.cells[c].main : kMissingCell, widths[c]);
    }
    out << '\n';
    out << std::string(label_width, ' ');
    for (std::size_t c = 0; c < ncols; ++c) {
      const bool have = c < row.cells.size() && !row.cells[c].missing;
      out << "  " << pad_left(have ? row.cells[c].sub : "", widths[c]);
    }
    out << '\n';
  }
  for (const auto& note : table.footnotes) out << note << '\n';
  return out.str();
}

std::string render_csv(const ReportTable& table) {
  std::ostringstream out;
  out << "row,column,value,dispersion\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const bool have = c < row.cells.size() && !row.cells[c].missing;
      out << csv_quote(row.label) << ',' << csv_quote(table.columns[c]) << ',';
      if (have) out << csv_quote(row.cells[c].main) << ',' << csv_quote(row.cells[c].sub);
      else out << ',';
      out << '\n';
    }
  }
  return out.str();
}

ReportTable scenario_mean_table(const std::vector<CellStats>& stats) {
  ReportTable table;
  table.title = "Mean updated expectations by scenario (sd in parentheses)";
  table.row_header = "model / persona";
  for (int s = 0; s < 4; ++s) table.columns.push_back(scenario_column(static_cast<ScenarioId>(s)));

  std::map<std::pair<std::string, int>, std::array<const CellStats*, 4>> rows;
  for (const CellStats& s : stats)
    rows[{s.model_id, static_cast<int>(s.persona)}][static_cast<std::size_t>(s.scenario)] = &s;

  for (const auto& [key, cells] : rows) {
    ReportTable::Row row;
    row.label = key.first + " / " + to_string(static_cast<PersonaKind>(key.second));
    for (const CellStats* cell : cells)
      row.cells.push_back(cell != nullptr ? stats_cell(*cell) : TableCell{"", "", true});
    table.rows.push_back(std::move(row));
  }
  note_missing(table);
  return table;
}

ReportTable comparison_table(
    const std::vector<std::pair<std::string, std::vector<CellStats>>>& conditions) {
  ReportTable table;
  table.title = "Mean updated expectations by condition (sd in parentheses)";
  table.row_header = "scenario";

  // column per condition x persona, cells found by (condition, persona, scenario)
  std::map<std::tuple<std::size_t, int, int>, const CellStats*> lookup;
  std::vector<std::pair<std::size_t, int>> column_keys;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    bool seen[2] = {false, false};
    for (const CellStats& s : conditions[i].second) {
      lookup[{i, static_cast<int>(s.persona), static_cast<int>(s.scenario)}] = &s;
      seen[static_cast<int>(s.persona)] = true;
    }
    for (int p = 0; p < 2; ++p)
      if (seen[p]) {
        column_keys.emplace_back(i, p);
        table.columns.push_back(conditions[i].first + " / " +
                                to_string(static_cast<PersonaKind>(p)));
      }
  }

  for (int s = 0; s < 4; ++s) {
    ReportTable::Row row;
    row.label = scenario_column(static_cast<ScenarioId>(s));
    for (const auto& [cond, persona] : column_keys) {
      const auto it = lookup.find({cond, persona, s});
      row.cells.push_back(it != lookup.end() ? stats_cell(*it->second) : TableCell{"", "", true});
    }
    table.rows.push_back(std::move(row));
  }
  note_missing(table);
  return table;
}

ReportTable coefficient_table(const std::string& title,
                              const std::vector<LabeledPosterior>& fits) {
  ReportTable table;
  table.title = title;
  table.row_header = "fit";
  for (const char* name : kCoefficientNames) table.columns.push_back(name);
  table.columns.push_back("sigma2");

  for (const LabeledPosterior& fit : fits) {
    ReportTable::Row row;
    row.label = fit.label;
    for (const CoefficientSummary& c : fit.posterior.coefficients)
      row.cells.push_back(posterior_cell(c));
    row.cells.push_back(posterior_cell(fit.posterior.sigma2));
    table.rows.push_back(std::move(row));
  }
  note_missing(table);
  return table;
}

VerdictReport verdict_report(
    const std::vector<std::pair<std::string, RationalityCheck>>& verdicts) {
  if (verdicts.empty()) throw InvalidParameter("verdict_report needs at least one verdict");

  VerdictReport report;
  report.document["verdicts"] = nlohmann::ordered_json::array();
  std::ostringstream out;
  for (const auto& [label, check] : verdicts) {
    out << label << ": sum of weights " << format_fixed2(check.sum_mean) << ", 95% HDI ["
        << format_fixed2(check.sum_hdi.lo) << ", " << format_fixed2(check.sum_hdi.hi) << "] vs 1 ("
        << (check.sum_to_one ? "pass" : "fail") << "); interaction "
        << format_fixed2(check.interaction_mean) << ", 95% HDI ["
        << format_fixed2(check.interaction_hdi.lo) << ", "
        << format_fixed2(check.interaction_hdi.hi) << "] vs 0 ("
        << (check.zero_interaction ? "pass" : "fail") << ")\n";
    out << label << ": " << verdict_line(check) << '\n';

    nlohmann::ordered_json v;
    v["label"] = label;
    v["sum_mean"] = check.sum_mean;
    v["sum_hdi"] = {check.sum_hdi.lo, check.sum_hdi.hi};
    v["sum_to_one"] = check.sum_to_one;
    v["interaction_mean"] = check.interaction_mean;
    v["interaction_hdi"] = {check.interaction_hdi.lo, check.interaction_hdi.hi};
    v["zero_interaction"] = check.zero_interaction;
    v["rational"] = check.rational();
    v["verdict"] = verdict_line(check);
    report.document["verdicts"].push_back(std::move(v));
  }
  report.text = out.str();
  return report;
}

void write_scenario_plot_csv(const std::vector<CellStats>& stats, std::ostream& out) {
  out << "model,persona,scenario,information_state,n,mean,sd\n";
  for (const CellStats& s : stats) {
    out << csv_quote(s.model_id) << ',' << to_string(s.persona) << ',' << to_string(s.scenario)
        << ',' << csv_quote(information_state(s.scenario)) << ',' << s.n << ','
        << full_precision(s.mean) << ',' << full_precision(s.sd) << '\n';
  }
}

void write_forest_plot_csv(const std::vector<LabeledPosterior>& fits, std::ostream& out) {
  out << "fit,coefficient,mean,hdi_lo,hdi_hi,sd,r_hat,ess\n";
  for (const LabeledPosterior& fit : fits) {
    const auto line = [&](const CoefficientSummary& c) {
      out << csv_quote(fit.label) << ',' << c.name << ',' << full_precision(c.mean) << ','
          << full_precision(c.hdi95.lo) << ',' << full_precision(c.hdi95.hi) << ','
          << full_precision(c.sd) << ',' << full_precision(c.r_hat) << ',' << full_precision(c.ess)
          << '\n';
    };
    for (const CoefficientSummary& c : fit.posterior.coefficients) line(c);
    line(fit.posterior.sigma2);
  }
}

}  // namespace bkf
