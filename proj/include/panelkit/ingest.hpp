#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "panelkit/core.hpp"
#include "panelkit/panel.hpp"

// Long-format CSV ingestion for the study sources (OECD R&D expenditure
// series, OECD average wages, IEA automotive diesel prices) plus the
// descriptive outputs: the funding-by-performance share matrix and the
// per-year country averages.

namespace panelkit {

struct SourceSchema {
  std::string path;
  std::string unit_column = "country";
  std::string period_column = "year";
  std::string variable_column = "variable";  // empty when fixed_variable is set
  std::string fixed_variable;                // single-variable sources (wages, oil)
  std::string value_column = "value";
  std::string unit_tag_column;               // optional per-row unit-of-measure check
  std::string expected_unit_tag;

  void validate() const;
};

struct RejectedRow {
  std::size_t row_number = 0;  // 1-based, header is row 1
  std::string reason;
  std::string raw;
};

struct CsvReadResult {
  std::vector<Record> records;
  std::vector<RejectedRow> rejects;
};

/// Parses one long CSV per its schema. Malformed rows land in the rejects
/// report instead of being silently dropped.
CsvReadResult read_long_csv(const SourceSchema& schema);

struct StudyManifest {
  std::vector<std::string> included_units;            // 3-letter codes
  std::map<std::string, std::string> excluded_units;  // code -> reason
  int period_begin = 0;
  int period_end = 0;
  std::vector<std::string> variables;
  std::string oil_series_note;  // records which IEA series the ingest used

  /// The 29-country 2003-2017 layout of the study.
  static StudyManifest study_default();

  void validate() const;
};

inline constexpr const char* kTotalVariable = "TOTAL";
inline constexpr const char* kWageVariable = "WAGE";
inline constexpr const char* kOilVariable = "OIL";

/// The ten model dependents: TOTAL, the five funding sources, the four
/// performance sectors.
const std::vector<std::string>& study_dependents();

/// Maps source spellings ("Czech Republic", "Korea", ...) to 3-letter codes;
/// codes pass through. Throws UnknownUnitCode for unmapped spellings.
std::string resolve_unit_code(const std::string& name);

struct CoverageReport {
  std::map<std::string, std::size_t> present_counts;  // per manifest variable
  std::size_t complete_all_models = 0;                // rows with TOTAL, WAGE and OIL
  std::size_t reject_count = 0;
};

struct AssembledStudy {
  PanelDataset panel;
  CoverageReport coverage;
  std::vector<RejectedRow> rejects;
};

/// Reads every source, restricts to manifest units and period range, and
/// assembles the study panel with its coverage report.
AssembledStudy assemble_study_dataset(const StudyManifest& manifest,
                                      const std::vector<SourceSchema>& sources);

inline constexpr std::array<const char*, 4> kPerformanceSectors = {"BES", "GOV", "HES", "PNP"};
inline constexpr std::array<const char*, 5> kFundingSources = {"BES", "GOV", "HES", "PNP", "ROW"};

/// Cross-classified expenditure variables are named CROSS-<sector>-<source>.
std::string cross_variable(const std::string& sector, const std::string& source);

struct ShareMatrix {
  Eigen::Matrix<double, 4, 5> cells;  // sector of performance x source of funding, percent
  Eigen::Matrix<double, 4, 1> row_totals;
  Eigen::Matrix<double, 5, 1> col_totals;
  double grand_total = 0.0;
};

/// Average over country-years of cell expenditure as a percent of TOTAL;
/// margins come from the one-dimensional FUND-*/PERF-* series and the grand
/// total from the funding margins.
ShareMatrix share_matrix(const PanelDataset& ds);

struct AnnualAverages {
  std::vector<int> years;
  std::vector<std::string> variables;
  Matrix means;               // year x variable, NaN when no country reported
  Eigen::MatrixXi counts;     // contributing countries
};

AnnualAverages annual_averages(const PanelDataset& ds, const std::vector<std::string>& vars);

/// Canonical long dump, header `country,year,variable,value`, full double
/// precision so re-ingestion reproduces the dataset bit for bit.
std::string write_canonical_csv(const PanelDataset& ds);
SourceSchema canonical_schema(const std::string& path);

}  // namespace panelkit
