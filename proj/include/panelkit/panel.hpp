#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "panelkit/core.hpp"

// Immutable unbalanced-panel container. Missingness is represented by
// absence, never by sentinel values, and every transform is gap-aware:
// nothing spans non-consecutive years.

namespace panelkit {

struct Record {
  std::string unit;
  int period = 0;
  std::string variable;
  double value = 0.0;
};

/// One variable's rows, sorted by (unit, period). Absent rows are the only
/// representation of missing values.
struct SeriesView {
  std::string variable;
  RowKeys keys;
  Vector values;

  Index size() const { return values.size(); }
};

class PanelDataset {
 public:
  /// Validates and indexes a batch of long-format records. Rejects duplicate
  /// (unit, period, variable) keys and non-finite values.
  static PanelDataset build(const std::vector<Record>& records,
                            std::map<std::string, std::string> units_of_measure = {});

  const std::vector<std::string>& units() const { return units_; }
  const std::vector<std::string>& variables() const { return variables_; }

  bool has_variable(const std::string& var) const;
  /// Unit-of-measure annotation registered at build time, if any.
  std::optional<std::string> unit_of_measure(const std::string& var) const;

  /// Sorted unique periods at which the unit carries any variable.
  const std::vector<int>& period_grid(const std::string& unit) const;

  std::optional<double> value(const std::string& unit, int period, const std::string& var) const;
  bool has(const std::string& unit, int period, const std::string& var) const;

  /// Number of stored cells for one variable.
  std::size_t count(const std::string& var) const;
  /// Total stored cells.
  std::size_t cell_count() const { return cell_count_; }
  bool empty() const { return cell_count_ == 0; }

  /// (unit, period) pairs at which every listed variable is present.
  RowKeys complete_keys(const std::vector<std::string>& vars) const;

  SeriesView series(const std::string& var) const;

  /// Values of var shifted forward k periods: the row at (i, t) carries the
  /// value from (i, t-k) and exists only when the unit's grid runs through
  /// t-k..t without a gap.
  SeriesView lag_series(const std::string& var, int k) const;

  /// Adjacent-year change: row at (i, t) carries value(t) - value(t-1) and
  /// exists only when both years are present and consecutive.
  SeriesView difference_series(const std::string& var) const;

  /// Listwise completion: keeps only the listed variables, restricted to
  /// (unit, period) cells where all of them are present.
  PanelDataset complete_cases(const std::vector<std::string>& vars) const;

  /// All records in canonical (variable, unit, period) order.
  std::vector<Record> records() const;

 private:
  using CellMap = std::map<std::pair<int, int>, double>;  // (unit index, period) -> value

  int unit_index(const std::string& unit) const;
  const CellMap& cells_for(const std::string& var) const;

  std::vector<std::string> units_;              // sorted
  std::vector<std::string> variables_;          // sorted
  std::map<std::string, CellMap> cells_;        // per variable
  std::vector<std::vector<int>> grids_;         // per unit index
  std::map<std::string, std::string> units_of_measure_;
  std::size_t cell_count_ = 0;
};

/// Subtracts each unit's column means over its present rows. Output rows are
/// aligned with the input; per-unit means of the result are zero.
KeyedTable within_demean(const KeyedTable& table);

}  // namespace panelkit
