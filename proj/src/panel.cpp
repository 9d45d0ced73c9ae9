#include "panelkit/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace panelkit {

PanelDataset PanelDataset::build(const std::vector<Record>& records,
                                 std::map<std::string, std::string> units_of_measure) {
  PanelDataset ds;
  ds.units_of_measure_ = std::move(units_of_measure);

  std::set<std::string> unit_set;
  for (const auto& rec : records) unit_set.insert(rec.unit);
  ds.units_.assign(unit_set.begin(), unit_set.end());

  std::map<std::string, int> unit_index;
  for (std::size_t i = 0; i < ds.units_.size(); ++i)
    unit_index[ds.units_[i]] = static_cast<int>(i);

  std::vector<std::set<int>> grid_sets(ds.units_.size());
  for (const auto& rec : records) {
    if (!std::isfinite(rec.value))
      raise(errc::non_finite_value, rec.variable + " at (" + rec.unit + ", " +
                                        std::to_string(rec.period) + ")");
    int ui = unit_index.at(rec.unit);
    auto [it, inserted] = ds.cells_[rec.variable].emplace(std::make_pair(ui, rec.period), rec.value);
    if (!inserted)
      raise(errc::duplicate_key, rec.variable + " at (" + rec.unit + ", " +
                                     std::to_string(rec.period) + ")");
    grid_sets[static_cast<std::size_t>(ui)].insert(rec.period);
    ++ds.cell_count_;
  }

  ds.grids_.resize(ds.units_.size());
  for (std::size_t i = 0; i < ds.units_.size(); ++i)
    ds.grids_[i].assign(grid_sets[i].begin(), grid_sets[i].end());

  ds.variables_.reserve(ds.cells_.size());
  for (const auto& [var, cells] : ds.cells_) ds.variables_.push_back(var);
  return ds;
}

bool PanelDataset::has_variable(const std::string& var) const {
  return cells_.count(var) > 0;
}

std::optional<std::string> PanelDataset::unit_of_measure(const std::string& var) const {
  auto it = units_of_measure_.find(var);
  if (it == units_of_measure_.end()) return std::nullopt;
  return it->second;
}

int PanelDataset::unit_index(const std::string& unit) const {
  auto it = std::lower_bound(units_.begin(), units_.end(), unit);
  if (it == units_.end() || *it != unit) return -1;
  return static_cast<int>(it - units_.begin());
}

const PanelDataset::CellMap& PanelDataset::cells_for(const std::string& var) const {
  auto it = cells_.find(var);
  if (it == cells_.end()) raise(errc::unknown_variable, var);
  return it->second;
}

const std::vector<int>& PanelDataset::period_grid(const std::string& unit) const {
  int ui = unit_index(unit);
  if (ui < 0) {
    static const std::vector<int> empty;
    return empty;
  }
  return grids_[static_cast<std::size_t>(ui)];
}

std::optional<double> PanelDataset::value(const std::string& unit, int period,
                                          const std::string& var) const {
  auto cells = cells_.find(var);
  if (cells == cells_.end()) return std::nullopt;
  int ui = unit_index(unit);
  if (ui < 0) return std::nullopt;
  auto it = cells->second.find({ui, period});
  if (it == cells->second.end()) return std::nullopt;
  return it->second;
}

bool PanelDataset::has(const std::string& unit, int period, const std::string& var) const {
  return value(unit, period, var).has_value();
}

std::size_t PanelDataset::count(const std::string& var) const {
  return cells_for(var).size();
}

RowKeys PanelDataset::complete_keys(const std::vector<std::string>& vars) const {
  for (const auto& var : vars) cells_for(var);  // validate
  if (vars.empty()) return {};
  RowKeys keys;
  for (const auto& [key, value] : cells_for(vars.front())) {
    const auto& unit = units_[static_cast<std::size_t>(key.first)];
    bool complete = true;
    for (std::size_t j = 1; j < vars.size() && complete; ++j)
      complete = cells_for(vars[j]).count(key) > 0;
    if (complete) keys.push_back({unit, key.second});
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

SeriesView PanelDataset::series(const std::string& var) const {
  const auto& cells = cells_for(var);
  SeriesView view;
  view.variable = var;
  view.keys.reserve(cells.size());
  view.values.resize(static_cast<Index>(cells.size()));
  Index i = 0;
  for (const auto& [key, value] : cells) {
    view.keys.push_back({units_[static_cast<std::size_t>(key.first)], key.second});
    view.values(i++) = value;
  }
  return view;
}

SeriesView PanelDataset::lag_series(const std::string& var, int k) const {
  if (k < 1) raise(errc::config_error, "lag order must be at least 1");
  const auto& cells = cells_for(var);

  SeriesView view;
  view.variable = var;
  std::vector<double> values;
  for (std::size_t ui = 0; ui < units_.size(); ++ui) {
    const auto& grid = grids_[ui];
    // Positions of grid runs: the row at t needs t-k..t all on the grid.
    for (std::size_t pos = static_cast<std::size_t>(k); pos < grid.size(); ++pos) {
      int t = grid[pos];
      if (grid[pos - static_cast<std::size_t>(k)] != t - k) continue;
      bool consecutive = true;
      for (int step = 1; step <= k && consecutive; ++step)
        consecutive = grid[pos - static_cast<std::size_t>(step)] == t - step;
      if (!consecutive) continue;
      auto it = cells.find({static_cast<int>(ui), t - k});
      if (it == cells.end()) continue;
      view.keys.push_back({units_[ui], t});
      values.push_back(it->second);
    }
  }
  view.values = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  return view;
}

SeriesView PanelDataset::difference_series(const std::string& var) const {
  const auto& cells = cells_for(var);

  SeriesView view;
  view.variable = var;
  std::vector<double> values;
  for (auto it = cells.begin(); it != cells.end(); ++it) {
    auto prev = cells.find({it->first.first, it->first.second - 1});
    if (prev == cells.end()) continue;
    view.keys.push_back({units_[static_cast<std::size_t>(it->first.first)], it->first.second});
    values.push_back(it->second - prev->second);
  }
  view.values = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  return view;
}

PanelDataset PanelDataset::complete_cases(const std::vector<std::string>& vars) const {
  RowKeys keys = complete_keys(vars);
  std::vector<Record> kept;
  kept.reserve(keys.size() * vars.size());
  for (const auto& var : vars)
    for (const auto& key : keys)
      kept.push_back({key.unit, key.period, var, *value(key.unit, key.period, var)});
  std::map<std::string, std::string> tags;
  for (const auto& var : vars) {
    auto tag = unit_of_measure(var);
    if (tag) tags[var] = *tag;
  }
  return build(kept, std::move(tags));
}

std::vector<Record> PanelDataset::records() const {
  std::vector<Record> out;
  out.reserve(cell_count_);
  for (const auto& [var, cells] : cells_)
    for (const auto& [key, value] : cells)
      out.push_back({units_[static_cast<std::size_t>(key.first)], key.second, var, value});
  return out;
}

KeyedTable within_demean(const KeyedTable& table) {
  if (table.rows() == 0) raise(errc::insufficient_rows, "nothing to demean");
  if (static_cast<Index>(table.keys.size()) != table.rows())
    raise(errc::misaligned_groups, "keys do not match value rows");

  std::map<std::string, std::vector<Index>> by_unit;
  for (Index i = 0; i < table.rows(); ++i)
    by_unit[table.keys[static_cast<std::size_t>(i)].unit].push_back(i);

  KeyedTable out = table;
  for (const auto& [unit, rows] : by_unit) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(table.cols());
    for (Index i : rows) mean += table.values.row(i);
    mean /= static_cast<double>(rows.size());
    for (Index i : rows) out.values.row(i) -= mean;
  }
  return out;
}

}  // namespace panelkit
