#pragma once

#include <string>
#include <vector>

#include "panelkit/montecarlo.hpp"
#include "panelkit/panel.hpp"

namespace testutil {

using panelkit::Matrix;
using panelkit::Record;
using panelkit::Vector;

inline Matrix random_matrix(panelkit::mc::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline Vector random_vector(panelkit::mc::Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

/// Balanced panel with the given variables drawn i.i.d. standard normal.
inline panelkit::PanelDataset random_panel(panelkit::mc::Rng& rng,
                                           const std::vector<std::string>& vars, int n_units,
                                           int n_periods, int first_year = 2003,
                                           double missing_rate = 0.0) {
  std::vector<Record> records;
  for (int u = 0; u < n_units; ++u) {
    char name[16];
    std::snprintf(name, sizeof(name), "U%02d", u);
    for (int t = 0; t < n_periods; ++t)
      for (const auto& var : vars) {
        if (missing_rate > 0 && rng.uniform() < missing_rate) continue;
        records.push_back({name, first_year + t, var, rng.normal()});
      }
  }
  return panelkit::PanelDataset::build(records);
}

}  // namespace testutil
