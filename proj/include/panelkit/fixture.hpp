#pragma once

#include <cstdint>

#include "panelkit/panel.hpp"

// The synthetic 29-country, 2003-2017 panel shipped for offline runs. The
// differenced model holds by construction with known coefficients, the
// expenditure breakdown carries fixed planted shares, and a handful of cells
// are deliberately missing so the unbalanced code paths stay exercised.

namespace panelkit {

struct FixtureSpec {
  std::uint64_t seed = 580231409ULL;
  double intercept = 0.0;
  double wage_coefficient = 0.25;
  double oil_coefficient = -0.01;
  double noise_sd = 8.0;
};

PanelDataset fixture_panel(const FixtureSpec& spec = {});

/// Planted interior of the share matrix, in percent of TOTAL; rows are the
/// four performance sectors, columns the five funding sources.
const Eigen::Matrix<double, 4, 5>& fixture_share_percent();

}  // namespace panelkit
