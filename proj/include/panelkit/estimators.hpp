#pragma once

#include <string>
#include <vector>

#include "panelkit/core.hpp"
#include "panelkit/ols.hpp"
#include "panelkit/panel.hpp"
#include "panelkit/vcov.hpp"

// Panel estimators on top of the panel-store transforms and the OLS core:
// pooled levels, first differences (the headline estimator), within, and the
// random-effects quasi-demeaning transform that feeds the Hausman test.

namespace panelkit {

enum class Estimator { pooled, first_differences, within };

const char* estimator_name(Estimator estimator);

struct ModelSpec {
  std::string dependent;
  std::vector<std::string> regressors;
  int lag = 1;
  Estimator estimator = Estimator::first_differences;
  VcovKind vcov = VcovKind::arellano;

  void validate() const;
};

struct RegressionResult {
  ModelSpec spec;
  std::vector<std::string> coef_names;  // intercept first when present
  Vector coefficients;
  Matrix covariance;
  Vector std_errors;
  Vector t_stats;
  Vector p_values;
  double r2 = 0.0;
  Index n_obs = 0;
  Index df_residual = 0;
  Index n_units = 0;      // units contributing rows
  VcovKind vcov_kind = VcovKind::classical;
  RowKeys keys;           // residual row identities
  Vector residuals;
  OlsFit ols;             // underlying core fit (design, (X'X)^{-1})

  Index coef_count() const { return coefficients.size(); }
};

/// OLS with intercept on levels, regressors lagged by spec.lag. Supplies the
/// restricted (no-effects) residuals the Honda test starts from.
RegressionResult fit_pooled(const PanelDataset& ds, const ModelSpec& spec);

/// The differenced model: y_t - y_{t-1} on x_{t-lag} - x_{t-lag-1} with an
/// intercept, rows kept only where every differenced piece exists.
RegressionResult fit_first_differences(const PanelDataset& ds, const ModelSpec& spec);

/// Levels on lagged regressors after unit-demeaning over the listwise-complete
/// sample; no intercept column, df adjusted by the number of retained units.
RegressionResult fit_within(const PanelDataset& ds, const ModelSpec& spec);

/// Random-effects (Swamy-Arora) quasi-demeaning diagnostics and transformed
/// columns, on the same listwise sample the within estimator sees.
struct QuasiDemeanResult {
  RowKeys keys;
  Vector y;                 // y - theta_i * unit mean
  Matrix regressors;        // columnwise, same transform
  Vector intercept_column;  // 1 - theta_i per row
  Matrix regressors_raw;    // untransformed columns on the same rows
  Vector y_raw;
  std::vector<std::string> units;
  Vector theta;             // per unit, aligned with `units`
  double sigma2_e = 0.0;    // idiosyncratic variance from within residuals
  double sigma2_u = 0.0;    // unit-effect variance, floored at zero
};

QuasiDemeanResult quasi_demean(const PanelDataset& ds, const ModelSpec& spec);

namespace detail {

/// Inner join of a dependent series with regressor series on (unit, period).
struct JoinedDesign {
  RowKeys keys;
  Vector y;
  Matrix regressors;
};

JoinedDesign join_on_keys(const SeriesView& dependent, const std::vector<SeriesView>& regressors);

/// Re-keys a series k periods forward: the row at (i, t) moves to (i, t + k).
SeriesView shift_periods(SeriesView view, int k);

/// Levels design used by both within and quasi-demeaning: y at t, regressors
/// at t - lag.
JoinedDesign levels_design(const PanelDataset& ds, const ModelSpec& spec);

}  // namespace detail

}  // namespace panelkit
