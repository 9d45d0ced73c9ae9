#include "panelkit/estimators.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace panelkit {

const char* estimator_name(Estimator estimator) {
  switch (estimator) {
    case Estimator::pooled: return "pooled";
    case Estimator::first_differences: return "first-differences";
    case Estimator::within: return "within";
  }
  return "?";
}

void ModelSpec::validate() const {
  if (dependent.empty()) raise(errc::config_error, "model has no dependent variable");
  if (regressors.empty()) raise(errc::config_error, "model has no regressors");
  if (lag < 0) raise(errc::config_error, "lag must be nonnegative");
  if (std::find(regressors.begin(), regressors.end(), dependent) != regressors.end())
    raise(errc::config_error, "dependent variable " + dependent + " is also a regressor");
}

namespace detail {

SeriesView shift_periods(SeriesView view, int k) {
  for (auto& key : view.keys) key.period += k;
  return view;
}

JoinedDesign join_on_keys(const SeriesView& dependent, const std::vector<SeriesView>& regressors) {
  std::vector<std::map<RowKey, double>> lookup(regressors.size());
  for (std::size_t j = 0; j < regressors.size(); ++j)
    for (Index i = 0; i < regressors[j].size(); ++i)
      lookup[j].emplace(regressors[j].keys[static_cast<std::size_t>(i)], regressors[j].values(i));

  JoinedDesign out;
  std::vector<double> y_rows;
  std::vector<std::vector<double>> x_rows;
  for (Index i = 0; i < dependent.size(); ++i) {
    const RowKey& key = dependent.keys[static_cast<std::size_t>(i)];
    std::vector<double> row(regressors.size());
    bool complete = true;
    for (std::size_t j = 0; j < regressors.size() && complete; ++j) {
      auto it = lookup[j].find(key);
      if (it == lookup[j].end())
        complete = false;
      else
        row[j] = it->second;
    }
    if (!complete) continue;
    out.keys.push_back(key);
    y_rows.push_back(dependent.values(i));
    x_rows.push_back(std::move(row));
  }

  const Index n = static_cast<Index>(y_rows.size());
  const Index m = static_cast<Index>(regressors.size());
  out.y = Eigen::Map<const Vector>(y_rows.data(), n);
  out.regressors.resize(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j)
      out.regressors(i, j) = x_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

JoinedDesign levels_design(const PanelDataset& ds, const ModelSpec& spec) {
  std::vector<SeriesView> regs;
  regs.reserve(spec.regressors.size());
  for (const auto& name : spec.regressors)
    regs.push_back(spec.lag == 0 ? ds.series(name) : ds.lag_series(name, spec.lag));
  return join_on_keys(ds.series(spec.dependent), regs);
}

namespace {

Index count_units(const RowKeys& keys) {
  std::set<std::string> units;
  for (const auto& key : keys) units.insert(key.unit);
  return static_cast<Index>(units.size());
}

RegressionResult finish(const ModelSpec& spec, OlsFit fit, const Vector& y_for_r2,
                        std::vector<std::string> coef_names) {
  CovarianceEstimate cov = spec.vcov == VcovKind::arellano ? vcov_arellano_by_unit(fit)
                                                           : vcov_classical(fit);
  CoefInference inference = coef_inference(fit.coefficients, cov, fit.df_residual);

  RegressionResult result;
  result.spec = spec;
  result.coef_names = std::move(coef_names);
  result.coefficients = fit.coefficients;
  result.covariance = cov.matrix;
  result.std_errors = inference.std_errors;
  result.t_stats = inference.t_stats;
  result.p_values = inference.p_values;
  result.r2 = r_squared(fit, y_for_r2, /*centered=*/true);
  result.n_obs = fit.n_rows();
  result.df_residual = fit.df_residual;
  result.n_units = count_units(fit.row_keys);
  result.vcov_kind = spec.vcov;
  result.keys = fit.row_keys;
  result.residuals = fit.residuals;
  result.ols = std::move(fit);
  return result;
}

std::vector<std::string> names_with_intercept(const ModelSpec& spec) {
  std::vector<std::string> names{"intercept"};
  names.insert(names.end(), spec.regressors.begin(), spec.regressors.end());
  return names;
}

}  // namespace

}  // namespace detail

RegressionResult fit_pooled(const PanelDataset& ds, const ModelSpec& spec) {
  spec.validate();
  detail::JoinedDesign design = detail::levels_design(ds, spec);
  if (design.keys.empty()) raise(errc::empty_after_transforms, "no rows survive the transforms");
  OlsFit fit = ols_fit(design.regressors, design.y, {.intercept = true}, design.keys);
  return detail::finish(spec, std::move(fit), design.y, detail::names_with_intercept(spec));
}

RegressionResult fit_first_differences(const PanelDataset& ds, const ModelSpec& spec) {
  spec.validate();
  std::vector<SeriesView> regs;
  regs.reserve(spec.regressors.size());
  for (const auto& name : spec.regressors)
    regs.push_back(detail::shift_periods(ds.difference_series(name), spec.lag));
  detail::JoinedDesign design = detail::join_on_keys(ds.difference_series(spec.dependent), regs);
  if (design.keys.empty()) raise(errc::empty_after_transforms, "no rows survive differencing");
  OlsFit fit = ols_fit(design.regressors, design.y, {.intercept = true}, design.keys);
  return detail::finish(spec, std::move(fit), design.y, detail::names_with_intercept(spec));
}

namespace detail {
namespace {

/// Drops units with fewer than two complete rows; errors only when nothing
/// remains.
JoinedDesign keep_multi_row_units(const JoinedDesign& design) {
  std::map<std::string, Index> rows_per_unit;
  for (const auto& key : design.keys) ++rows_per_unit[key.unit];

  JoinedDesign kept;
  std::vector<Index> keep;
  for (Index i = 0; i < static_cast<Index>(design.keys.size()); ++i)
    if (rows_per_unit[design.keys[static_cast<std::size_t>(i)].unit] >= 2) keep.push_back(i);
  if (keep.empty())
    raise(errc::unit_too_short, "every unit has fewer than two complete rows");

  kept.y.resize(static_cast<Index>(keep.size()));
  kept.regressors.resize(static_cast<Index>(keep.size()), design.regressors.cols());
  for (Index i = 0; i < static_cast<Index>(keep.size()); ++i) {
    kept.keys.push_back(design.keys[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])]);
    kept.y(i) = design.y(keep[static_cast<std::size_t>(i)]);
    kept.regressors.row(i) = design.regressors.row(keep[static_cast<std::size_t>(i)]);
  }
  return kept;
}

}  // namespace

/// Shared by fit_within and quasi_demean: the demeaned core fit.
OlsFit within_core_fit(const PanelDataset& ds, const ModelSpec& spec, Vector* demeaned_y_out) {
  JoinedDesign design = levels_design(ds, spec);
  if (design.keys.empty()) raise(errc::empty_after_transforms, "no rows survive the transforms");
  design = keep_multi_row_units(design);

  KeyedTable table;
  table.keys = design.keys;
  table.values.resize(design.y.size(), design.regressors.cols() + 1);
  table.values.col(0) = design.y;
  table.values.rightCols(design.regressors.cols()) = design.regressors;
  KeyedTable demeaned = within_demean(table);

  Vector y_tilde = demeaned.values.col(0);
  Matrix x_tilde = demeaned.values.rightCols(design.regressors.cols());
  Index n_units = 0;
  {
    std::set<std::string> units;
    for (const auto& key : design.keys) units.insert(key.unit);
    n_units = static_cast<Index>(units.size());
  }
  OlsFit fit = ols_fit(x_tilde, y_tilde, {.intercept = false, .df_adjust = n_units}, design.keys);
  if (demeaned_y_out) *demeaned_y_out = std::move(y_tilde);
  return fit;
}

}  // namespace detail

RegressionResult fit_within(const PanelDataset& ds, const ModelSpec& spec) {
  spec.validate();
  Vector y_tilde;
  OlsFit fit = detail::within_core_fit(ds, spec, &y_tilde);
  return detail::finish(spec, std::move(fit), y_tilde, spec.regressors);
}

QuasiDemeanResult quasi_demean(const PanelDataset& ds, const ModelSpec& spec) {
  spec.validate();

  // Idiosyncratic variance from the within fit (df = n - N - M).
  OlsFit within_fit = detail::within_core_fit(ds, spec, nullptr);
  if (within_fit.df_residual <= 0)
    raise(errc::degenerate_variance, "within fit has no residual degrees of freedom");
  double sigma2_e = within_fit.ssr() / static_cast<double>(within_fit.df_residual);
  if (!(sigma2_e > 0)) raise(errc::degenerate_variance, "within residual variance is zero");

  // Between regression on unit means, all units with at least one row.
  detail::JoinedDesign design = detail::levels_design(ds, spec);
  if (design.keys.empty()) raise(errc::empty_after_transforms, "no rows survive the transforms");
  const Index m = design.regressors.cols();

  std::map<std::string, std::vector<Index>> rows_by_unit;
  for (Index i = 0; i < static_cast<Index>(design.keys.size()); ++i)
    rows_by_unit[design.keys[static_cast<std::size_t>(i)].unit].push_back(i);
  const Index n_units = static_cast<Index>(rows_by_unit.size());
  if (n_units <= m + 1)
    raise(errc::degenerate_variance, "too few units for the between regression");

  Vector y_bar(n_units);
  Matrix x_bar(n_units, m);
  Vector t_i(n_units);
  std::vector<std::string> units;
  units.reserve(static_cast<std::size_t>(n_units));
  Index u = 0;
  for (const auto& [unit, rows] : rows_by_unit) {
    double yb = 0;
    Eigen::RowVectorXd xb = Eigen::RowVectorXd::Zero(m);
    for (Index i : rows) {
      yb += design.y(i);
      xb += design.regressors.row(i);
    }
    y_bar(u) = yb / static_cast<double>(rows.size());
    x_bar.row(u) = xb / static_cast<double>(rows.size());
    t_i(u) = static_cast<double>(rows.size());
    units.push_back(unit);
    ++u;
  }

  OlsFit between = ols_fit(x_bar, y_bar, {.intercept = true});
  double s2_between = between.ssr() / static_cast<double>(between.df_residual);
  double t_mean = t_i.mean();
  double sigma2_u = std::max(0.0, s2_between - sigma2_e / t_mean);

  QuasiDemeanResult out;
  out.units = units;
  out.theta.resize(n_units);
  for (Index i = 0; i < n_units; ++i)
    out.theta(i) = 1.0 - std::sqrt(sigma2_e / (sigma2_e + t_i(i) * sigma2_u));
  out.sigma2_e = sigma2_e;
  out.sigma2_u = sigma2_u;

  std::map<std::string, Index> unit_pos;
  for (Index i = 0; i < n_units; ++i) unit_pos[units[static_cast<std::size_t>(i)]] = i;

  const Index n = static_cast<Index>(design.keys.size());
  out.keys = design.keys;
  out.y.resize(n);
  out.regressors.resize(n, m);
  out.intercept_column.resize(n);
  out.y_raw = design.y;
  out.regressors_raw = design.regressors;
  for (Index i = 0; i < n; ++i) {
    Index pos = unit_pos[design.keys[static_cast<std::size_t>(i)].unit];
    double theta = out.theta(pos);
    out.y(i) = design.y(i) - theta * y_bar(pos);
    out.regressors.row(i) = design.regressors.row(i) - theta * x_bar.row(pos);
    out.intercept_column(i) = 1.0 - theta;
  }
  return out;
}

}  // namespace panelkit
