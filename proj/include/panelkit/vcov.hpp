#pragma once

#include <map>
#include <string>
#include <vector>

#include "panelkit/core.hpp"
#include "panelkit/distributions.hpp"
#include "panelkit/ols.hpp"

// Coefficient covariance estimators and the inference layer on top of them.
// The robust estimator is the cluster-by-unit sandwich of Arellano (1987):
//   (X'X)^{-1} [ sum_g X_g' e_g e_g' X_g ] (X'X)^{-1}
// reported without small-sample scaling by default; the finite-cluster
// correction G/(G-1) * (n-1)/(n-k) is opt-in.

namespace panelkit {

enum class VcovKind { classical, arellano };

inline const char* vcov_kind_name(VcovKind kind) {
  return kind == VcovKind::classical ? "classical" : "arellano";
}

template <typename Scalar>
struct CovarianceEstimateT {
  MatrixX<Scalar> matrix;
  VcovKind kind = VcovKind::classical;
  Index cluster_count = 0;  // arellano only
};

using CovarianceEstimate = CovarianceEstimateT<double>;

template <typename Scalar>
CovarianceEstimateT<Scalar> vcov_classical(const OlsFitT<Scalar>& fit) {
  if (fit.df_residual <= 0) raise(errc::zero_df, "no residual degrees of freedom");
  Scalar s2 = fit.ssr() / Scalar(fit.df_residual);
  return {s2 * fit.normal_inverse, VcovKind::classical, 0};
}

struct ArellanoOptions {
  bool finite_cluster_correction = false;
};

/// Cluster labels may be any ordinal type; rows with equal labels share a
/// cluster. Row order within clusters does not matter.
template <typename Scalar, typename Label>
CovarianceEstimateT<Scalar> vcov_arellano(const OlsFitT<Scalar>& fit,
                                          const std::vector<Label>& groups,
                                          ArellanoOptions options = {}) {
  const Index n = fit.n_rows();
  const Index k = fit.design.cols();
  if (static_cast<Index>(groups.size()) != n)
    raise(errc::misaligned_groups, "group labels do not match fit rows");

  std::map<Label, std::vector<Index>> clusters;
  for (Index i = 0; i < n; ++i) clusters[groups[static_cast<std::size_t>(i)]].push_back(i);
  const Index g = static_cast<Index>(clusters.size());
  if (g < 2) raise(errc::single_cluster, "need at least two clusters");

  MatrixX<Scalar> meat = MatrixX<Scalar>::Zero(k, k);
  for (const auto& [label, rows] : clusters) {
    VectorX<Scalar> score = VectorX<Scalar>::Zero(k);
    for (Index i : rows) score += fit.design.row(i).transpose() * fit.residuals(i);
    meat.noalias() += score * score.transpose();
  }

  MatrixX<Scalar> cov = fit.normal_inverse * meat * fit.normal_inverse;
  if (options.finite_cluster_correction) {
    cov *= (Scalar(g) / Scalar(g - 1)) * (Scalar(n - 1) / Scalar(n - k));
  }
  // Symmetrize away the last-ulp asymmetry from the triple product.
  cov = ((cov + cov.transpose()) / 2).eval();

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eigen(cov, Eigen::EigenvaluesOnly);
  if (eigen.eigenvalues().minCoeff() < Scalar(-1e-10) * cov.trace())
    raise(errc::degenerate_variance, "cluster covariance lost positive semidefiniteness");
  return {std::move(cov), VcovKind::arellano, g};
}

/// Convenience: cluster on the unit component of the fit's row keys.
template <typename Scalar>
CovarianceEstimateT<Scalar> vcov_arellano_by_unit(const OlsFitT<Scalar>& fit,
                                                  ArellanoOptions options = {}) {
  if (fit.row_keys.empty())
    raise(errc::misaligned_groups, "fit carries no row keys to cluster on");
  std::vector<std::string> units;
  units.reserve(fit.row_keys.size());
  for (const auto& key : fit.row_keys) units.push_back(key.unit);
  return vcov_arellano(fit, units, options);
}

template <typename Scalar>
struct CoefInferenceT {
  VectorX<Scalar> std_errors;
  VectorX<Scalar> t_stats;
  VectorX<Scalar> p_values;
  std::vector<Index> zero_se_flags;  // coefficients with se == 0 and coef != 0
};

using CoefInference = CoefInferenceT<double>;

/// Standard errors from the covariance diagonal, t ratios and two-sided
/// Student-t p-values with the given degrees of freedom.
template <typename Scalar>
CoefInferenceT<Scalar> coef_inference(const VectorX<Scalar>& coefs,
                                      const CovarianceEstimateT<Scalar>& cov, Index df) {
  const Index k = coefs.size();
  if (cov.matrix.rows() != k || cov.matrix.cols() != k)
    raise(errc::misaligned_groups, "covariance dimension does not match coefficients");
  if (df <= 0) raise(errc::zero_df, "inference needs positive degrees of freedom");

  CoefInferenceT<Scalar> out;
  out.std_errors.resize(k);
  out.t_stats.resize(k);
  out.p_values.resize(k);
  for (Index j = 0; j < k; ++j) {
    Scalar se = std::sqrt(std::max(Scalar(0), cov.matrix(j, j)));
    out.std_errors(j) = se;
    if (se > Scalar(0)) {
      out.t_stats(j) = coefs(j) / se;
      out.p_values(j) = dist::student_t_two_sided(out.t_stats(j), Scalar(df));
    } else if (coefs(j) == Scalar(0)) {
      out.t_stats(j) = 0;
      out.p_values(j) = 1;
    } else {
      // Degenerate se with a nonzero coefficient: p = 0 by convention, flagged.
      out.t_stats(j) = coefs(j) > 0 ? std::numeric_limits<Scalar>::infinity()
                                    : -std::numeric_limits<Scalar>::infinity();
      out.p_values(j) = 0;
      out.zero_se_flags.push_back(j);
    }
  }
  return out;
}

}  // namespace panelkit
