#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "panelkit/core.hpp"

// Ordinary least-squares core shared by every panel estimator. Solves through
// a column-pivoted Householder QR, never by inverting the normal equations;
// rank deficiency is a hard error rather than silent column dropping.

namespace panelkit {

template <typename Scalar>
struct OlsFitT {
  VectorX<Scalar> coefficients;   // intercept first when present
  VectorX<Scalar> residuals;
  VectorX<Scalar> fitted;
  MatrixX<Scalar> design;         // the matrix actually solved, intercept included
  MatrixX<Scalar> normal_inverse; // (X'X)^{-1} on the same column order
  Index df_residual = 0;
  bool has_intercept = false;
  RowKeys row_keys;               // may be empty when rows carry no panel identity

  Index n_rows() const { return residuals.size(); }
  Scalar ssr() const { return residuals.squaredNorm(); }
};

using OlsFit = OlsFitT<double>;

struct OlsOptions {
  bool intercept = true;
  Index df_adjust = 0;  // absorbs the N group means for within fits
};

namespace detail {

// Relative tolerance on the triangular factor's diagonal for declaring rank
// deficiency.
inline constexpr double kRankTolerance = 1e-10;

}  // namespace detail

template <typename Scalar>
OlsFitT<Scalar> ols_fit(const MatrixX<Scalar>& regressors, const VectorX<Scalar>& y,
                        OlsOptions options = {}, RowKeys row_keys = {}) {
  const Index n = y.size();
  if (regressors.rows() != n)
    raise(errc::misaligned_groups, "design has " + std::to_string(regressors.rows()) +
                                       " rows but y has " + std::to_string(n));
  if (!row_keys.empty() && static_cast<Index>(row_keys.size()) != n)
    raise(errc::misaligned_groups, "row keys do not match row count");

  MatrixX<Scalar> X;
  if (options.intercept) {
    X.resize(n, regressors.cols() + 1);
    X.col(0).setOnes();
    X.rightCols(regressors.cols()) = regressors;
  } else {
    X = regressors;
  }

  const Index k = X.cols();
  if (k == 0) raise(errc::insufficient_rows, "design has no columns");
  if (n <= k)
    raise(errc::insufficient_rows, "need more rows (" + std::to_string(n) +
                                       ") than columns (" + std::to_string(k) + ")");

  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(X);
  VectorX<Scalar> r_diag = qr.matrixR().diagonal().head(k).cwiseAbs();
  Scalar r_max = r_diag.maxCoeff();
  if (r_max <= Scalar(0) || r_diag.minCoeff() < Scalar(detail::kRankTolerance) * r_max)
    raise(errc::rank_deficient, "collinear columns in design");

  OlsFitT<Scalar> fit;
  fit.coefficients = qr.solve(y);
  fit.fitted = X * fit.coefficients;
  fit.residuals = y - fit.fitted;
  fit.design = std::move(X);

  // X P = Q R  =>  (X'X)^{-1} = P (R'R)^{-1} P'
  MatrixX<Scalar> r_inv = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>()
                              .solve(MatrixX<Scalar>::Identity(k, k));
  MatrixX<Scalar> unpivoted = r_inv * r_inv.transpose();
  fit.normal_inverse = qr.colsPermutation() * unpivoted * qr.colsPermutation().transpose();

  fit.df_residual = n - k - options.df_adjust;
  fit.has_intercept = options.intercept;
  fit.row_keys = std::move(row_keys);
  return fit;
}

/// Coefficient-of-determination against the dependent vector the fit came
/// from. Centered: 1 - SSR / sum((y - mean)^2); uncentered: 1 - SSR / sum(y^2).
template <typename Scalar>
Scalar r_squared(const OlsFitT<Scalar>& fit, const VectorX<Scalar>& y, bool centered = true) {
  if (y.size() != fit.n_rows())
    raise(errc::misaligned_groups, "y does not match the fitted row count");
  Scalar tss;
  if (centered) {
    Scalar mean = y.mean();
    tss = (y.array() - mean).matrix().squaredNorm();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar floor = Scalar(64) * Scalar(y.size()) * (eps * (1 + std::abs(mean))) * (eps * (1 + std::abs(mean)));
    if (tss <= floor)
      raise(errc::zero_total_variation, "dependent variable is constant");
  } else {
    tss = y.squaredNorm();
    if (tss <= Scalar(0))
      raise(errc::zero_total_variation, "dependent variable is identically zero");
  }
  return 1 - fit.ssr() / tss;
}

}  // namespace panelkit
