#pragma once

#include <cmath>
#include <limits>

// Tail probabilities used for inference: standard normal, Student-t and
// chi-squared. Implemented via the regularized incomplete beta / gamma
// functions (Lentz continued fractions, series expansion) so the library
// carries no dependency beyond <cmath>.

namespace panelkit::dist {

template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  return Scalar(0.5) * std::erfc(-z / std::sqrt(Scalar(2)));
}

template <typename Scalar>
Scalar normal_upper_tail(Scalar z) {
  return Scalar(0.5) * std::erfc(z / std::sqrt(Scalar(2)));
}

namespace detail {

// Continued fraction for the regularized incomplete beta, modified Lentz.
template <typename Scalar>
Scalar beta_cf(Scalar x, Scalar a, Scalar b) {
  const Scalar tiny = std::numeric_limits<Scalar>::min() / std::numeric_limits<Scalar>::epsilon();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const int max_iter = 300;

  Scalar qab = a + b;
  Scalar qap = a + 1;
  Scalar qam = a - 1;
  Scalar c = 1;
  Scalar d = 1 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1 / d;
  Scalar h = d;
  for (int m = 1; m <= max_iter; ++m) {
    Scalar m2 = Scalar(2 * m);
    Scalar aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    Scalar del = d * c;
    h *= del;
    if (std::abs(del - 1) <= eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
template <typename Scalar>
Scalar reg_incomplete_beta(Scalar x, Scalar a, Scalar b) {
  if (!(a > 0) || !(b > 0) || !(x >= 0 && x <= 1)) return std::numeric_limits<Scalar>::quiet_NaN();
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  Scalar log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  Scalar front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) {
    return front * detail::beta_cf(x, a, b) / a;
  }
  return 1 - front * detail::beta_cf(1 - x, b, a) / b;
}

/// Regularized lower incomplete gamma P(a, x).
template <typename Scalar>
Scalar reg_lower_gamma(Scalar a, Scalar x) {
  if (!(a > 0) || !(x >= 0)) return std::numeric_limits<Scalar>::quiet_NaN();
  if (x == 0) return 0;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar log_gamma_a = std::lgamma(a);
  if (x < a + 1) {
    // Series representation.
    Scalar ap = a;
    Scalar sum = 1 / a;
    Scalar del = sum;
    for (int n = 1; n <= 500; ++n) {
      ap += 1;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
  }
  // Continued fraction for the upper tail, modified Lentz.
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;
  Scalar b = x + 1 - a;
  Scalar c = 1 / tiny;
  Scalar d = 1 / b;
  Scalar h = d;
  for (int i = 1; i <= 500; ++i) {
    Scalar an = -Scalar(i) * (Scalar(i) - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    Scalar del = d * c;
    h *= del;
    if (std::abs(del - 1) <= eps) break;
  }
  Scalar upper = std::exp(-x + a * std::log(x) - log_gamma_a) * h;
  return 1 - upper;
}

template <typename Scalar>
Scalar reg_upper_gamma(Scalar a, Scalar x) {
  return 1 - reg_lower_gamma(a, x);
}

/// P(T <= t) for Student-t with df degrees of freedom.
template <typename Scalar>
Scalar student_t_cdf(Scalar t, Scalar df) {
  if (!(df > 0)) return std::numeric_limits<Scalar>::quiet_NaN();
  Scalar tail = Scalar(0.5) * reg_incomplete_beta(df / (df + t * t), df / 2, Scalar(0.5));
  return t >= 0 ? 1 - tail : tail;
}

/// Two-sided p-value P(|T| >= |t|).
template <typename Scalar>
Scalar student_t_two_sided(Scalar t, Scalar df) {
  if (!(df > 0)) return std::numeric_limits<Scalar>::quiet_NaN();
  if (std::isinf(t)) return 0;
  return reg_incomplete_beta(df / (df + t * t), df / 2, Scalar(0.5));
}

/// Upper tail P(X >= x) of chi-squared with df degrees of freedom.
template <typename Scalar>
Scalar chi_squared_upper(Scalar x, Scalar df) {
  if (!(df > 0)) return std::numeric_limits<Scalar>::quiet_NaN();
  if (x <= 0) return 1;
  return reg_upper_gamma(df / 2, x / 2);
}

}  // namespace panelkit::dist
