#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "panelkit/distributions.hpp"

using namespace panelkit;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("normal tails") {
  CHECK(dist::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dist::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(dist::normal_upper_tail(1.6448536269514722) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(dist::normal_upper_tail(-3.0) + dist::normal_cdf(-3.0) == doctest::Approx(1.0));
}

TEST_CASE("student t cdf matches closed forms at df = 1 and 2") {
  // df = 1 is Cauchy; df = 2 has an elementary cdf.
  for (double t : {-6.0, -1.3, -0.2, 0.0, 0.7, 2.9, 8.0}) {
    double cauchy = 0.5 + std::atan(t) / kPi;
    CHECK(dist::student_t_cdf(t, 1.0) == doctest::Approx(cauchy).epsilon(1e-12));
    double df2 = 0.5 + t / (2.0 * std::sqrt(2.0) * std::sqrt(1.0 + t * t / 2.0));
    CHECK(dist::student_t_cdf(t, 2.0) == doctest::Approx(df2).epsilon(1e-12));
  }
}

TEST_CASE("student t cdf reference values") {
  // Published table values at x = -6.
  CHECK(dist::student_t_cdf(-6.0, 1.0) == doctest::Approx(0.0525684567).epsilon(1e-8));
  CHECK(dist::student_t_cdf(-6.0, 2.0) == doctest::Approx(0.0133357366).epsilon(1e-8));
  CHECK(dist::student_t_cdf(-6.0, 3.4) == doctest::Approx(0.0032139939).epsilon(1e-7));
  CHECK(dist::student_t_cdf(-6.0, 12.3) == doctest::Approx(0.0000280358).epsilon(1e-6));
}

TEST_CASE("two-sided student t") {
  CHECK(dist::student_t_two_sided(0.0, 7.0) == doctest::Approx(1.0));
  // t_{0.975,10} = 2.2281388519649385
  CHECK(dist::student_t_two_sided(2.2281388519649385, 10.0) == doctest::Approx(0.05).epsilon(1e-10));
  // Large df approaches the normal: p(1.96) -> 0.05 within 0.002.
  CHECK(dist::student_t_two_sided(1.96, 1e6) == doctest::Approx(0.05).epsilon(0.002));
  CHECK(dist::student_t_two_sided(3.0, 30.0) < dist::student_t_two_sided(2.0, 30.0));
}

TEST_CASE("chi-squared upper tail closed forms") {
  for (double x : {0.1, 1.0, 3.7, 9.2}) {
    CHECK(dist::chi_squared_upper(x, 2.0) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
    CHECK(dist::chi_squared_upper(x, 4.0) ==
          doctest::Approx(std::exp(-x / 2) * (1 + x / 2)).epsilon(1e-12));
    // df = 1 equals a folded normal tail.
    CHECK(dist::chi_squared_upper(x, 1.0) ==
          doctest::Approx(2.0 * dist::normal_upper_tail(std::sqrt(x))).epsilon(1e-10));
  }
  CHECK(dist::chi_squared_upper(5.991464547107979, 2.0) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(dist::chi_squared_upper(0.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("incomplete beta endpoints and symmetry") {
  CHECK(dist::reg_incomplete_beta(0.0, 2.0, 3.0) == doctest::Approx(0.0));
  CHECK(dist::reg_incomplete_beta(1.0, 2.0, 3.0) == doctest::Approx(1.0));
  for (double x : {0.05, 0.3, 0.5, 0.77}) {
    double forward = dist::reg_incomplete_beta(x, 1.5, 4.0);
    double backward = dist::reg_incomplete_beta(1 - x, 4.0, 1.5);
    CHECK(forward == doctest::Approx(1 - backward).epsilon(1e-12));
  }
  // Uniform case a = b = 1: I_x = x.
  CHECK(dist::reg_incomplete_beta(0.42, 1.0, 1.0) == doctest::Approx(0.42).epsilon(1e-13));
}
