#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stats.hpp"

using testsupport::chi_square_p_value;
using testsupport::chi_square_statistic;

namespace {

// For even df = 2m the chi-square upper tail has the closed form
// Q(x) = exp(-x/2) * sum_{k=0}^{m-1} (x/2)^k / k!, a fully independent check
// of the incomplete-gamma implementation.
double even_df_upper_tail(double x, int df) {
  const int m = df / 2;
  const double half = x / 2.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < m; ++k) {
    term *= half / k;
    sum += term;
  }
  return std::exp(-half) * sum;
}

}  // namespace

TEST_CASE("chi-square p-value matches the even-df closed form") {
  const std::vector<double> grid = {0.05, 0.3, 1.0, 2.0, 3.7, 5.0, 9.0, 15.0, 30.0, 80.0};
  for (const int df : {2, 4, 6, 10, 20}) {
    for (const double x : grid) {
      CAPTURE(df);
      CAPTURE(x);
      CHECK(chi_square_p_value(x, df) ==
            doctest::Approx(even_df_upper_tail(x, df)).epsilon(1e-12));
    }
  }
}

TEST_CASE("chi-square p-value matches erfc for one degree of freedom") {
  for (const double x : {0.01, 0.3, 1.0, 2.5, 6.0, 14.0}) {
    CAPTURE(x);
    CHECK(chi_square_p_value(x, 1) == doctest::Approx(std::erfc(std::sqrt(x / 2.0))).epsilon(1e-12));
  }
}

TEST_CASE("chi-square p-value edge behavior") {
  CHECK(chi_square_p_value(0.0, 5) == 1.0);
  CHECK(chi_square_p_value(-3.0, 5) == 1.0);
  // Monotone decreasing in the statistic.
  double previous = 1.0;
  for (double x = 0.5; x < 60.0; x += 0.5) {
    const double p = chi_square_p_value(x, 7);
    CHECK(p <= previous);
    previous = p;
  }
  CHECK_THROWS_AS(chi_square_p_value(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("Pearson statistic hand case") {
  const std::vector<std::uint64_t> observed = {30, 70};
  const std::vector<double> probabilities = {0.5, 0.5};
  // Expected 50/50: ((30-50)^2 + (70-50)^2) / 50 = 16.
  CHECK(chi_square_statistic(observed, probabilities) == doctest::Approx(16.0).epsilon(1e-12));
}
