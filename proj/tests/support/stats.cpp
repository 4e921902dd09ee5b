#include "stats.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace testsupport {

namespace {

// Regularized lower incomplete gamma P(a, x) by power series; valid x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction;
// valid x >= a+1.
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_p_value(double statistic, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("df must be positive");
  if (statistic <= 0.0) return 1.0;
  const double a = df / 2.0;
  const double x = statistic / 2.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_statistic(std::span<const std::uint64_t> observed,
                            std::span<const double> probabilities) {
  if (observed.size() != probabilities.size())
    throw std::invalid_argument("observed/probability size mismatch");
  std::uint64_t draws = 0;
  for (const std::uint64_t count : observed) draws += count;

  double statistic = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = static_cast<double>(draws) * probabilities[i];
    if (!(expected > 0.0)) throw std::invalid_argument("expected count must be positive");
    const double delta = static_cast<double>(observed[i]) - expected;
    statistic += delta * delta / expected;
  }
  return statistic;
}

}  // namespace testsupport
