#pragma once

#include <cmath>
#include <concepts>
#include <functional>

#include "bfi/errors.hpp"

namespace bfi {

/// Convergence controls for the iterative kernels.
struct SpecFunConfig {
  double epsilon = 1e-14;
  int max_iterations = 300;

  /// Throws DomainError unless 0 < epsilon < 1e-6 and max_iterations >= 50.
  void validate() const;
};

/// ln Gamma(a) for a > 0.
///
/// Lanczos approximation (g = 671/128, 14 terms) below 10 and Stirling's
/// series with eight correction terms from 10 up. Accurate to about 1e-15
/// relative away from the zeros at 1 and 2.
double log_gamma(double a);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
///
/// Power series for x < a + 1, modified Lentz continued fraction for the
/// complement otherwise. The common prefactor x^a e^-x / Gamma(a) is formed in
/// log space; for a >= 10 it is rearranged around x = a so that the large
/// terms cancel analytically instead of in floating point.
double reg_lower_inc_gamma(double a, double x, const SpecFunConfig& cfg = {});

/// Bisection on [lo, hi] for a function whose values at the ends differ in
/// sign. Returns once |f(mid)| <= tol, the bracket is narrower than tol, or the
/// bracket cannot be split further in double precision.
template <typename F>
  requires std::invocable<F&, double>
double bisect_root(F&& f, double lo, double hi, double tol, int max_iterations = 200) {
  if (!(lo < hi)) throw DomainError("bisect_root: require lo < hi");
  if (!(tol > 0.0)) throw DomainError("bisect_root: tolerance must be positive");

  double f_lo = std::invoke(f, lo);
  const double f_hi = std::invoke(f, hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw BracketError("bisect_root: f(lo) and f(hi) have the same sign");
  }

  for (int it = 0; it < max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = std::invoke(f, mid);
    if (std::abs(f_mid) <= tol || hi - lo <= tol || mid <= lo || mid >= hi) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisect_root: bracket did not shrink below tolerance", max_iterations);
}

}  // namespace bfi
