#ifndef PBEAUTY_NUMERICS_HPP
#define PBEAUTY_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "pbeauty/errors.hpp"

namespace pbeauty::numerics {

struct BisectionResult {
  double root;
  std::pair<double, double> bracket;  // final bracket, contains root
  int iterations;
  double residual;  // |f(root)|
};

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs.
/// Halves the bracket until it collapses to adjacent doubles (or f(mid) is
/// exactly zero) and returns the evaluated midpoint with the smallest |f|, so
/// the root always lies strictly inside the original bracket. Throws
/// ConvergenceError if that residual exceeds tol or max_iter runs out first.
template <class F>
BisectionResult bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw DomainError(fmt::format("bisection bracket [{}, {}] has no sign change ({}, {})", lo, hi, f_lo, f_hi));
  }
  double best = lo;
  double best_residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (std::abs(f_mid) < best_residual) {
      best = mid;
      best_residual = std::abs(f_mid);
    }
    if (f_mid == 0.0) {
      ++it;
      break;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  if (!(best_residual <= tol)) {
    throw ConvergenceError(fmt::format("bisection stopped after {} iterations at {:.17g} with residual {:.3g} > tol {:.3g}",
                                       it, best, best_residual, tol));
  }
  return {best, {lo, hi}, it, best_residual};
}

/// Smallest x in [lo, hi] (to within tol) for which a monotone predicate
/// switches from false to true. Requires pred(hi) == true; pred(lo) is assumed
/// false. Returns the upper end of the final bracket, so pred(result) holds.
template <class Pred>
double bisect_threshold(Pred&& pred, double lo, double hi, double tol, int max_iter = 200) {
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

struct MinimumResult {
  double x;
  double value;
  int iterations;
};

/// Golden-section search for the minimum of a unimodal f on [a, b].
/// Terminates once the bracket is narrower than tol.
template <class F>
MinimumResult golden_section_minimize(F&& f, double a, double b, double tol, int max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  for (; it < max_iter && b - a > tol; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? MinimumResult{x1, f1, it} : MinimumResult{x2, f2, it};
}

/// Scans `grid` equally spaced points on [a, b] (endpoints included), then
/// refines around the best grid point by golden-section search. The returned
/// value is the smallest seen across the scan and the refinement.
template <class F>
MinimumResult scan_then_refine(F&& f, double a, double b, std::size_t grid, double tol) {
  if (grid < 3) grid = 3;
  const double h = (b - a) / static_cast<double>(grid - 1);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = i + 1 == grid ? b : a + h * static_cast<double>(i);
    const double v = f(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = best == 0 ? a : a + h * static_cast<double>(best - 1);
  const double hi = best + 1 >= grid ? b : a + h * static_cast<double>(best + 1);
  const auto refined = golden_section_minimize(f, lo, hi, tol);
  const double best_x = best + 1 == grid ? b : a + h * static_cast<double>(best);
  if (refined.value < best_value) return refined;
  return {best_x, best_value, refined.iterations};
}

}  // namespace pbeauty::numerics

#endif
