#include "pbeauty/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "pbeauty/errors.hpp"
#include "pbeauty/numerics.hpp"

namespace pbeauty {

namespace {

void require_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("p must lie in (0, 1), got {}", p));
}

void require_positive_m(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError(fmt::format("m must be > 0, got {}", m));
}

void require_n(std::int64_t n, std::int64_t lowest) {
  if (n < lowest) throw DomainError(fmt::format("N must be >= {}, got {}", lowest, n));
}

// p^e - 1, accurate when p^e is near 1.
double pow_minus_one(double p, double e) { return std::expm1(e * std::log(p)); }

// The unchecked kernels below are written as sums of terms that each vanish
// at p = 1, so the residual near p = 1 is not swamped by cancellation.
double phi_inf_kernel(double p, double m) { return (1.0 - p) + p * pow_minus_one(p, m - 1.0); }

double phi_fin_kernel(double p, double n, double m) {
  return phi_inf_kernel(p, m) - 2.0 * p * pow_minus_one(p, m) / (n + 1.0);
}

}  // namespace

const char* to_string(Favors f) noexcept {
  switch (f) {
    case Favors::HigherStep:
      return "higher-step";
    case Favors::LowerStep:
      return "lower-step";
    case Favors::Tie:
      return "tie";
  }
  return "?";
}

AdvantageSign AdvantageSign::classify(double value) noexcept {
  if (std::abs(value) <= kTieThreshold) return {value, Favors::Tie};
  return {value, value > 0.0 ? Favors::HigherStep : Favors::LowerStep};
}

Favors HeadToHeadDistances::winner() const noexcept {
  const double scale = std::max(true_low, true_high);
  if (scale == 0.0) return Favors::Tie;
  return AdvantageSign::classify((true_low - true_high) / scale).favors;
}

HeadToHeadDistances head_to_head_distances(double k, double m, double p, double c) {
  require_p(p);
  require_positive_m(m);
  if (!(k >= 0.0)) throw DomainError(fmt::format("k must be >= 0, got {}", k));
  if (!(c > 0.0)) throw DomainError(fmt::format("c must be > 0, got {}", c));

  const double pk = std::pow(p, k);
  const double pm = std::pow(p, m);
  const double low_guess = c * pk;
  const double high_guess = c * pk * pm;
  const double tgt = 0.5 * c * (pk * p + pk * pm * p);

  HeadToHeadDistances d{};
  d.closed_low = c * pk * (1.0 - p / 2.0 - pm * p / 2.0);
  d.closed_high = c * pk * (p / 2.0 + pm * p / 2.0 - pm);
  d.true_low = std::abs(low_guess - tgt);
  d.true_high = std::abs(high_guess - tgt);
  d.target = tgt;
  return d;
}

AdvantageSign head_to_head_margin(double k, double m, double p, double c) {
  require_p(p);
  require_positive_m(m);
  if (!(k >= 0.0)) throw DomainError(fmt::format("k must be >= 0, got {}", k));
  if (!(c > 0.0)) throw DomainError(fmt::format("c must be > 0, got {}", c));
  return AdvantageSign::classify(c * std::pow(p, k) * (1.0 - p) * (1.0 + std::pow(p, m)));
}

double phi_infinite(double p, double m) {
  require_p(p);
  require_positive_m(m);
  return phi_inf_kernel(p, m);
}

double phi_infinite_factored(double p, double m) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError(fmt::format("p must lie in (0, 1], got {}", p));
  if (!(m >= 1.0) || std::floor(m) != m) throw DomainError(fmt::format("m must be an integer >= 1, got {}", m));
  const auto terms = static_cast<std::int64_t>(m);
  double tail = 1.0;
  double power = 1.0;
  for (std::int64_t j = 1; j < terms; ++j) {
    power *= p;
    tail -= power;
  }
  return (1.0 - p) * tail;
}

double phi_infinite_limit(double p) {
  require_p(p);
  return 1.0 - 2.0 * p;
}

double p_min(double m) {
  if (!(m > 1.0) || !std::isfinite(m)) throw DomainError(fmt::format("p_min requires m > 1, got {}", m));
  return std::pow(2.0 / m, 1.0 / (m - 1.0));
}

RootResult p_star_infinite(double m, double tol) {
  if (!(m > 2.0)) throw NoRootError(fmt::format("phi_infinite has no interior root for m <= 2 (m = {})", m));
  if (!std::isfinite(m)) throw DomainError("m must be finite");
  if (!(tol > 0.0)) throw DomainError(fmt::format("tol must be > 0, got {}", tol));
  const double hi = p_min(m);
  const auto r = numerics::bisect([m](double p) { return phi_inf_kernel(p, m); }, 0.5, hi, tol, kDefaultMaxIter);
  return {r.root, r.bracket, r.iterations, r.residual};
}

double phi_finite(double p, std::int64_t n, double m) {
  require_p(p);
  require_n(n, 1);
  require_positive_m(m);
  return phi_fin_kernel(p, static_cast<double>(n), m);
}

double phi_finite_limit_m(double p, std::int64_t n) {
  require_p(p);
  require_n(n, 1);
  const double nn = static_cast<double>(n);
  return 1.0 - 2.0 * nn * p / (nn + 1.0);
}

InteriorMinimum interior_minimum(std::int64_t n, double m, std::size_t grid, double refine_tol) {
  require_n(n, 2);
  require_positive_m(m);
  const double nn = static_cast<double>(n);
  const auto r = numerics::scan_then_refine([nn, m](double p) { return phi_fin_kernel(p, nn, m); }, 0.5,
                                            1.0 - kRightMargin, grid, refine_tol);
  return {r.x, r.value};
}

bool exists_interior_root(std::int64_t n, double m, std::size_t grid, double refine_tol) {
  return interior_minimum(n, m, grid, refine_tol).value < 0.0;
}

std::optional<RootResult> p_star_finite(std::int64_t n, double m, double tol) {
  if (!(tol > 0.0)) throw DomainError(fmt::format("tol must be > 0, got {}", tol));
  const auto minimum = interior_minimum(n, m);
  if (!(minimum.value < 0.0)) return std::nullopt;
  const double nn = static_cast<double>(n);
  const auto r = numerics::bisect([nn, m](double p) { return phi_fin_kernel(p, nn, m); }, 0.5, minimum.p, tol,
                                  kDefaultMaxIter);
  return RootResult{r.root, r.bracket, r.iterations, r.residual};
}

std::optional<double> m_star(std::int64_t n, double tol, double m_max) {
  require_n(n, 2);
  if (!(m_max > 2.0)) throw DomainError(fmt::format("m_max must be > 2, got {}", m_max));
  if (!(tol > 0.0)) throw DomainError(fmt::format("tol must be > 0, got {}", tol));
  if (!exists_interior_root(n, m_max)) return std::nullopt;
  // No root exists at m <= 2 for any N, so 2 is a valid lower end.
  return numerics::bisect_threshold([n](double m) { return exists_interior_root(n, m); }, 2.0, m_max, tol);
}

std::optional<std::int64_t> n_star(double m, std::int64_t n_max) {
  if (!(m > 2.0)) throw NoRootError(fmt::format("no population size yields a root for m <= 2 (m = {})", m));
  require_positive_m(m);
  require_n(n_max, 2);
  if (!exists_interior_root(n_max, m)) return std::nullopt;
  if (exists_interior_root(2, m)) return 2;

  // Gallop to a bracket (lo, hi] with no root at lo and a root at hi.
  std::int64_t lo = 2;
  std::int64_t hi = 4;
  while (hi < n_max && !exists_interior_root(hi, m)) {
    lo = hi;
    hi = std::min(hi * 2, n_max);
  }
  hi = std::min(hi, n_max);
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (exists_interior_root(mid, m)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<CriticalCurvePoint> trace_m_star(std::int64_t n_lo, std::int64_t n_hi, double tol, double m_max,
                                             unsigned threads) {
  require_n(n_lo, 2);
  if (n_hi < n_lo) throw DomainError(fmt::format("empty N range {}..{}", n_lo, n_hi));
  // Validate up front: workers must not throw.
  if (!(m_max > 2.0)) throw DomainError(fmt::format("m_max must be > 2, got {}", m_max));
  if (!(tol > 0.0)) throw DomainError(fmt::format("tol must be > 0, got {}", tol));
  const auto count = static_cast<std::size_t>(n_hi - n_lo + 1);
  std::vector<CriticalCurvePoint> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const std::int64_t n = n_lo + static_cast<std::int64_t>(i);
      out[i] = {n, m_star(n, tol, m_max)};
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  return out;
}

}  // namespace pbeauty
