#ifndef PBEAUTY_ANALYSIS_HPP
#define PBEAUTY_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace pbeauty {

/// |phi| at or below this counts as a tie.
inline constexpr double kTieThreshold = 1e-15;

/// Roots are sought on (1/2, 1 - kRightMargin]; phi(1) = 0 always and is excluded.
inline constexpr double kRightMargin = 1e-9;

inline constexpr double kDefaultRootTol = 1e-12;
inline constexpr int kDefaultMaxIter = 200;
inline constexpr std::size_t kDefaultScanGrid = 1024;
inline constexpr double kDefaultRefineTol = 1e-13;
inline constexpr double kDefaultCurveTol = 1e-6;
inline constexpr double kDefaultMMax = 1000.0;

enum class Favors { HigherStep, LowerStep, Tie };

const char* to_string(Favors f) noexcept;

/// An advantage value and which of the two players it favours.
/// Positive means the higher-step player is strictly closer to the target.
struct AdvantageSign {
  double value;
  Favors favors;

  static AdvantageSign classify(double value) noexcept;
};

/// Distances of a k-player and a (k+m)-player to the target of their
/// two-player game.
///
/// `closed_*` are the textbook closed forms, which assume the higher-step
/// guess lies below the target. That assumption fails when
/// p^m > (p + p^(m+1)) / 2 and `closed_high` turns negative there.
/// `true_*` are |guess - target| and always decide the winner.
struct HeadToHeadDistances {
  double closed_low;
  double closed_high;
  double true_low;
  double true_high;
  double target;

  /// True when the closed form for the higher-step player is not a distance.
  bool closed_form_invalid() const noexcept { return closed_high < 0.0; }

  Favors winner() const noexcept;
};

HeadToHeadDistances head_to_head_distances(double k, double m, double p, double c);

/// c p^k (1 - p)(1 + p^m); equal to closed_low - closed_high.
AdvantageSign head_to_head_margin(double k, double m, double p, double c);

/// 1 - 2p + p^m: the invader's advantage in an infinitely large population.
double phi_infinite(double p, double m);

/// (1 - p)(1 - p - p^2 - ... - p^(m-1)) for integer m >= 1; p = 1 is allowed.
double phi_infinite_factored(double p, double m);

/// 1 - 2p, the pointwise limit of phi_infinite as m grows.
double phi_infinite_limit(double p);

/// (2/m)^(1/(m-1)), the interior minimiser of phi_infinite; requires m > 1.
double p_min(double m);

struct RootResult {
  double p_star;
  std::pair<double, double> bracket;
  int iterations;
  double residual;
};

/// Unique root of phi_infinite in (1/2, p_min(m)). Throws NoRootError for m <= 2.
RootResult p_star_infinite(double m, double tol = kDefaultRootTol);

/// 1 - 2p (N + p^m)/(N + 1) + p^m: the advantage of one (k+m)-player
/// entering N k-players.
double phi_finite(double p, std::int64_t n, double m);

/// 1 - 2Np/(N+1), the limit of phi_finite as m grows. Root at 1/2 + 1/(2N).
double phi_finite_limit_m(double p, std::int64_t n);

struct InteriorMinimum {
  double p;
  double value;
};

/// Minimum of phi_finite over [1/2, 1 - kRightMargin].
InteriorMinimum interior_minimum(std::int64_t n, double m, std::size_t grid = kDefaultScanGrid,
                                 double refine_tol = kDefaultRefineTol);

/// Whether phi_finite has a root in (1/2, 1), decided by the sign of its
/// interior minimum. Requires N >= 2 and m > 0.
bool exists_interior_root(std::int64_t n, double m, std::size_t grid = kDefaultScanGrid,
                          double refine_tol = kDefaultRefineTol);

/// The root of phi_finite in (1/2, 1), or nullopt when none exists.
std::optional<RootResult> p_star_finite(std::int64_t n, double m, double tol = kDefaultRootTol);

/// A point on the critical curve: the smallest step gap with a root at this N.
struct CriticalCurvePoint {
  std::int64_t n;
  std::optional<double> m_star;
};

/// Smallest m (to within tol) for which an interior root exists at this N.
/// The returned value always admits a root. nullopt when m_max has none.
std::optional<double> m_star(std::int64_t n, double tol = kDefaultCurveTol, double m_max = kDefaultMMax);

/// Smallest N <= n_max with an interior root at step gap m.
/// Throws NoRootError for m <= 2.
std::optional<std::int64_t> n_star(double m, std::int64_t n_max);

/// m_star over n_lo..n_hi inclusive, evaluated on worker threads.
/// Results are ordered by N.
std::vector<CriticalCurvePoint> trace_m_star(std::int64_t n_lo, std::int64_t n_hi, double tol = kDefaultCurveTol,
                                             double m_max = kDefaultMMax, unsigned threads = 0);

}  // namespace pbeauty

#endif
