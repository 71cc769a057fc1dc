#ifndef PBEAUTY_DYNAMICS_HPP
#define PBEAUTY_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pbeauty/model.hpp"

namespace pbeauty {

enum class PayoutKind { AllOrNothing, InverseDistance };

/// Closest-guess ties within this distance split the unit payout.
inline constexpr double kPayoutTieTolerance = 1e-12;

inline constexpr std::int64_t kDefaultMaxSteps = 100'000;
inline constexpr double kDefaultFixationThreshold = 1e-6;

/// How a generation's payouts become fitness.
///
/// Payouts are rescaled to [0, 1] by the largest payout and blended with a
/// baseline: fitness = 1 - s + s * payout. With s = 1 and AllOrNothing the
/// losers get zero fitness.
class PayoutScheme {
 public:
  /// Throws DomainError unless 0 < selection_strength <= 1 and epsilon > 0.
  PayoutScheme(PayoutKind kind, double selection_strength, double epsilon);

  static PayoutScheme all_or_nothing(double selection_strength);
  /// epsilon defaults to 1e-9 * c.
  static PayoutScheme inverse_distance(double selection_strength, const GameConfig& cfg);

  PayoutKind kind() const noexcept { return kind_; }
  double selection_strength() const noexcept { return selection_strength_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  PayoutKind kind_;
  double selection_strength_;
  double epsilon_;
};

/// Raw payouts, aligned with pop.types(). Types with zero frequency are not
/// in play and receive 0.
std::vector<double> payouts(const PopulationState& pop, const GameConfig& cfg, const PayoutScheme& scheme);

/// Fitness per type: 1 - s + s * payout / max(payout).
std::vector<double> fitness(const PopulationState& pop, const GameConfig& cfg, const PayoutScheme& scheme);

/// One generation of the discrete replicator: x_i' = x_i f_i / sum_j x_j f_j.
PopulationState replicator_step(const PopulationState& pop, const GameConfig& cfg, const PayoutScheme& scheme);

struct Fixation {
  PlayerType winner;
  std::int64_t generation;
};

struct Trajectory {
  std::vector<PlayerType> types;
  std::vector<std::vector<double>> steps;  // steps[g][i]: frequency of types[i] at generation g
  std::vector<double> target_series;       // target guess at generation g
  std::optional<Fixation> fixation;

  std::int64_t generations() const noexcept { return static_cast<std::int64_t>(steps.size()) - 1; }
};

/// Iterates replicator_step until some type reaches 1 - fixation_threshold
/// or max_steps generations have elapsed. Generation 0 is the initial state.
Trajectory simulate(const PopulationState& initial, const GameConfig& cfg, const PayoutScheme& scheme,
                    std::int64_t max_steps = kDefaultMaxSteps,
                    double fixation_threshold = kDefaultFixationThreshold);

/// Target guess as M = 0..N of N players switch from k to k+m steps.
std::vector<double> invasion_series(double k, double m, std::int64_t n, const GameConfig& cfg);

}  // namespace pbeauty

#endif
