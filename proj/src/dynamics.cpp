#include "pbeauty/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pbeauty/errors.hpp"

namespace pbeauty {

PayoutScheme::PayoutScheme(PayoutKind kind, double selection_strength, double epsilon)
    : kind_(kind), selection_strength_(selection_strength), epsilon_(epsilon) {
  if (!(selection_strength > 0.0 && selection_strength <= 1.0)) {
    throw DomainError(fmt::format("selection strength must lie in (0, 1], got {}", selection_strength));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError(fmt::format("epsilon must be > 0, got {}", epsilon));
  }
}

PayoutScheme PayoutScheme::all_or_nothing(double selection_strength) {
  return {PayoutKind::AllOrNothing, selection_strength, 1e-9};
}

PayoutScheme PayoutScheme::inverse_distance(double selection_strength, const GameConfig& cfg) {
  return {PayoutKind::InverseDistance, selection_strength, 1e-9 * cfg.c()};
}

std::vector<double> payouts(const PopulationState& pop, const GameConfig& cfg, const PayoutScheme& scheme) {
  const auto types = pop.types();
  const auto weights = pop.weights();
  if (std::none_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; })) {
    throw DomainError("population has empty support");
  }
  const double tgt = target(pop, cfg);

  std::vector<double> dist(types.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (weights[i] > 0.0) dist[i] = std::abs(guess(types[i], cfg) - tgt);
  }

  std::vector<double> out(types.size(), 0.0);
  if (scheme.kind() == PayoutKind::InverseDistance) {
    for (std::size_t i = 0; i < types.size(); ++i) {
      if (weights[i] > 0.0) out[i] = 1.0 / (dist[i] + scheme.epsilon());
    }
    return out;
  }

  const double best = *std::min_element(dist.begin(), dist.end());
  std::size_t winners = 0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (weights[i] > 0.0 && dist[i] - best <= kPayoutTieTolerance) {
      out[i] = 1.0;
      ++winners;
    }
  }
  for (double& x : out) x /= static_cast<double>(winners);
  return out;
}

std::vector<double> fitness(const PopulationState& pop, const GameConfig& cfg, const PayoutScheme& scheme) {
  auto f = payouts(pop, cfg, scheme);
  const double top = *std::max_element(f.begin(), f.end());
  const double s = scheme.selection_strength();
  for (double& x : f) x = 1.0 - s + s * x / top;
  return f;
}

namespace {

void check_simplex(std::span<const double> x, const char* where) {
  double sum = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) throw DomainError(fmt::format("{}: negative frequency {}", where, v));
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError(fmt::format("{}: frequencies sum to {:.17g}", where, sum));
}

}  // namespace

PopulationState replicator_step(const PopulationState& pop, const GameConfig& cfg, const PayoutScheme& scheme) {
  const PopulationState freqs = pop.to_frequencies();
  const auto x = freqs.weights();
  check_simplex(x, "replicator input");

  const auto f = fitness(freqs, cfg, scheme);
  std::vector<double> next(x.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    next[i] = x[i] * f[i];
    mean += next[i];
  }
  if (!(mean > 0.0)) throw DomainError("mean fitness vanished");
  for (double& v : next) v /= mean;

  auto out = PopulationState::normalized({freqs.types().begin(), freqs.types().end()}, std::move(next));
  check_simplex(out.weights(), "replicator output");
  return out;
}

namespace {

std::optional<std::size_t> fixated_type(std::span<const double> x, double threshold) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= 1.0 - threshold) return i;
  }
  return std::nullopt;
}

}  // namespace

Trajectory simulate(const PopulationState& initial, const GameConfig& cfg, const PayoutScheme& scheme,
                    std::int64_t max_steps, double fixation_threshold) {
  if (max_steps < 1) throw DomainError(fmt::format("max_steps must be >= 1, got {}", max_steps));
  if (!(fixation_threshold > 0.0 && fixation_threshold < 0.5)) {
    throw DomainError(fmt::format("fixation threshold must lie in (0, 0.5), got {}", fixation_threshold));
  }

  PopulationState state = initial.to_frequencies();
  check_simplex(state.weights(), "initial population");

  Trajectory traj;
  traj.types.assign(state.types().begin(), state.types().end());

  auto record = [&](std::int64_t gen) {
    traj.steps.emplace_back(state.weights().begin(), state.weights().end());
    traj.target_series.push_back(target(state, cfg));
    if (auto i = fixated_type(state.weights(), fixation_threshold)) {
      traj.fixation = Fixation{traj.types[*i], gen};
      return true;
    }
    return false;
  };

  if (record(0)) return traj;
  for (std::int64_t gen = 1; gen <= max_steps; ++gen) {
    state = replicator_step(state, cfg, scheme);
    if (record(gen)) break;
  }
  return traj;
}

std::vector<double> invasion_series(double k, double m, std::int64_t n, const GameConfig& cfg) {
  if (n < 2) throw DomainError(fmt::format("N must be >= 2, got {}", n));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t invaders = 0; invaders <= n; ++invaders) out.push_back(mixed_target(k, m, n, invaders, cfg));
  return out;
}

}  // namespace pbeauty
