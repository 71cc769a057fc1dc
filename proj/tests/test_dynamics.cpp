#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "pbeauty/analysis.hpp"
#include "pbeauty/dynamics.hpp"
#include "pbeauty/errors.hpp"

using namespace pbeauty;

namespace {

using Freqs = std::vector<std::pair<PlayerType, double>>;

PopulationState freqs(std::initializer_list<std::pair<double, double>> entries) {
  Freqs f;
  for (auto [k, x] : entries) f.emplace_back(PlayerType(k), x);
  return PopulationState::from_frequencies(f);
}

bool on_simplex(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) {
    if (v < 0.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= 1e-9;
}

}  // namespace

TEST_CASE("PayoutScheme validation") {
  CHECK_THROWS_AS(PayoutScheme(PayoutKind::AllOrNothing, 0.0, 1e-9), DomainError);
  CHECK_THROWS_AS(PayoutScheme(PayoutKind::AllOrNothing, 1.5, 1e-9), DomainError);
  CHECK_THROWS_AS(PayoutScheme(PayoutKind::InverseDistance, 0.5, 0.0), DomainError);
  const GameConfig cfg(0.5, 50.0);
  CHECK(PayoutScheme::inverse_distance(0.3, cfg).epsilon() == doctest::Approx(5e-8));
}

TEST_CASE("payouts") {
  SUBCASE("equidistant types split the all-or-nothing prize") {
    // Guesses 1 and 1/2 with p = 0.9: the target is their midpoint 0.75
    // when the k = 0 share is 2/3.
    const GameConfig cfg(0.9, 1.0);
    const double k_half = std::log(0.5) / std::log(0.9);
    const auto pop = freqs({{0.0, 2.0 / 3.0}, {k_half, 1.0 / 3.0}});
    CHECK(target(pop, cfg) == doctest::Approx(0.75).epsilon(1e-15));
    const auto pay = payouts(pop, cfg, PayoutScheme::all_or_nothing(1.0));
    CHECK(pay[0] == 0.5);
    CHECK(pay[1] == 0.5);
  }
  SUBCASE("single type") {
    const GameConfig cfg(0.6, 10.0);
    const auto pop = freqs({{2.0, 1.0}});
    CHECK(payouts(pop, cfg, PayoutScheme::all_or_nothing(1.0))[0] == 1.0);
    const auto scheme = PayoutScheme::inverse_distance(1.0, cfg);
    const double d = std::abs(10.0 * std::pow(0.6, 2.0) - 10.0 * std::pow(0.6, 3.0));
    CHECK(payouts(pop, cfg, scheme)[0] == doctest::Approx(1.0 / (d + scheme.epsilon())).epsilon(1e-14));
  }
  SUBCASE("for p <= 1/2 the higher-step type takes the prize at 50/50") {
    auto g = oracle::rng(23);
    for (int i = 0; i < 500; ++i) {
      const GameConfig cfg(oracle::uniform(g, 0.05, 0.5), 1.0);
      const double k = oracle::uniform(g, 0.0, 5.0);
      const double m = oracle::uniform(g, 0.05, 10.0);
      const auto pay = payouts(freqs({{k, 0.5}, {k + m, 0.5}}), cfg, PayoutScheme::all_or_nothing(1.0));
      // Direct comparison of distances.
      const double t = 0.5 * cfg.p() * (std::pow(cfg.p(), k) + std::pow(cfg.p(), k + m));
      REQUIRE(std::abs(std::pow(cfg.p(), k + m) - t) < std::abs(std::pow(cfg.p(), k) - t));
      CHECK(pay[0] == 0.0);
      CHECK(pay[1] == 1.0);
    }
  }
  SUBCASE("extinct types are not in play") {
    const GameConfig cfg(0.4, 1.0);
    const auto pay = payouts(freqs({{1.0, 1.0}, {3.0, 0.0}}), cfg, PayoutScheme::all_or_nothing(1.0));
    CHECK(pay[0] == 1.0);
    CHECK(pay[1] == 0.0);
  }
}

TEST_CASE("replicator_step") {
  const GameConfig cfg(0.4, 1.0);

  SUBCASE("hand-evaluated two-type step") {
    // target = 0.4 (0.9 * 0.4 + 0.1 * 0.064) = 0.14656; distances 0.25344 and 0.08256.
    const auto pop = freqs({{1.0, 0.9}, {3.0, 0.1}});
    const auto hard = replicator_step(pop, cfg, PayoutScheme::all_or_nothing(1.0));
    CHECK(hard.weights()[1] == 1.0);
    const auto soft = replicator_step(pop, cfg, PayoutScheme::all_or_nothing(0.5));
    CHECK(soft.weights()[1] == doctest::Approx(0.1 / (0.1 + 0.9 * 0.5)).epsilon(1e-15));
    CHECK(soft.weights()[1] > 0.1);
  }
  SUBCASE("homogeneous population is a fixed point") {
    const auto pop = freqs({{2.0, 1.0}});
    CHECK(replicator_step(pop, cfg, PayoutScheme::inverse_distance(0.7, cfg)).weights()[0] == 1.0);
  }
  SUBCASE("uniform payouts leave frequencies unchanged") {
    const GameConfig g9(0.9, 1.0);
    const double k_half = std::log(0.5) / std::log(0.9);
    const auto pop = freqs({{0.0, 2.0 / 3.0}, {k_half, 1.0 / 3.0}});
    const auto next = replicator_step(pop, g9, PayoutScheme::all_or_nothing(1.0));
    CHECK(next.weights()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("extinct types stay extinct and the simplex is preserved") {
    auto g = oracle::rng(31);
    for (int i = 0; i < 300; ++i) {
      const GameConfig rc(oracle::uniform(g, 0.05, 0.95), oracle::uniform(g, 0.5, 50.0));
      const double a = oracle::uniform(g, 0.0, 1.0);
      const double b = oracle::uniform(g, 0.0, 1.0);
      const auto pop = PopulationState::normalized({PlayerType(0), PlayerType(1.5), PlayerType(4), PlayerType(9)},
                                                   {a, 0.0, b, 1.0 - std::min(a, b)});
      const auto scheme = i % 2 ? PayoutScheme::all_or_nothing(oracle::uniform(g, 0.1, 1.0))
                                : PayoutScheme::inverse_distance(oracle::uniform(g, 0.1, 1.0), rc);
      const auto next = replicator_step(pop, rc, scheme);
      CHECK(next.weights()[1] == 0.0);
      CHECK(on_simplex({next.weights().begin(), next.weights().end()}));
    }
  }
}

TEST_CASE("simulate") {
  SUBCASE("already fixated") {
    const GameConfig cfg(0.7, 1.0);
    const auto traj = simulate(freqs({{3.0, 1.0}}), cfg, PayoutScheme::inverse_distance(0.5, cfg));
    REQUIRE(traj.fixation.has_value());
    CHECK(traj.fixation->generation == 0);
    CHECK(traj.steps.size() == 1);
  }
  SUBCASE("a favoured invader fixates") {
    const GameConfig cfg(0.6, 1.0);
    REQUIRE(phi_infinite(0.6, 2.0) > 0.0);
    const auto traj = simulate(freqs({{1.0, 0.99}, {3.0, 0.01}}), cfg, PayoutScheme::inverse_distance(0.5, cfg));
    REQUIRE(traj.fixation.has_value());
    CHECK(traj.fixation->winner.k == 3.0);
    CHECK(traj.steps.size() == traj.target_series.size());
  }
  SUBCASE("a disfavoured invader dies out") {
    const GameConfig cfg(0.7, 1.0);
    REQUIRE(phi_infinite(0.7, 5.0) < 0.0);
    const auto traj = simulate(freqs({{1.0, 0.999}, {6.0, 0.001}}), cfg, PayoutScheme::inverse_distance(0.5, cfg));
    REQUIRE(traj.fixation.has_value());
    CHECK(traj.fixation->winner.k == 1.0);
  }
  SUBCASE("large gap at the top: the winner depends on initial conditions") {
    const GameConfig cfg(0.7, 1.0);
    const auto scheme = PayoutScheme::inverse_distance(0.5, cfg);
    const auto heavy_top = simulate(freqs({{0, 0.25}, {1, 0.15}, {2, 0.1}, {10, 0.5}}), cfg, scheme);
    const auto light_top = simulate(freqs({{0, 0.45}, {1, 0.27}, {2, 0.18}, {10, 0.1}}), cfg, scheme);
    REQUIRE(heavy_top.fixation.has_value());
    REQUIRE(light_top.fixation.has_value());
    CHECK(heavy_top.fixation->winner.k == 10.0);
    CHECK(light_top.fixation->winner.k == 2.0);
  }
  SUBCASE("stops at max_steps without fixation") {
    const GameConfig cfg(0.7, 1.0);
    const auto traj = simulate(freqs({{1.0, 0.5}, {3.0, 0.5}}), cfg, PayoutScheme::inverse_distance(0.01, cfg), 3);
    CHECK_FALSE(traj.fixation.has_value());
    CHECK(traj.generations() == 3);
  }
  SUBCASE("argument validation") {
    const GameConfig cfg(0.7, 1.0);
    const auto pop = freqs({{1.0, 0.5}, {3.0, 0.5}});
    CHECK_THROWS_AS(simulate(pop, cfg, PayoutScheme::all_or_nothing(0.5), 0), DomainError);
    CHECK_THROWS_AS(simulate(pop, cfg, PayoutScheme::all_or_nothing(0.5), 10, 0.5), DomainError);
  }
  SUBCASE("determinism") {
    const GameConfig cfg(0.65, 3.0);
    const auto pop = freqs({{0, 0.4}, {1.3, 0.3}, {2.2, 0.2}, {7, 0.1}});
    const auto a = simulate(pop, cfg, PayoutScheme::inverse_distance(0.4, cfg));
    const auto b = simulate(pop, cfg, PayoutScheme::inverse_distance(0.4, cfg));
    CHECK(a.steps == b.steps);
    CHECK(a.target_series == b.target_series);
  }
}

TEST_CASE("invasion_series") {
  const GameConfig cfg(0.7, 1.0);
  const auto s = invasion_series(1.0, 3.0, 10, cfg);
  REQUIRE(s.size() == 11);
  CHECK(s.front() == doctest::Approx(std::pow(0.7, 2.0)).epsilon(1e-15));
  CHECK(s.back() == doctest::Approx(std::pow(0.7, 5.0)).epsilon(1e-15));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);

  const auto small = invasion_series(0.0, 1.0, 2, cfg);
  REQUIRE(small.size() == 3);
  CHECK(small[0] > small[1]);
  CHECK(small[1] > small[2]);
  CHECK_THROWS_AS(invasion_series(0.0, 1.0, 1, cfg), DomainError);
}
