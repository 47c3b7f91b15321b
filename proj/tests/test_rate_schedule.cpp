#include <doctest.h>

#include <cmath>
#include <random>

#include "exgraph/errors.hpp"
#include "exgraph/rate_schedule.hpp"
#include "oracles.hpp"

using namespace exgraph;

TEST_CASE("lambda closed forms") {
  CHECK(RateSchedule::geometric(0.5, 1.0).lambda(3, 2) == 0.125);

  // ∫ x(1−x) dx over [0,1], by quadrature.
  const double moment = oracle::uniform_moment(2, 1);
  CHECK(moment == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(RateSchedule::beta_uniform(1.0).lambda(2, 1) == doctest::Approx(moment).epsilon(1e-12));

  const auto single = RateSchedule::moment_atoms({{0.5, 1.0}});
  const auto geo = RateSchedule::geometric(0.5, 1.0);
  for (int n = 0; n <= 8; ++n) {
    for (int r = 0; r <= n; ++r) {
      CHECK(single.lambda(n, r) == std::ldexp(1.0, -n));
      CHECK(single.lambda(n, r) == geo.lambda(n, r));
    }
  }
}

TEST_CASE("beta_uniform equals the uniform moments at every level") {
  const auto s = RateSchedule::beta_uniform(1.0);
  for (int n = 0; n <= 6; ++n) {
    for (int r = 0; r <= n; ++r) {
      CHECK(s.lambda(n, r) == doctest::Approx(oracle::uniform_moment(n, r)).epsilon(1e-10));
    }
  }
}

TEST_CASE("lambda rejects invalid indices") {
  const auto s = RateSchedule::geometric(0.3);
  CHECK_THROWS_AS(s.lambda(2, 3), ArgumentError);
  CHECK_THROWS_AS(s.lambda(2, -1), ArgumentError);
  const auto t = RateSchedule::table({{3, {0, 0, 1, 1}}});
  CHECK_THROWS_AS(t.lambda(2, 1), ArgumentError);
  CHECK(t.lambda(3, 2) == 1.0);
}

TEST_CASE("schedule construction validates parameters") {
  CHECK_THROWS_AS(RateSchedule::geometric(0.0), ArgumentError);
  CHECK_THROWS_AS(RateSchedule::geometric(1.0), ArgumentError);
  CHECK_THROWS_AS(RateSchedule::geometric(0.5, 0.0), ArgumentError);
  CHECK_THROWS_AS(RateSchedule::beta_uniform(-1.0), ArgumentError);
  CHECK_THROWS_AS(from_moment_measure({{1.5, 1.0}}), ArgumentError);
  CHECK_THROWS_AS(from_moment_measure({{0.5, 0.0}}), ArgumentError);
  CHECK_THROWS_AS(from_moment_measure({}), ArgumentError);
  CHECK_THROWS_AS(RateSchedule::table({{2, {1.0, -0.5, 1.0}}}), ArgumentError);
  CHECK_THROWS_AS(RateSchedule::table({{2, {1.0, 1.0}}}), ArgumentError);
}

TEST_CASE("check_consistency") {
  const auto geo = check_consistency(RateSchedule::geometric(0.5, 1.0), 6);
  CHECK(geo.max_violation == 0.0);
  CHECK(geo.consistent());

  const auto beta = check_consistency(RateSchedule::beta_uniform(1.0), 6);
  CHECK(beta.max_violation <= 1e-12);
  CHECK(beta.consistent());

  const auto ones = check_consistency(RateSchedule::constant_table(2, 1.0), 2);
  REQUIRE_FALSE(ones.witnesses.empty());
  const auto& w = ones.witnesses.front();
  CHECK(w.n == 1);
  CHECK(w.r == 0);
  CHECK(w.lower == 1.0);
  CHECK(w.upper_sum == 2.0);
  CHECK(ones.max_violation == 1.0);

  CHECK_THROWS_AS(check_consistency(RateSchedule::beta_uniform(), 0), ArgumentError);
}

TEST_CASE("derive_lower") {
  const auto geo = derive_lower({0.125, 0.125, 0.125, 0.125});
  CHECK(geo.row(2) == std::vector<double>{0.25, 0.25, 0.25});
  CHECK(geo.row(1) == std::vector<double>{0.5, 0.5});
  const auto closed = RateSchedule::geometric(0.5, 1.0);
  for (int n = 0; n <= 3; ++n) CHECK(geo.row(n) == closed.row(n));

  const auto pair = derive_lower({0.25, 0.5});
  CHECK(pair.row(0) == std::vector<double>{0.75});

  const auto beta = derive_lower({1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0});
  const auto beta_closed = RateSchedule::beta_uniform(1.0);
  CHECK(beta.lambda(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(beta.lambda(1, 1) == doctest::Approx(beta_closed.lambda(1, 1)).epsilon(1e-15));

  CHECK_THROWS_AS(derive_lower({0.1, -0.1}), ArgumentError);
}

TEST_CASE("from_moment_measure") {
  const auto half = from_moment_measure({{0.5, 1.0}});
  CHECK(half.lambda(4, 1) == 0.0625);

  const auto corner = from_moment_measure({{1.0, 1.0}});
  for (int n = 1; n <= 5; ++n) {
    for (int r = 0; r <= n; ++r) CHECK(corner.lambda(n, r) == (r == n ? 1.0 : 0.0));
  }

  const auto two = from_moment_measure({{0.3, 2.0}, {0.8, 1.0}});
  CHECK(two.lambda(2, 1) == doctest::Approx(2 * 0.3 * 0.7 + 0.8 * 0.2).epsilon(1e-15));
  CHECK(two.lambda(2, 1) == doctest::Approx(0.58).epsilon(1e-15));
  CHECK(check_consistency(two, 8).consistent());
}

TEST_CASE("consistency holds for parametric kinds up to n_max = 12 (random parameters)") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  std::uniform_real_distribution<double> scale(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(check_consistency(RateSchedule::geometric(unit(rng), scale(rng)), 12).max_violation < 1e-12);
    CHECK(check_consistency(RateSchedule::beta_uniform(scale(rng)), 12).max_violation < 1e-12);
    std::vector<MomentAtom> atoms;
    const int k = 1 + trial % 4;
    for (int i = 0; i < k; ++i) atoms.push_back({unit(rng), scale(rng)});
    const auto s = from_moment_measure(atoms);
    CHECK(check_consistency(s, 12).max_violation < 1e-12);

    // Non-negativity and the single-atom reduction.
    const double a = unit(rng), c = scale(rng);
    const auto one = from_moment_measure({{a, c}});
    const auto geo = RateSchedule::geometric(a, c);
    for (int n = 0; n <= 12; ++n) {
      for (int r = 0; r <= n; ++r) {
        CHECK(s.lambda(n, r) >= 0.0);
        CHECK(one.lambda(n, r) == doctest::Approx(geo.lambda(n, r)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("derive_lower always has zero violation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int top = 1 + trial % 10;
    std::vector<double> row(static_cast<std::size_t>(top) + 1);
    for (auto& v : row) v = u(rng);
    CHECK(check_consistency(derive_lower(row), top, 0.0).max_violation == 0.0);
  }
}
