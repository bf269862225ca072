#include "zsl/theory.hpp"

#include <doctest.h>

#include <cmath>

using zsl::ball_experiment;
using zsl::BallExperimentParams;
using zsl::delta_closed_form;
using zsl::delta_monte_carlo;
using zsl::DeltaParams;
using zsl::squared_norm_variance_mc;
using zsl::two_config_experiment;
using zsl::TwoConfigParams;

TEST_SUITE_BEGIN("theory");

TEST_CASE("delta_closed_form substitutions") {
  CHECK(delta_closed_form(0.0, 5, 1.0) == 0.0);
  CHECK(delta_closed_form(1.0, 2, 1.0) == doctest::Approx(2.0));
  CHECK(delta_closed_form(2.0, 100, 0.5) ==
        doctest::Approx(10.0 * std::sqrt(2.0)));
}

TEST_CASE("delta_monte_carlo") {
  SUBCASE("zero gap makes both targets identical") {
    DeltaParams p;
    p.gamma = 0.0;
    p.dim = 20;
    p.num_samples = 500;
    p.seed = 1;
    const auto [estimate, std_error] = delta_monte_carlo(p);
    CHECK(estimate == 0.0);
    CHECK(std_error == 0.0);
  }
  SUBCASE("estimate agrees with the closed form within three errors") {
    DeltaParams p;
    p.gamma = 1.0;
    p.dim = 100;
    p.s2 = 1.0;
    p.query_s2 = 1.0;
    p.num_samples = 100000;
    p.seed = 2;
    const auto [estimate, std_error] = delta_monte_carlo(p);
    const double expected = delta_closed_form(1.0, 100, 1.0);
    CHECK(expected == doctest::Approx(std::sqrt(200.0)));
    CHECK(std::abs(estimate - expected) <= 3.0 * std_error);
  }
  SUBCASE("estimates scale linearly with the component variance") {
    // the closed form is the oracle: doubling s2 doubles the gap
    DeltaParams p;
    p.gamma = 1.0;
    p.dim = 100;
    p.num_samples = 100000;
    p.seed = 3;
    p.s2 = 1.0;
    const auto narrow = delta_monte_carlo(p);
    p.s2 = 2.0;
    p.seed = 4;
    const auto wide = delta_monte_carlo(p);
    CHECK(std::abs(narrow.estimate - delta_closed_form(1.0, 100, 1.0)) <=
          3.0 * narrow.std_error);
    CHECK(std::abs(wide.estimate - delta_closed_form(1.0, 100, 2.0)) <=
          3.0 * wide.std_error);
    const double expected_ratio =
        delta_closed_form(1.0, 100, 2.0) / delta_closed_form(1.0, 100, 1.0);
    CHECK(expected_ratio == doctest::Approx(2.0));
    CHECK(wide.estimate / narrow.estimate ==
          doctest::Approx(expected_ratio).epsilon(0.01));
  }
  SUBCASE("deterministic per seed") {
    DeltaParams p;
    p.gamma = 0.5;
    p.dim = 10;
    p.num_samples = 2000;
    p.seed = 99;
    const auto a = delta_monte_carlo(p);
    const auto b = delta_monte_carlo(p);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
  }
}

TEST_CASE("squared norm variance identity") {
  CHECK(squared_norm_variance_mc(1, 1.0, 100000, 5) ==
        doctest::Approx(2.0).epsilon(0.05));
  CHECK(squared_norm_variance_mc(50, 1.0, 100000, 6) ==
        doctest::Approx(100.0).epsilon(0.05));
  CHECK(squared_norm_variance_mc(10, 2.0, 100000, 7) ==
        doctest::Approx(80.0).epsilon(0.05));
}

TEST_CASE("ball_experiment") {
  SUBCASE("a singleton dataset is always nearest") {
    BallExperimentParams p;
    p.dim = 3;
    p.num_dataset = 1;
    p.radius = 0.7;
    p.norm1 = 0.5;
    p.norm2 = 1.1;
    p.num_trials = 200;
    p.seed = 11;
    const auto r = ball_experiment(p);
    CHECK(r.p1 == 1.0);
    CHECK(r.p2 == 1.0);
  }
  SUBCASE("a vanishing radius keeps the anchor nearest") {
    // radius small enough that the ball mass is negligible, yet large
    // enough that anchors with a compatible norm still occur
    BallExperimentParams p;
    p.dim = 2;
    p.num_dataset = 100;
    p.radius = 0.003;
    p.norm1 = 0.8;
    p.norm2 = 1.2;
    p.num_trials = 300;
    p.seed = 12;
    const auto r = ball_experiment(p);
    CHECK(r.p1 >= 0.999);
    CHECK(r.p2 >= 0.999);
  }
  SUBCASE("the outer probe keeps its anchor more often") {
    BallExperimentParams p;
    p.num_trials = 2000;
    p.seed = 13;
    const auto r = ball_experiment(p);
    CHECK(r.p2 > r.p1);
  }
  SUBCASE("parameter validation") {
    BallExperimentParams p;
    p.norm1 = 2.0;
    p.norm2 = 1.0;
    CHECK_THROWS_AS(ball_experiment(p), std::invalid_argument);
  }
}

TEST_CASE("two_config_experiment") {
  SUBCASE("saturated k flattens both configurations") {
    TwoConfigParams p;
    p.dim = 10;
    p.num_queries = 50;
    p.num_targets = 30;
    p.k = 30;
    p.seed = 21;
    const auto r = two_config_experiment(p);
    CHECK(r.skew_narrow_queries == 0.0);
    CHECK(r.skew_wide_queries == 0.0);
  }
  SUBCASE("wide queries against narrow targets suppress hubs on average") {
    double mean_narrow = 0.0;
    double mean_wide = 0.0;
    const int num_seeds = 6;
    for (int s = 0; s < num_seeds; ++s) {
      TwoConfigParams p;
      p.dim = 100;
      p.num_queries = 300;
      p.num_targets = 300;
      p.k = 10;
      p.seed = 31 + static_cast<std::uint64_t>(s);
      const auto r = two_config_experiment(p);
      mean_narrow += r.skew_narrow_queries;
      mean_wide += r.skew_wide_queries;
    }
    CHECK(mean_wide / num_seeds < mean_narrow / num_seeds);
  }
  SUBCASE("equal spreads are statistically indistinguishable (sign test)") {
    int wide_wins = 0;
    const int num_seeds = 12;
    for (int s = 0; s < num_seeds; ++s) {
      TwoConfigParams p;
      p.dim = 50;
      p.s1 = 1.0;
      p.s2 = 1.0;
      p.num_queries = 200;
      p.num_targets = 200;
      p.k = 5;
      p.seed = 101 + static_cast<std::uint64_t>(s);
      const auto r = two_config_experiment(p);
      if (r.skew_wide_queries < r.skew_narrow_queries) ++wide_wins;
    }
    // two-sided sign test at 5%: reject only outside [3, 9] for n = 12
    CHECK(wide_wins >= 3);
    CHECK(wide_wins <= 9);
  }
}

TEST_SUITE_END();
