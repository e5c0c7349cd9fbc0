#include "p2pflow/nested.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace p2pflow;
using p2pflow::testing::canonical_swarm;

TEST_CASE("post-download state after a forwarding stage") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  const FlowPlan plan = plan_differentiated(swarm, dist, 12);
  const SimResult sim = simulate(swarm, dist, plan, plan.horizon / 1e4);
  const NextStage next = post_download_distribution(swarm, dist, 12, plan, sim);

  CHECK(next.swarm.source_upload() == doctest::Approx(102.0));
  CHECK(next.swarm.size() == 6);
  CHECK(next.swarm.peer_uploads() ==
        std::vector<double>{4, 4, 3, 3, 2, 2});
  // retained data stays proportional to capacity
  CHECK(next.max_proportionality_dev < 1e-6);
  CHECK(next.ucp_report.all_pass());
  // each leftover peer holds its block plus its private forwarded stream
  const double per_cap = plan.horizon / 12.0;
  for (int m = 0; m < 6; ++m) {
    CHECK(next.dist.unique_amounts[m] ==
          doctest::Approx(next.swarm.peer_upload(m) * per_cap).epsilon(1e-4));
  }
}

TEST_CASE("assisted stages leave the last set untouched") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.95);
  const FlowPlan plan = plan_differentiated(swarm, dist, 12);
  REQUIRE(plan.strategy == Strategy::Fig5a);
  const SimResult sim = simulate(swarm, dist, plan, plan.horizon / 1e4);
  const NextStage next = post_download_distribution(swarm, dist, 12, plan, sim);
  for (int m = 0; m < 6; ++m) {
    CHECK(next.dist.unique_amounts[m] ==
          doctest::Approx(dist.unique_amounts[12 + m]).epsilon(1e-9));
  }
}

TEST_CASE("full-width stage leaves an empty instance") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  const FlowPlan plan = plan_differentiated(swarm, dist, 18);
  const SimResult sim = simulate(swarm, dist, plan, plan.horizon / 1e4);
  const NextStage next = post_download_distribution(swarm, dist, 18, plan, sim);
  CHECK(next.swarm.size() == 0);
  CHECK(next.dist.unique_amounts.empty());
}

TEST_CASE("incomplete stages are refused") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  const FlowPlan plan = plan_differentiated(swarm, dist, 12);
  SimResult sim;
  sim.finish_times.assign(18, std::numeric_limits<double>::infinity());
  sim.category_state.assign(18, std::vector<double>(19, 0.0));
  CHECK_THROWS_AS(post_download_distribution(swarm, dist, 12, plan, sim),
                  std::runtime_error);
}

TEST_CASE("single tier equals equal service") {
  const PeerSwarm swarm = canonical_swarm();
  SUBCASE("no data") {
    const TierSchedule s =
        schedule_nested(swarm, make_up_distribution(swarm, 0.0), {18});
    REQUIRE(s.stages.size() == 1);
    CHECK(s.total_time() == doctest::Approx(150.0));
  }
  SUBCASE("with data, exact match") {
    const InitialDistribution dist = make_up_distribution(swarm, 0.1);
    const TierSchedule s = schedule_nested(swarm, dist, {18});
    CHECK(s.total_time() == equal_service_time(swarm, dist).t_last);
  }
}

TEST_CASE("two tiers chain through the extracted state") {
  const PeerSwarm swarm = canonical_swarm();
  SUBCASE("no data") {
    const TierSchedule s =
        schedule_nested(swarm, make_up_distribution(swarm, 0.0), {12, 6});
    REQUIRE(s.stages.size() == 2);
    CHECK(s.stages[0].stage_time == doctest::Approx(12000.0 / 118.5));
    CHECK(s.stages[0].regime == Regime::Eq7);
    CHECK(s.stages[1].stage_time > 0.0);
    CHECK(s.stages[1].cumulative_time ==
          doctest::Approx(s.stages[0].stage_time + s.stages[1].stage_time));
  }
  SUBCASE("light data keeps the leftover set proportional") {
    const TierSchedule s =
        schedule_nested(swarm, make_up_distribution(swarm, 0.1), {12, 6});
    CHECK(s.stages[0].stage_time == doctest::Approx(100.4219409).epsilon(1e-6));
    CHECK(s.stages[0].ucp_max_dev < 0.01);
  }
}

TEST_CASE("degenerate one-peer tiers") {
  const PeerSwarm swarm(4.0, {3.0, 2.0, 1.0}, 100.0);
  const InitialDistribution dist = make_up_distribution(swarm, 0.95);
  const TierSchedule s = schedule_nested(swarm, dist, {1, 1, 1});
  REQUIRE(s.stages.size() == 3);
  CHECK(s.stages[0].regime == Regime::Eq18Single);
  for (size_t i = 1; i < s.stages.size(); ++i) {
    CHECK(s.stages[i].cumulative_time >= s.stages[i - 1].cumulative_time);
  }
}

TEST_CASE("bad tier vectors are rejected") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  CHECK_THROWS_AS(schedule_nested(swarm, dist, {12, 5}), std::invalid_argument);
  CHECK_THROWS_AS(schedule_nested(swarm, dist, {}), std::invalid_argument);
  CHECK_THROWS_AS(schedule_nested(swarm, dist, {18, -0}), std::invalid_argument);
}

TEST_CASE("merging tiers never speeds up the tail") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  const double merged = schedule_nested(swarm, dist, {18}).total_time();
  const double split = schedule_nested(swarm, dist, {12, 6}).total_time();
  CHECK(leq_tol(split, merged * (1.0 + 1e-3)));
  CHECK(geq_tol(merged, split * (1.0 - 1e-3)));
}

TEST_CASE("tier csv shape") {
  const PeerSwarm swarm = canonical_swarm();
  const TierSchedule s =
      schedule_nested(swarm, make_up_distribution(swarm, 0.0), {18});
  CHECK(tier_csv(s) ==
        "tier,size,stage_time,cumulative_time,regime\n"
        "1,18,150,150,eq1_peer_bound\n");
}
