#include "p2pflow/multiplicity.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace p2pflow;
using p2pflow::testing::canonical_swarm;
using p2pflow::testing::random_phi_below_phi0;
using p2pflow::testing::random_swarm;

namespace {

// Independent of the library: the capacity threshold evaluated from raw sums.
double threshold_by_hand(const PeerSwarm& swarm, int m) {
  if (m == 1) return std::numeric_limits<double>::infinity();
  double head = 0.0;
  for (int i = 0; i < m; ++i) head += swarm.peer_upload(i);
  double tail = 0.0;
  for (int i = m; i < swarm.size(); ++i) tail += swarm.peer_upload(i);
  return head / (m - 1) + (m == swarm.size() ? 0.0 : tail / m);
}

int classic_by_scan(const PeerSwarm& swarm) {
  int best = 1;
  for (int m = 1; m <= swarm.size(); ++m) {
    if (swarm.source_upload() <= threshold_by_hand(swarm, m) * (1 + 1e-9)) {
      best = std::max(best, m);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("multiplicity function values") {
  const PeerSwarm swarm = canonical_swarm();
  CHECK(multiplicity_function(swarm, 9) ==
        doctest::Approx(74.0 / 8.0 + 34.0 / 9.0));
  CHECK(std::isinf(multiplicity_function(swarm, 1)));
  CHECK(multiplicity_function(swarm, 18) == doctest::Approx(108.0 / 17.0));
  CHECK_THROWS_AS(multiplicity_function(swarm, 0), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity_function(swarm, 19), std::invalid_argument);
}

TEST_CASE("classic multiplicity against a full scan") {
  CHECK(classic_multiplicity(canonical_swarm(12.0)).m == 9);
  CHECK(classic_multiplicity(canonical_swarm(5.0)).m == 18);
  CHECK(classic_multiplicity(canonical_swarm(14.0)).m == 8);
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    CHECK(classic_multiplicity(swarm).m == classic_by_scan(swarm));
  }
}

TEST_CASE("descending pre-sort never lowers the classic multiplicity") {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    CHECK(classic_multiplicity(swarm, true).m >=
          classic_multiplicity(swarm, false).m);
  }
}

TEST_CASE("residual rate closed form") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  CHECK(residual_rate_ur(swarm, dist, 9) ==
        doctest::Approx(108.0 / 8.0 - 100.0 / 75.0 - 34.0 / 72.0));
  CHECK(residual_rate_ur(swarm, dist, 2) ==
        doctest::Approx(108.0 - 100.0 / 75.0 - 88.0 / 2.0));
  CHECK_THROWS_AS(residual_rate_ur(swarm, dist, 1), std::invalid_argument);
  CHECK_THROWS_AS(residual_rate_ur(swarm, dist, 18), std::invalid_argument);
}

TEST_CASE("residual rate strictly decreases") {
  std::mt19937 rng(17);
  for (int i = 0; i < 300; ++i) {
    const PeerSwarm swarm = random_swarm(rng, 4, 12);
    const InitialDistribution dist =
        make_up_distribution(swarm, random_phi_below_phi0(rng, swarm));
    for (int l = 2; l + 1 <= swarm.size() - 1; ++l) {
      CHECK(residual_rate_ur(swarm, dist, l + 1) <
            residual_rate_ur(swarm, dist, l));
    }
  }
}

TEST_CASE("scaled capacity test examples") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.1);
  CHECK(check_ineq_34(swarm, dist, 8));
  CHECK_FALSE(check_ineq_34(swarm, dist, 9));
  CHECK(check_ineq_34(swarm, dist, 1));
}

TEST_CASE("residual feasibility test examples") {
  SUBCASE("heavy initial data, small window") {
    const PeerSwarm swarm = canonical_swarm();
    const InitialDistribution dist = make_up_distribution(swarm, 0.8);
    CHECK(l_prime_index(swarm, dist) == 2);
    CHECK_FALSE(check_ineq_32(swarm, dist, 3));
  }
  SUBCASE("light initial data clamps the window") {
    const PeerSwarm swarm = canonical_swarm();
    const InitialDistribution dist = make_up_distribution(swarm, 0.1);
    CHECK(l_prime_index(swarm, dist) == 17);
    CHECK_FALSE(check_ineq_32(swarm, dist, 18));
  }
  SUBCASE("two peers with a weak source") {
    const PeerSwarm swarm(2.0, {10.0, 10.0}, 1000.0);
    const InitialDistribution dist = make_up_distribution(swarm, 0.05);
    CHECK(l_prime_index(swarm, dist) == 1);
    CHECK(check_ineq_32(swarm, dist, 2));
  }
  SUBCASE("wrong set size is rejected") {
    const PeerSwarm swarm = canonical_swarm();
    const InitialDistribution dist = make_up_distribution(swarm, 0.8);
    CHECK_THROWS_AS(check_ineq_32(swarm, dist, 5), std::invalid_argument);
  }
}

TEST_CASE("phi multiplicity on the canonical instance") {
  const PeerSwarm swarm = canonical_swarm();
  SUBCASE("phi 0.1") {
    const MultiplicityResult r =
        phi_multiplicity(swarm, make_up_distribution(swarm, 0.1));
    CHECK(r.m == 8);
    CHECK(r.rule_used == MultiplicityRule::Ineq34Search);
    CHECK(r.l_prime == 17);
  }
  SUBCASE("phi at the threshold") {
    const MultiplicityResult r =
        phi_multiplicity(swarm, make_up_distribution(swarm, 0.9));
    CHECK(r.m == 1);
    CHECK(r.rule_used == MultiplicityRule::PhiEqualPhi0);
  }
  SUBCASE("phi 0.8") {
    const MultiplicityResult r =
        phi_multiplicity(swarm, make_up_distribution(swarm, 0.8));
    CHECK(r.m == 2);
    CHECK(r.rule_used == MultiplicityRule::Ineq34Search);
    CHECK(r.l_prime == 2);
  }
  SUBCASE("phi above the threshold") {
    const MultiplicityResult r =
        phi_multiplicity(swarm, make_up_distribution(swarm, 0.91));
    CHECK(r.m == 0);
    CHECK(r.rule_used == MultiplicityRule::PhiAbovePhi0);
  }
}

TEST_CASE("downward closure of the scaled capacity test") {
  std::mt19937 rng(23);
  for (int i = 0; i < 400; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    const InitialDistribution dist =
        make_up_distribution(swarm, random_phi_below_phi0(rng, swarm));
    const int lp = l_prime_index(swarm, dist);
    bool seen_false = false;
    for (int l = 1; l <= lp; ++l) {
      const bool ok = check_ineq_34(swarm, dist, l);
      if (seen_false) CHECK_FALSE(ok);
      if (!ok) seen_false = true;
    }
  }
}

TEST_CASE("residual feasibility implies the scaled test below") {
  std::mt19937 rng(29);
  int hits = 0;
  for (int i = 0; i < 600; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    const InitialDistribution dist =
        make_up_distribution(swarm, random_phi_below_phi0(rng, swarm));
    const int lp = l_prime_index(swarm, dist);
    if (!check_ineq_32(swarm, dist, lp + 1)) continue;
    ++hits;
    for (int l = 1; l <= lp; ++l) {
      CHECK(check_ineq_34(swarm, dist, l));
    }
  }
  CHECK(hits > 0);  // the property must actually fire
}

TEST_CASE("phi multiplicity never increases with phi") {
  std::mt19937 rng(31);
  for (int i = 0; i < 200; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    double p1 = random_phi_below_phi0(rng, swarm);
    double p2 = random_phi_below_phi0(rng, swarm);
    if (p1 > p2) std::swap(p1, p2);
    const int m1 = phi_multiplicity(swarm, make_up_distribution(swarm, p1)).m;
    const int m2 = phi_multiplicity(swarm, make_up_distribution(swarm, p2)).m;
    CHECK(m2 <= m1);
  }
}

TEST_CASE("no initial data collapses to the classic rule") {
  CHECK(phi_multiplicity(canonical_swarm(),
                         make_up_distribution(canonical_swarm(), 0.0))
            .m == 9);
  std::mt19937 rng(37);
  for (int i = 0; i < 200; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    const InitialDistribution dist = make_up_distribution(swarm, 0.0);
    CHECK(phi_multiplicity(swarm, dist).m == classic_multiplicity(swarm).m);
  }
}
