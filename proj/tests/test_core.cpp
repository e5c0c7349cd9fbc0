#include "p2pflow/core.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace p2pflow;
using p2pflow::testing::canonical_swarm;
using p2pflow::testing::random_swarm;

TEST_CASE("derived quantities on the canonical instance") {
  const PeerSwarm swarm = canonical_swarm();
  const InitialDistribution dist = make_up_distribution(swarm, 0.5);
  const DerivedQuantities d = derive_quantities(swarm, dist);
  CHECK(d.total_peer_upload == doctest::Approx(108.0));
  CHECK(d.peer_data == doctest::Approx(500.0));
  CHECK(d.source_only_data == doctest::Approx(500.0));
  CHECK(d.exchange_time == doctest::Approx(500.0 / 108.0));
  CHECK(d.bottleneck_time == doctest::Approx(500.0 / 12.0));
  CHECK(d.phi_zero == doctest::Approx(0.9));
  CHECK(d.no_data_bottleneck == doctest::Approx(1000.0 / 12.0));
}

TEST_CASE("derived quantities at the phi extremes") {
  const PeerSwarm swarm = canonical_swarm();
  SUBCASE("no initial data") {
    const DerivedQuantities d =
        derive_quantities(swarm, make_up_distribution(swarm, 0.0));
    CHECK(d.peer_data == 0.0);
    CHECK(d.exchange_time == 0.0);
    CHECK(d.bottleneck_time == doctest::Approx(d.no_data_bottleneck));
  }
  SUBCASE("peers hold everything") {
    const DerivedQuantities d =
        derive_quantities(swarm, make_up_distribution(swarm, 1.0));
    CHECK(d.source_only_data == doctest::Approx(0.0));
    CHECK(d.bottleneck_time == doctest::Approx(0.0));
    CHECK(d.exchange_time == doctest::Approx(1000.0 / 108.0));
  }
}

TEST_CASE("derive rejects a length mismatch") {
  const PeerSwarm swarm = canonical_swarm();
  InitialDistribution dist;
  dist.phi = 0.1;
  dist.unique_amounts = {1.0, 2.0};
  CHECK_THROWS_AS(derive_quantities(swarm, dist), std::invalid_argument);
}

TEST_CASE("unique-proportional construction") {
  const PeerSwarm swarm = canonical_swarm();
  SUBCASE("phi 0.54 scales each block by 5") {
    const InitialDistribution dist = make_up_distribution(swarm, 0.54);
    CHECK(dist.unique_amounts.front() == doctest::Approx(50.0));
    CHECK(dist.unique_amounts.back() == doctest::Approx(10.0));
    double sum = 0.0;
    for (double a : dist.unique_amounts) sum += a;
    CHECK(sum == doctest::Approx(540.0));
    CHECK(validate_distribution(swarm, dist).all_pass());
  }
  SUBCASE("phi 0 gives empty blocks") {
    const InitialDistribution dist = make_up_distribution(swarm, 0.0);
    for (double a : dist.unique_amounts) CHECK(a == 0.0);
  }
  SUBCASE("phi 1 covers the file") {
    const InitialDistribution dist = make_up_distribution(swarm, 1.0);
    double sum = 0.0;
    for (double a : dist.unique_amounts) sum += a;
    CHECK(sum == doctest::Approx(1000.0));
  }
  SUBCASE("phi outside the unit interval is rejected") {
    CHECK_THROWS_AS(make_up_distribution(swarm, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(make_up_distribution(swarm, -0.1), std::invalid_argument);
  }
}

TEST_CASE("common-block reduction") {
  const PeerSwarm swarm = canonical_swarm();
  InitialDistribution dist = make_up_distribution(swarm, 0.3);
  SUBCASE("common block shrinks the file") {
    const double scale = 200.0 / 300.0;  // unique share after the common block
    for (double& a : dist.unique_amounts) a *= scale;
    dist.common_data = 100.0;
    const auto [reduced, up] = reduce_ucp_to_up(swarm, dist);
    CHECK(reduced.file_size() == doctest::Approx(900.0));
    CHECK(up.phi == doctest::Approx(200.0 / 900.0));
    CHECK(up.common_data == 0.0);
    CHECK(reduced.peer_uploads() == swarm.peer_uploads());
  }
  SUBCASE("identity when no common block") {
    const auto [reduced, up] = reduce_ucp_to_up(swarm, dist);
    CHECK(reduced.file_size() == doctest::Approx(1000.0));
    CHECK(up.phi == doctest::Approx(0.3));
  }
  SUBCASE("all peer data common gives a pure no-data instance") {
    InitialDistribution all_common;
    all_common.phi = 0.3;
    all_common.common_data = 300.0;
    all_common.unique_amounts.assign(swarm.size(), 0.0);
    const auto [reduced, up] = reduce_ucp_to_up(swarm, all_common);
    CHECK(reduced.file_size() == doctest::Approx(700.0));
    CHECK(up.phi == doctest::Approx(0.0));
  }
  SUBCASE("degenerate and inconsistent blocks are rejected") {
    InitialDistribution bad = make_up_distribution(swarm, 0.3);
    bad.common_data = 1000.0;
    CHECK_THROWS_AS(reduce_ucp_to_up(swarm, bad), std::invalid_argument);
    bad.common_data = 301.0;  // larger than the declared peer share
    CHECK_THROWS_AS(reduce_ucp_to_up(swarm, bad), std::invalid_argument);
  }
}

TEST_CASE("distribution validation") {
  const PeerSwarm swarm = canonical_swarm();
  SUBCASE("constructed distributions pass") {
    CHECK(validate_distribution(swarm, make_up_distribution(swarm, 0.37))
              .all_pass());
  }
  SUBCASE("non-proportional blocks are reported") {
    InitialDistribution dist = make_up_distribution(swarm, 0.54);
    dist.unique_amounts[1] = 10.0;
    dist.phi = (540.0 - 40.0) / 1000.0;
    const ValidationReport report = validate_distribution(swarm, dist);
    CHECK_FALSE(report.all_pass());
    bool prop_failed = false;
    for (const auto& c : report.checks) {
      if (c.name == "proportionality") prop_failed = !c.pass;
    }
    CHECK(prop_failed);
  }
  SUBCASE("amounts above the file size break the phi bound") {
    InitialDistribution dist = make_up_distribution(swarm, 1.0);
    for (double& a : dist.unique_amounts) a *= 1.5;
    dist.phi = 1.5;
    const ValidationReport report = validate_distribution(swarm, dist);
    CHECK_FALSE(report.all_pass());
    bool bound_failed = false;
    for (const auto& c : report.checks) {
      if (c.name == "phi_bound") bound_failed = !c.pass;
    }
    CHECK(bound_failed);
  }
}

TEST_CASE("threshold equivalence over random instances") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> phis(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    const double phi = phis(rng);
    const DerivedQuantities d =
        derive_quantities(swarm, make_up_distribution(swarm, phi));
    // phi above the threshold exactly when the bottleneck ends first.
    if (!nearly_equal(phi, d.phi_zero, 1e-7)) {
      CHECK((phi >= d.phi_zero) == (d.bottleneck_time <= d.exchange_time));
    }
  }
}

TEST_CASE("reduction is idempotent on pure inputs") {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    const InitialDistribution dist = make_up_distribution(swarm, 0.4);
    const auto [s1, d1] = reduce_ucp_to_up(swarm, dist);
    const auto [s2, d2] = reduce_ucp_to_up(s1, d1);
    CHECK(s2.file_size() == s1.file_size());
    CHECK(d2.phi == d1.phi);
    CHECK(d2.unique_amounts == d1.unique_amounts);
  }
}

TEST_CASE("exchange time times capacity recovers the peer data") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> phis(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PeerSwarm swarm = random_swarm(rng);
    const double phi = phis(rng);
    const DerivedQuantities d =
        derive_quantities(swarm, make_up_distribution(swarm, phi));
    const double lhs = d.exchange_time * d.total_peer_upload;
    CHECK(std::fabs(lhs - phi * swarm.file_size()) <=
          1e-12 * std::max(1.0, phi * swarm.file_size()));
  }
}
