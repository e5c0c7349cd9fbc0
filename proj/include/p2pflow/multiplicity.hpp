#pragma once

#include <optional>

#include "p2pflow/core.hpp"

namespace p2pflow {

enum class MultiplicityRule {
  PhiAbovePhi0,        // phi > phi0: nobody meets the bottleneck time
  PhiEqualPhi0,        // phi == phi0: exactly one peer can
  Ineq32AtLPrimePlus1, // residual-rate test passed at L' + 1
  Ineq34Search,        // largest L <= L' passing the scaled capacity test
  ClassicFallback,     // no-initial-data rule
};

const char* to_string(MultiplicityRule rule);

struct MultiplicityResult {
  int m = 0;                       // peers that can finish in the bottleneck time
  MultiplicityRule rule_used = MultiplicityRule::ClassicFallback;
  std::optional<int> l_prime;      // L', when the phi-based rules apply
};

/// F(M): the capacity threshold below which the first M peers can all finish
/// in the bottleneck time. Infinite for m == 1; C_M/(M-1) for m == N.
double multiplicity_function(const PeerSwarm& swarm, int m);

/// Largest M with C0 <= F(M), evaluated in the given peer order. With
/// sort_descending the peers are pre-sorted by capacity, which maximizes M.
MultiplicityResult classic_multiplicity(const PeerSwarm& swarm,
                                        bool sort_descending = false);

/// ur(l) = U/(l-1) - F_a/t0 - C_{N-l}/(l(l-1)). Strictly decreasing in l.
/// Requires 2 <= l <= N-1 and phi < phi0.
double residual_rate_ur(const PeerSwarm& swarm, const InitialDistribution& dist,
                        int l);

/// True iff C0 <= (1 - phi) * F(L). Requires phi < phi0; L == 1 is always
/// true since F(1) is infinite.
bool check_ineq_34(const PeerSwarm& swarm, const InitialDistribution& dist,
                   int L);

/// Residual-rate feasibility at the bottleneck time for L = L' + 1:
/// U - ((L-1) F_a + F_{N-L}) / t0 >= (L-1) C0. Requires phi < phi0 and
/// L == l_prime_index(...) + 1.
bool check_ineq_32(const PeerSwarm& swarm, const InitialDistribution& dist,
                   int L);

/// L' with L' ta < t0 <= (L'+1) ta, clamped to [1, N-1]; phi == 0 maps to
/// N-1 (ta is zero there and every multiple of it is below t0).
int l_prime_index(const PeerSwarm& swarm, const InitialDistribution& dist);

/// The generalized multiplicity for a pure unique-proportional distribution.
/// Reduce common data away first.
MultiplicityResult phi_multiplicity(const PeerSwarm& swarm,
                                    const InitialDistribution& dist);

}  // namespace p2pflow
