#pragma once

#include "p2pflow/core.hpp"

namespace p2pflow {

enum class Regime {
  BottleneckBound,  // finish time pinned at the bottleneck time
  Eq16,             // equal service, shared-capacity form
  Eq1SourceBound,   // no-data equal service, source is the bottleneck
  Eq1PeerBound,     // no-data equal service, aggregate capacity binds
  Eq18Single,       // single superior peer, everyone uploads to it
  Eq24,             // differentiated, exchange dominates
  Eq31,             // differentiated, fresh-data forwarding dominates
  Eq6Bottleneck,    // no-data differentiated, within multiplicity
  Eq7,              // no-data differentiated, beyond multiplicity
};

const char* to_string(Regime regime);

/// Minimum last finish time for a target set, with the closed form that
/// produced it and the set size (N for equal service).
struct ServiceOutcome {
  double t_last = 0.0;
  Regime regime = Regime::Eq16;
  int first_set_size = 0;
};

/// Intermediate quantities for a split of the peers into the first L and the
/// remaining N-L, evaluated at a candidate horizon T.
struct HelperQuantities {
  double t_l_prime = 0.0;  // exchange-only finish time of the first set
  double t_zero_cap = 0.0; // fastest fresh-data delivery using the spare 1/L share
  double u_first = 0.0;    // bandwidth to exchange the first set's data in T
  double u_last = 0.0;     // bandwidth to push the last set's data to the first in T
  double u_r_first = 0.0;  // first-set capacity left over
  double u_r_last = 0.0;   // last-set capacity left over
  double u_r_both = 0.0;   // total capacity left over
  double f_first = 0.0;    // data held by the first L peers
  double f_last = 0.0;     // data held by the last N-L peers
};

HelperQuantities helper_quantities(const PeerSwarm& swarm,
                                   const InitialDistribution& dist, int L,
                                   double T);

/// Minimum time for all N peers to finish together. Pure unique-proportional
/// distributions only.
ServiceOutcome equal_service_time(const PeerSwarm& swarm,
                                  const InitialDistribution& dist);

/// Minimum time for the first L peers to finish, with the rest assisting.
ServiceOutcome differentiated_service_time(const PeerSwarm& swarm,
                                           const InitialDistribution& dist,
                                           int L);

}  // namespace p2pflow
