#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "p2pflow/core.hpp"
#include "p2pflow/planner.hpp"

namespace p2pflow {

struct SimViolation {
  double time = 0.0;
  std::string what;
};

/// Outcome of executing a plan in discrete time.
struct SimResult {
  std::vector<double> finish_times;  // per peer; +inf if never complete
  std::vector<std::vector<double>> category_state;  // [peer][0=fresh,1+i=unique i]
  std::vector<SimViolation> violations;
  double step = 0.0;

  double max_finish(int first_k) const;
  double total_held(int peer) const;
};

/// Advances the plan in quanta of `step`. Transfers are clipped by what the
/// sender actually holds of a category (forwards may not outpace their feed)
/// and by the receiver's remaining need. After the horizon, forwards keep
/// draining already-received feed for a short grace window so first-order
/// lag does not mask completion. Deterministic for fixed inputs.
SimResult simulate(const PeerSwarm& swarm, const InitialDistribution& dist,
                   const FlowPlan& plan, double step);

/// Independent minimum-horizon estimate: binary-searches the horizon and
/// decides feasibility at each candidate by sweeping the strategy family's
/// free split parameters over a refined grid, accepting a horizon when some
/// assembled plan passes every plan check. Never consults the closed forms.
/// The returned value can only overestimate the true optimum (grid misses
/// report infeasible). `resolution` is the final grid spacing in rate units.
double oracle_min_time(const PeerSwarm& swarm, const InitialDistribution& dist,
                       int L, double resolution);

void write_sim_csv(std::ostream& os, const SimResult& result);

}  // namespace p2pflow
