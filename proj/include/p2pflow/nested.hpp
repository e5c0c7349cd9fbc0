#pragma once

#include <optional>
#include <string>
#include <vector>

#include "p2pflow/analytic.hpp"
#include "p2pflow/core.hpp"
#include "p2pflow/fluidsim.hpp"
#include "p2pflow/planner.hpp"

namespace p2pflow {

/// The instance a finished first set leaves behind: the completed peers pool
/// their upload with the source, the rest carry whatever they accumulated.
struct NextStage {
  PeerSwarm swarm;
  InitialDistribution dist;
  ValidationReport ucp_report;
  double max_proportionality_dev = 0.0;
};

struct TierStage {
  int size = 0;
  double stage_time = 0.0;
  Regime regime = Regime::Eq16;
  double cumulative_time = 0.0;
  InitialDistribution input_distribution;
  double ucp_max_dev = 0.0;  // deviation measured on the *next* stage's input
};

struct TierSchedule {
  std::vector<TierStage> stages;

  double total_time() const {
    return stages.empty() ? 0.0 : stages.back().cumulative_time;
  }
};

/// Builds the follow-on instance after the first L peers finished under
/// `plan`. Remaining peers keep their own block plus everything the
/// simulation shows they retained (forwarded fresh sub-streams). The
/// resulting distribution is checked against the unique-proportional shape
/// at 1% relative tolerance; deviations are reported, never hidden.
NextStage post_download_distribution(const PeerSwarm& swarm,
                                     const InitialDistribution& dist, int L,
                                     const FlowPlan& plan,
                                     const SimResult& sim);

/// Chains differentiated stages over the given tier sizes (which must sum to
/// N) and finishes with one equal-service stage. Stage times come from the
/// closed forms; the simulator only carries state between stages.
TierSchedule schedule_nested(const PeerSwarm& swarm,
                             const InitialDistribution& dist,
                             const std::vector<int>& tier_sizes,
                             std::optional<double> sim_step = std::nullopt);

std::string tier_csv(const TierSchedule& schedule);

}  // namespace p2pflow
