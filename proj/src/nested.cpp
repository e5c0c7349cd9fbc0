#include "p2pflow/nested.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "p2pflow/format.hpp"

namespace p2pflow {

NextStage post_download_distribution(const PeerSwarm& swarm,
                                     const InitialDistribution& dist, int L,
                                     const FlowPlan& plan,
                                     const SimResult& sim) {
  const int n = swarm.size();
  if (L < 1 || L > n) throw std::invalid_argument("set size out of [1, N]");
  if (static_cast<int>(dist.unique_amounts.size()) != n) {
    throw std::invalid_argument("distribution does not match the swarm");
  }
  if (plan.target_count != L) {
    throw std::invalid_argument("plan does not target the first L peers");
  }
  for (int i = 0; i < L; ++i) {
    if (!(sim.finish_times[i] < std::numeric_limits<double>::infinity())) {
      throw std::runtime_error("stage incomplete: peer " +
                               std::to_string(i + 1) +
                               " never finished in simulation");
    }
  }

  std::vector<double> caps(swarm.peer_uploads().begin() + L,
                           swarm.peer_uploads().end());
  std::vector<double> amounts;
  amounts.reserve(n - L);
  for (int m = L; m < n; ++m) {
    amounts.push_back(sim.total_held(m));
  }

  NextStage next{
      PeerSwarm(swarm.source_upload() + swarm.prefix_capacity(L),
                std::move(caps), swarm.file_size()),
      InitialDistribution{},
      {},
      0.0};
  const double sum =
      std::accumulate(amounts.begin(), amounts.end(), 0.0);
  next.dist.phi = sum / swarm.file_size();
  next.dist.common_data = 0.0;
  next.dist.unique_amounts = std::move(amounts);

  // Retained blocks stay pairwise disjoint (own data plus a private fresh
  // sub-stream), so only proportionality needs measuring.
  double max_dev = 0.0;
  if (n - L > 0 && sum > 0.0) {
    const double mean = sum / next.swarm.total_peer_upload();
    for (int m = 0; m < n - L; ++m) {
      const double ratio =
          next.dist.unique_amounts[m] / next.swarm.peer_upload(m);
      max_dev = std::max(max_dev, std::fabs(ratio / mean - 1.0));
    }
  }
  next.max_proportionality_dev = max_dev;
  next.ucp_report.checks.push_back(
      {"proportionality_1pct", max_dev <= 0.01,
       "max relative deviation " + format_sig(max_dev, 3)});
  ValidationReport base = validate_distribution(next.swarm, next.dist);
  for (auto& c : base.checks) {
    if (c.name != "proportionality") {  // replaced by the 1% stage check
      next.ucp_report.checks.push_back(std::move(c));
    }
  }
  return next;
}

TierSchedule schedule_nested(const PeerSwarm& swarm,
                             const InitialDistribution& dist,
                             const std::vector<int>& tier_sizes,
                             std::optional<double> sim_step) {
  const int n = swarm.size();
  int total = 0;
  for (int t : tier_sizes) {
    if (t <= 0) throw std::invalid_argument("tier sizes must be positive");
    total += t;
  }
  if (total != n || tier_sizes.empty()) {
    throw std::invalid_argument("tier sizes must sum to the number of peers");
  }

  auto [cur_swarm, cur_dist] = reduce_ucp_to_up(swarm, dist);
  TierSchedule schedule;
  double cumulative = 0.0;

  for (size_t t = 0; t < tier_sizes.size(); ++t) {
    const int L = tier_sizes[t];
    TierStage stage;
    stage.size = L;
    stage.input_distribution = cur_dist;

    const bool last = t + 1 == tier_sizes.size();
    try {
      if (last) {
        const ServiceOutcome eq = equal_service_time(cur_swarm, cur_dist);
        stage.stage_time = eq.t_last;
        stage.regime = eq.regime;
      } else {
        const ServiceOutcome out =
            differentiated_service_time(cur_swarm, cur_dist, L);
        stage.stage_time = out.t_last;
        stage.regime = out.regime;
        const FlowPlan plan = plan_differentiated(cur_swarm, cur_dist, L);
        const double step =
            sim_step.value_or(std::max(out.t_last, 1e-12) / 1e4);
        const SimResult sim = simulate(cur_swarm, cur_dist, plan, step);
        NextStage next = post_download_distribution(cur_swarm, cur_dist, L,
                                                    plan, sim);
        stage.ucp_max_dev = next.max_proportionality_dev;
        cur_swarm = std::move(next.swarm);
        cur_dist = std::move(next.dist);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("tier " + std::to_string(t + 1) + ": " +
                               e.what());
    }
    cumulative += stage.stage_time;
    stage.cumulative_time = cumulative;
    schedule.stages.push_back(std::move(stage));
  }
  return schedule;
}

std::string tier_csv(const TierSchedule& schedule) {
  std::ostringstream os;
  os << "tier,size,stage_time,cumulative_time,regime\n";
  for (size_t t = 0; t < schedule.stages.size(); ++t) {
    const TierStage& s = schedule.stages[t];
    os << t + 1 << "," << s.size << "," << format_sig(s.stage_time) << ","
       << format_sig(s.cumulative_time) << "," << to_string(s.regime) << "\n";
  }
  return os.str();
}

}  // namespace p2pflow
