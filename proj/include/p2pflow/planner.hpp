#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "p2pflow/core.hpp"

namespace p2pflow {

enum class Strategy { Fig3a, Fig3b, Fig4, Fig5a, Fig5b, Fig5c };

const char* to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& s);

/// A transferable data category: either fresh data (held only by the source)
/// or one peer's unique initial block.
struct Category {
  int peer = -1;  // -1 = fresh, otherwise 0-based owner

  bool fresh() const { return peer < 0; }
  int id() const { return fresh() ? 0 : 1 + peer; }  // dense index, n+1 slots
  bool operator==(const Category&) const = default;
};

inline Category fresh_category() { return Category{-1}; }
inline Category unique_category(int peer) { return Category{peer}; }

constexpr int kSource = -1;

/// One constant-rate transfer. `relay` marks streamed forwarding: a feed
/// into the sender (when it is the receiver of such a flow) or a replicated
/// forward out of it. A forward may not outpace the sender's feed of the
/// same category.
struct Flow {
  int sender = kSource;    // kSource or 0-based peer
  int receiver = 0;        // 0-based peer
  Category category;
  double rate = 0.0;
  bool relay = false;
};

struct Segment {
  double duration = 0.0;
  std::vector<Flow> flows;
};

/// Solved split variables of the strategy that produced a plan.
struct Splits {
  double x = 0.0;             // the strategy's headline split variable
  double assist_first = 0.0;  // source bandwidth copying first-set blocks
  double assist_last = 0.0;   // source bandwidth copying last-set blocks
  double fresh_relay = 0.0;   // first-set bandwidth forwarding fresh data
  double fresh_forward = 0.0; // last-set bandwidth forwarding fresh data
  double fresh_direct = 0.0;  // per-target direct fresh rate from the source
};

/// A static-rate transfer schedule. Most plans are a single segment; the
/// source-bound equal-service plan uses two (full-speed exchange, then
/// forward-only catch-up).
struct FlowPlan {
  double horizon = 0.0;
  int target_count = 0;  // the first L peers must complete
  Strategy strategy = Strategy::Fig3b;
  Splits splits;
  std::vector<Segment> segments;
};

struct PlanCheckItem {
  std::string name;
  bool pass = false;
  double slack = 0.0;
};

struct PlanReport {
  bool passed = true;
  std::vector<PlanCheckItem> checks;
  double min_slack = 0.0;         // most negative normalized slack
  double delivered_volume = 0.0;  // volume landing on target demands
  double required_volume = 0.0;   // total data the targets are missing

  bool all_pass() const;
  std::string first_failure() const;
};

/// Low-level assembly: realizes one member of the allocation-strategy family
/// for the given split parameters. Infeasible parameters produce a plan that
/// fails check_plan rather than throwing.
struct StrategyParams {
  double horizon = 0.0;
  int targets = 0;
  double copy_first = 0.0;    // source bandwidth copying first-set blocks
  double copy_last = 0.0;     // source bandwidth copying last-set blocks
  double fresh_relay = 0.0;   // requested first-set fresh forwarding
  double fresh_forward = 0.0; // requested last-set fresh forwarding
  Strategy label = Strategy::Fig3b;
};

FlowPlan assemble_plan(const PeerSwarm& swarm, const InitialDistribution& dist,
                       const StrategyParams& params);

/// Plan achieving equal_service_time for all N peers. Throws
/// std::logic_error if the constructed plan fails its own validation.
FlowPlan plan_equal_service(const PeerSwarm& swarm,
                            const InitialDistribution& dist);

/// Plan achieving differentiated_service_time for the first L peers.
FlowPlan plan_differentiated(const PeerSwarm& swarm,
                             const InitialDistribution& dist, int L);

/// Verifies capacity, demand, relay causality and completion. `detailed`
/// false skips building per-check names (used by search loops).
PlanReport check_plan(const FlowPlan& plan, const PeerSwarm& swarm,
                      const InitialDistribution& dist, bool detailed = true);

void write_plan(std::ostream& os, const FlowPlan& plan);
FlowPlan read_plan(std::istream& is);

}  // namespace p2pflow
