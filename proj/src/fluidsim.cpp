#include "p2pflow/fluidsim.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "p2pflow/format.hpp"

namespace p2pflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fresh_amount(const PeerSwarm& swarm, const InitialDistribution& dist) {
  const double sum = std::accumulate(dist.unique_amounts.begin(),
                                     dist.unique_amounts.end(), 0.0);
  return std::max(0.0, swarm.file_size() - sum - dist.common_data);
}

}  // namespace

double SimResult::max_finish(int first_k) const {
  double worst = 0.0;
  for (int i = 0; i < first_k; ++i) worst = std::max(worst, finish_times[i]);
  return worst;
}

double SimResult::total_held(int peer) const {
  return std::accumulate(category_state[peer].begin(),
                         category_state[peer].end(), 0.0);
}

SimResult simulate(const PeerSwarm& swarm, const InitialDistribution& dist,
                   const FlowPlan& plan, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!dist.pure_up()) {
    throw std::invalid_argument("simulation requires a pure "
                                "unique-proportional distribution");
  }
  const int n = swarm.size();
  if (static_cast<int>(dist.unique_amounts.size()) != n) {
    throw std::invalid_argument("distribution does not match the swarm");
  }
  const int ncat = n + 1;
  for (const Segment& seg : plan.segments) {
    for (const Flow& f : seg.flows) {
      if (f.sender < kSource || f.sender >= n || f.receiver < 0 ||
          f.receiver >= n || (!f.category.fresh() && f.category.peer >= n)) {
        throw std::invalid_argument("plan references an unknown peer");
      }
    }
  }

  SimResult result;
  result.step = step;
  result.finish_times.assign(n, kInf);
  result.category_state.assign(n, std::vector<double>(ncat, 0.0));

  std::vector<double> size(ncat, 0.0);
  size[0] = fresh_amount(swarm, dist);
  for (int i = 0; i < n; ++i) size[1 + i] = dist.unique_amounts[i];

  std::vector<double> total(n, 0.0);
  for (int i = 0; i < n; ++i) {
    result.category_state[i][1 + i] = dist.unique_amounts[i];
    total[i] = dist.unique_amounts[i] + dist.common_data;
    if (total[i] >= swarm.file_size() * (1.0 - 1e-9)) {
      result.finish_times[i] = 0.0;
    }
  }

  // Relayable pool: cumulative volume received via feeds (relay-marked flows
  // coming from the category's origin or the source). Forwards draw on it.
  std::vector<double> feed(static_cast<size_t>(n) * ncat, 0.0);

  struct Live {
    int sender;
    int receiver;
    int cat;
    double rate;
    bool relay;
    bool from_origin;  // counts into the receiver's relayable pool
    double sent = 0.0;
    double expected = 0.0;  // planned volume across its segment(s)
  };

  // Static capacity audit per segment.
  double seg_start = 0.0;
  for (const Segment& seg : plan.segments) {
    std::vector<double> out(n + 1, 0.0);
    for (const Flow& f : seg.flows) out[f.sender == kSource ? n : f.sender] += f.rate;
    for (int j = 0; j <= n; ++j) {
      const double cap = j == n ? swarm.source_upload() : swarm.peer_upload(j);
      if (out[j] > cap + 1e-9 * std::max(1.0, cap)) {
        result.violations.push_back(
            {seg_start, "capacity exceeded at " +
                            (j == n ? std::string("src") : std::to_string(j + 1))});
      }
    }
    seg_start += seg.duration;
  }

  std::vector<double> want;
  std::vector<double> group;  // per (receiver, cat) requested volume this step
  group.assign(static_cast<size_t>(n) * ncat, 0.0);
  std::vector<double> scale(static_cast<size_t>(n) * ncat, 1.0);
  std::vector<int> touched;
  std::vector<std::pair<double, int>> feed_stage;  // (volume, receiver*ncat+cat)

  double now = 0.0;
  const double file = swarm.file_size();
  std::vector<Live> live;

  auto run_window = [&](double duration, bool forwards_only) {
    double remaining = duration;
    while (remaining > 1e-15 * std::max(plan.horizon, 1.0)) {
      const double dt = std::min(step, remaining);
      want.assign(live.size(), 0.0);
      for (size_t fi = 0; fi < live.size(); ++fi) {
        Live& f = live[fi];
        if (forwards_only && !(f.relay && f.sender != kSource && !f.from_origin)) {
          continue;
        }
        double w = f.rate * dt;
        if (f.sender != kSource) {
          double avail;
          if (f.relay && !f.from_origin) {
            avail = feed[f.sender * ncat + f.cat] - f.sent;
          } else {
            // own block replication: capped by what the sender started with
            avail = (f.cat == 1 + f.sender ? dist.unique_amounts[f.sender] : 0.0) -
                    f.sent;
          }
          w = std::min(w, std::max(0.0, avail));
        } else {
          w = std::min(w, std::max(0.0, size[f.cat] - f.sent));
        }
        want[fi] = w;
        const int slot = f.receiver * ncat + f.cat;
        if (group[slot] == 0.0 && w > 0.0) touched.push_back(slot);
        group[slot] += w;
      }
      // Receivers clip all inflows of a category proportionally, against the
      // space available at the start of the step.
      for (int slot : touched) {
        const int r = slot / ncat;
        const int cat = slot % ncat;
        const double space =
            std::max(0.0, size[cat] - result.category_state[r][cat]);
        scale[slot] = group[slot] > space ? space / group[slot] : 1.0;
      }
      feed_stage.clear();
      for (size_t fi = 0; fi < live.size(); ++fi) {
        if (want[fi] <= 0.0) continue;
        Live& f = live[fi];
        const int slot = f.receiver * ncat + f.cat;
        const double w = want[fi] * scale[slot];
        if (w <= 0.0) continue;
        f.sent += w;
        result.category_state[f.receiver][f.cat] += w;
        total[f.receiver] += w;
        if (f.relay && f.from_origin) feed_stage.emplace_back(w, slot);
      }
      for (int slot : touched) {
        group[slot] = 0.0;
        scale[slot] = 1.0;
      }
      touched.clear();
      for (const auto& [w, slot] : feed_stage) feed[slot] += w;
      now += dt;
      remaining -= dt;
      for (int i = 0; i < n; ++i) {
        if (result.finish_times[i] == kInf &&
            total[i] >= file * (1.0 - 1e-9)) {
          result.finish_times[i] = now;
        }
      }
    }
  };

  for (const Segment& seg : plan.segments) {
    live.clear();
    for (const Flow& f : seg.flows) {
      const bool from_origin =
          f.relay && (f.sender == kSource ||
                      (!f.category.fresh() && f.category.peer == f.sender));
      live.push_back({f.sender, f.receiver, f.category.id(), f.rate, f.relay,
                      from_origin, 0.0, f.rate * seg.duration});
    }
    run_window(seg.duration, false);

    // Flows that fell measurably behind their plan mark a structural breach.
    for (const Live& f : live) {
      const double shortfall = f.expected - f.sent;
      const double tol = 3.0 * f.rate * step + 1e-6 * std::max(1.0, f.expected);
      const bool drains_later = f.relay && f.sender != kSource && !f.from_origin;
      if (shortfall > tol && !drains_later) {
        result.violations.push_back(
            {now, "underdelivery on flow to peer " + std::to_string(f.receiver + 1)});
      }
    }
  }

  // Grace window: forwards drain the feed they already received. Always at
  // least a few steps, so coarse steps still get their one-step lag back.
  const double grace =
      std::min(200.0 * step, std::max(0.05 * plan.horizon, 4.0 * step));
  run_window(grace, true);

  for (const Live& f : live) {
    const double shortfall = f.expected - f.sent;
    const double tol = 3.0 * f.rate * step + 1e-6 * std::max(1.0, f.expected);
    const bool forward = f.relay && f.sender != kSource && !f.from_origin;
    if (forward && shortfall > tol) {
      result.violations.push_back(
          {now, "forward starved toward peer " + std::to_string(f.receiver + 1)});
    }
  }
  return result;
}

void write_sim_csv(std::ostream& os, const SimResult& result) {
  os << "peer,finish_time\n";
  for (size_t i = 0; i < result.finish_times.size(); ++i) {
    os << i + 1 << "," << format_sig(result.finish_times[i]) << "\n";
  }
  os << "violations\n";
  if (result.violations.empty()) {
    os << "none\n";
  } else {
    for (const auto& v : result.violations) {
      os << format_sig(v.time) << "," << v.what << "\n";
    }
  }
}

namespace {

// Best normalized feasibility slack over one family's parameter rectangle,
// found with a coarse scan plus local refinement down to `resolution`.
class FamilySearch {
 public:
  FamilySearch(const PeerSwarm& swarm, const InitialDistribution& dist, int L,
               double T)
      : swarm_(swarm), dist_(dist), L_(L), T_(T) {}

  double slack(double copy_first, double copy_last, double fresh_relay,
               double fresh_forward) const {
    StrategyParams p;
    p.horizon = T_;
    p.targets = L_;
    p.copy_first = copy_first;
    p.copy_last = copy_last;
    p.fresh_relay = fresh_relay;
    p.fresh_forward = fresh_forward;
    const FlowPlan plan = assemble_plan(swarm_, dist_, p);
    return check_plan(plan, swarm_, dist_, false).min_slack;
  }

  // params: (u, v) in [0, hi_u] x [0, hi_v] mapped by `eval`.
  template <typename Eval>
  double search2d(double hi_u, double hi_v, double resolution,
                  Eval&& eval) const {
    const int kCoarse = 17;
    double span_u = std::max(hi_u, 1e-12);
    double span_v = std::max(hi_v, 1e-12);
    double cu = span_u / 2.0;
    double cv = span_v / 2.0;
    double best = -kInf;
    double bu = cu;
    double bv = cv;
    while (true) {
      for (int i = 0; i < kCoarse; ++i) {
        const double u =
            std::clamp(cu - span_u / 2 + span_u * i / (kCoarse - 1), 0.0, hi_u);
        for (int j = 0; j < kCoarse; ++j) {
          const double v =
              std::clamp(cv - span_v / 2 + span_v * j / (kCoarse - 1), 0.0,
                         hi_v);
          const double s = eval(u, v);
          if (s > best) {
            best = s;
            bu = u;
            bv = v;
          }
        }
      }
      if (std::max(span_u, span_v) / (kCoarse - 1) <= resolution) break;
      span_u = std::max(span_u / 4.0, resolution);
      span_v = std::max(span_v / 4.0, resolution);
      cu = bu;
      cv = bv;
    }
    return best;
  }

 private:
  const PeerSwarm& swarm_;
  const InitialDistribution& dist_;
  int L_;
  double T_;
};

}  // namespace

double oracle_min_time(const PeerSwarm& swarm, const InitialDistribution& dist,
                       int L, double resolution) {
  if (!dist.pure_up()) {
    throw std::invalid_argument("oracle requires a pure unique-proportional "
                                "distribution");
  }
  const int n = swarm.size();
  if (L < 1 || L > n) throw std::invalid_argument("set size out of [1, N]");
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("resolution must be positive");
  }
  const double c0 = swarm.source_upload();
  const double cap_first = swarm.prefix_capacity(L);
  const double cap_last = swarm.suffix_capacity(L);
  const DerivedQuantities d = derive_quantities(swarm, dist);

  auto feasible = [&](double T) {
    if (!(T > 0.0)) return false;
    FamilySearch fam(swarm, dist, L, T);
    // copies only, split between the two exchange classes
    double best = fam.search2d(c0, 1.0, resolution / std::max(c0, 1.0),
                               [&](double s, double k) {
                                 return fam.slack(s * k, s * (1.0 - k), 0, 0);
                               });
    if (best >= -1e-9) return true;
    // fresh forwarding through targets and, when present, the last set
    best = std::max(best, fam.search2d(cap_first, std::max(cap_last, 1e-12),
                                       resolution, [&](double w, double v) {
                                         return fam.slack(0, 0, w, v);
                                       }));
    return best >= -1e-9;
  };

  double lo = d.bottleneck_time;  // no schedule beats the bottleneck time
  double hi = std::max({lo, 1e-9});
  const double coarse = n * swarm.file_size() *
                        (1.0 / c0 + n / d.total_peer_upload);
  hi = std::max(hi, coarse);
  int guard = 0;
  while (!feasible(hi) && guard++ < 8) hi *= 2.0;
  if (guard > 8) return kInf;
  if (lo > 0.0 && feasible(lo)) return lo;

  for (int it = 0; it < 40 && hi - lo > 1e-5 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace p2pflow
