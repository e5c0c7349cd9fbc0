#include "p2pflow/planner.hpp"

#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "p2pflow/analytic.hpp"
#include "p2pflow/multiplicity.hpp"

namespace p2pflow {

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Fig3a: return "fig3a";
    case Strategy::Fig3b: return "fig3b";
    case Strategy::Fig4: return "fig4";
    case Strategy::Fig5a: return "fig5a";
    case Strategy::Fig5b: return "fig5b";
    case Strategy::Fig5c: return "fig5c";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "fig3a") return Strategy::Fig3a;
  if (s == "fig3b") return Strategy::Fig3b;
  if (s == "fig4") return Strategy::Fig4;
  if (s == "fig5a") return Strategy::Fig5a;
  if (s == "fig5b") return Strategy::Fig5b;
  if (s == "fig5c") return Strategy::Fig5c;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

bool PlanReport::all_pass() const { return passed; }

std::string PlanReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return c.name;
  }
  return passed ? std::string{} : "unnamed check";
}

namespace {

constexpr double kTinyRate = 1e-13;

struct FlowAccum {
  std::vector<Flow> flows;

  void add(int sender, int receiver, Category cat, double rate, bool relay) {
    if (rate > kTinyRate) flows.push_back({sender, receiver, cat, rate, relay});
  }

  // Merge duplicates and order deterministically.
  std::vector<Flow> take() {
    std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
      if (a.sender != b.sender) return a.sender < b.sender;
      if (a.receiver != b.receiver) return a.receiver < b.receiver;
      if (a.category.peer != b.category.peer)
        return a.category.peer < b.category.peer;
      return a.relay < b.relay;
    });
    std::vector<Flow> out;
    for (const Flow& f : flows) {
      if (!out.empty() && out.back().sender == f.sender &&
          out.back().receiver == f.receiver &&
          out.back().category == f.category && out.back().relay == f.relay) {
        out.back().rate += f.rate;
      } else {
        out.push_back(f);
      }
    }
    return out;
  }
};

double fresh_amount(const PeerSwarm& swarm, const InitialDistribution& dist) {
  const double sum = std::accumulate(dist.unique_amounts.begin(),
                                     dist.unique_amounts.end(), 0.0);
  return std::max(0.0, swarm.file_size() - sum - dist.common_data);
}

}  // namespace

FlowPlan assemble_plan(const PeerSwarm& swarm, const InitialDistribution& dist,
                       const StrategyParams& p) {
  const int n = swarm.size();
  const int first = p.targets;
  const double T = p.horizon;
  if (first < 1 || first > n || !(T > 0.0)) {
    throw std::invalid_argument("bad strategy parameters");
  }
  const auto& a = dist.unique_amounts;
  const double rho0 = fresh_amount(swarm, dist) / T;

  FlowPlan plan;
  plan.horizon = T;
  plan.target_count = first;
  plan.strategy = p.label;

  FlowAccum acc;
  std::vector<double> load(n, 0.0);
  double copies_first = 0.0;
  double copies_last = 0.0;

  // Unplaced in-set forwarding duty, keyed by origin.
  struct Shed {
    int origin;
    int k_recv;
    double duty;
  };
  std::vector<Shed> sheds;

  // One exchange class: origins [begin, end) each push their unique block to
  // k_recv receivers. Coverage per receiver splits into source copies, direct
  // upload and in-set forwarding, with the origin's own capacity deciding the
  // split. Totals per origin are mechanism-independent.
  auto run_class = [&](int begin, int end, int k_recv, double copy_budget,
                       double& copies_used) {
    if (k_recv <= 0 || begin >= end) return;
    double sum_rho = 0.0;
    for (int o = begin; o < end; ++o) sum_rho += a[o] / T;
    for (int o = begin; o < end; ++o) {
      const double rho = a[o] / T;
      if (rho <= kTinyRate) continue;
      double gamma = 0.0;
      if (copy_budget > 0.0 && sum_rho > 0.0) {
        gamma = std::min(rho, copy_budget * rho / (k_recv * sum_rho));
      }
      const double h = rho - gamma;
      double direct;
      double shed = 0.0;
      if (k_recv == 1) {
        direct = std::min(h, std::max(0.0, swarm.peer_upload(o)));
        // no third party to forward through; any gap shows up as a demand
        // shortfall in check_plan
      } else {
        direct = std::clamp((swarm.peer_upload(o) - h) / (k_recv - 1), 0.0, h);
        shed = h - direct;
      }
      for (int r = 0; r < first; ++r) {
        if (r == o) continue;
        acc.add(o, r, unique_category(o), direct, false);
        acc.add(kSource, r, unique_category(o), gamma, false);
      }
      load[o] += k_recv * direct + shed;  // shed still costs the origin a feed
      copies_used += k_recv * gamma;
      if (shed > kTinyRate && k_recv >= 2) {
        sheds.push_back({o, k_recv, (k_recv - 1) * shed});
      }
    }
  };

  run_class(0, first, first - 1, p.copy_first, copies_first);
  run_class(first, n, first, p.copy_last, copies_last);

  // Residual capacity of the targets takes the forwarding duties, each pool
  // spread proportionally to what is left.
  std::vector<double> resid(n, 0.0);
  for (int j = 0; j < n; ++j) {
    resid[j] = std::max(0.0, swarm.peer_upload(j) - load[j]);
  }

  auto distribute = [&](double duty, int exclude, auto&& emit) {
    if (duty <= kTinyRate) return 0.0;
    double avail = 0.0;
    for (int j = 0; j < first; ++j) {
      if (j != exclude) avail += resid[j];
    }
    if (avail <= kTinyRate) return 0.0;
    const double scale = std::min(1.0, duty / avail);
    double placed = 0.0;
    for (int j = 0; j < first; ++j) {
      if (j == exclude) continue;
      const double share = (duty <= avail) ? duty * resid[j] / avail
                                           : resid[j] * scale;
      if (share <= kTinyRate) continue;
      emit(j, share);
      load[j] += share;
      resid[j] -= share;
      placed += share;
    }
    return placed;
  };

  for (const Shed& s : sheds) {
    distribute(s.duty, s.origin, [&](int j, double duty_j) {
      const double feed = duty_j / (s.k_recv - 1);
      acc.add(s.origin, j, unique_category(s.origin), feed, true);
      for (int r = 0; r < first; ++r) {
        if (r == s.origin || r == j) continue;
        acc.add(j, r, unique_category(s.origin), feed, true);
      }
    });
  }

  // Fresh data: direct streams plus replicated forwarding through targets
  // and, when allowed, through the last set.
  double relay_req = (first >= 2) ? std::max(0.0, p.fresh_relay) : 0.0;
  double forward_req = (first < n) ? std::max(0.0, p.fresh_forward) : 0.0;
  double nu = 0.0;
  double relay_placed = 0.0;
  double forward_placed = 0.0;
  if (rho0 > kTinyRate) {
    double cov_relay = (first >= 2) ? relay_req / (first - 1) : 0.0;
    double cov_forward = forward_req / first;
    if (cov_relay + cov_forward > rho0) {
      const double trim = std::min(cov_forward, cov_relay + cov_forward - rho0);
      cov_forward -= trim;
      cov_relay = std::min(cov_relay, rho0 - cov_forward);
    }
    relay_req = cov_relay * std::max(1, first - 1);
    forward_req = cov_forward * first;

    relay_placed = distribute(relay_req, -1, [&](int j, double duty_j) {
      const double feed = duty_j / (first - 1);
      acc.add(kSource, j, fresh_category(), feed, true);
      for (int r = 0; r < first; ++r) {
        if (r == j) continue;
        acc.add(j, r, fresh_category(), feed, true);
      }
    });

    if (forward_req > kTinyRate) {
      double avail = 0.0;
      for (int m = first; m < n; ++m) avail += resid[m];
      if (avail > kTinyRate) {
        const double total = std::min(forward_req, avail);
        for (int m = first; m < n; ++m) {
          const double duty_m = total * resid[m] / avail;
          if (duty_m <= kTinyRate) continue;
          const double feed = duty_m / first;
          acc.add(kSource, m, fresh_category(), feed, true);
          for (int r = 0; r < first; ++r) {
            acc.add(m, r, fresh_category(), feed, true);
          }
          load[m] += duty_m;
          forward_placed += duty_m;
        }
      }
    }

    nu = rho0 - relay_placed / std::max(1, first - 1) -
         forward_placed / first;
    nu = std::max(0.0, nu);
    for (int r = 0; r < first; ++r) {
      acc.add(kSource, r, fresh_category(), nu, false);
    }
  }

  plan.splits.assist_first = copies_first;
  plan.splits.assist_last = copies_last;
  plan.splits.fresh_relay = relay_placed;
  plan.splits.fresh_forward = forward_placed;
  plan.splits.fresh_direct = nu;
  switch (p.label) {
    case Strategy::Fig3a:
    case Strategy::Fig5a:
      plan.splits.x = copies_first + copies_last;
      break;
    case Strategy::Fig5c:
      plan.splits.x = relay_placed + forward_placed;
      break;
    default:
      plan.splits.x = relay_placed;
      break;
  }
  plan.segments.push_back({T, acc.take()});
  return plan;
}

namespace {

// Source-bound equal service: the exchange runs at full speed and ends
// early; fresh sub-streams feed every peer throughout and are re-broadcast
// once the exchange is done.
FlowPlan build_source_bound_equal(const PeerSwarm& swarm,
                                  const InitialDistribution& dist,
                                  const DerivedQuantities& d) {
  const int n = swarm.size();
  const double T = d.bottleneck_time;
  const double t1 = (n - 1) * d.exchange_time;
  const double c0 = swarm.source_upload();

  FlowPlan plan;
  plan.horizon = T;
  plan.target_count = n;
  plan.strategy = Strategy::Fig3b;
  plan.splits.fresh_relay = (n - 1) * c0;
  plan.splits.x = plan.splits.fresh_relay;

  if (n == 1) {
    FlowAccum only;
    only.add(kSource, 0, fresh_category(), d.source_only_data / T, false);
    plan.splits.fresh_relay = 0.0;
    plan.splits.x = 0.0;
    plan.splits.fresh_direct = d.source_only_data / T;
    plan.segments.push_back({T, only.take()});
    return plan;
  }

  FlowAccum seg1;
  for (int i = 0; i < n; ++i) {
    const double rate = swarm.peer_upload(i) / (n - 1);
    if (dist.unique_amounts[i] > 0.0) {
      for (int r = 0; r < n; ++r) {
        if (r != i) seg1.add(i, r, unique_category(i), rate, false);
      }
    }
    seg1.add(kSource, i, fresh_category(),
             c0 * swarm.peer_upload(i) / d.total_peer_upload, true);
  }

  FlowAccum seg2;
  for (int j = 0; j < n; ++j) {
    const double mu = c0 * swarm.peer_upload(j) / d.total_peer_upload;
    seg2.add(kSource, j, fresh_category(), mu, true);
    const double fwd = mu * T / (T - t1);
    for (int r = 0; r < n; ++r) {
      if (r != j) seg2.add(j, r, fresh_category(), fwd, true);
    }
  }

  if (t1 <= kRelTol * T) {
    plan.segments.push_back({T, seg2.take()});
  } else {
    plan.segments.push_back({t1, seg1.take()});
    plan.segments.push_back({T - t1, seg2.take()});
  }
  return plan;
}

void require_valid(const FlowPlan& plan, const PeerSwarm& swarm,
                   const InitialDistribution& dist) {
  const PlanReport report = check_plan(plan, swarm, dist);
  if (!report.all_pass()) {
    throw std::logic_error("constructed plan failed validation: " +
                           report.first_failure());
  }
}

// Picks the fresh forwarding duties achieving per-target coverage rho0 with
// direct streams filling the remainder. cap_relay/cap_forward bound the
// duties that can actually be staffed.
void pick_fresh_duties(int L, double c0, double rho0, double cap_relay,
                       double cap_forward, double& relay, double& forward) {
  relay = 0.0;
  forward = 0.0;
  if (L < 2 || rho0 <= 0.0) return;
  const double direct = std::max(0.0, (c0 - rho0) / (L - 1));
  double cov = std::max(0.0, rho0 - direct);
  relay = std::min(cap_relay, (L - 1) * cov);
  cov -= relay / (L - 1);
  forward = std::min(cap_forward, L * std::max(0.0, cov));
}

}  // namespace

FlowPlan plan_equal_service(const PeerSwarm& swarm,
                            const InitialDistribution& dist) {
  if (!dist.pure_up()) {
    throw std::invalid_argument("plans require a pure unique-proportional "
                                "distribution; reduce the common block first");
  }
  const ServiceOutcome outcome = equal_service_time(swarm, dist);
  const DerivedQuantities d = derive_quantities(swarm, dist);
  const int n = swarm.size();
  const double T = outcome.t_last;
  const double c0 = swarm.source_upload();

  if (outcome.regime == Regime::BottleneckBound && dist.phi > 0.0) {
    FlowPlan plan = build_source_bound_equal(swarm, dist, d);
    require_valid(plan, swarm, dist);
    return plan;
  }

  StrategyParams p;
  p.horizon = T;
  p.targets = n;
  if (dist.phi > 0.0 &&
      geq_tol((n - 1) * d.exchange_time, n * d.bottleneck_time)) {
    // The exchange is the long pole; the source donates copies of the peers'
    // blocks and streams fresh data directly.
    p.label = Strategy::Fig3a;
    p.copy_first = std::max(0.0, (n - 1) * d.peer_data / T - d.total_peer_upload);
  } else {
    // Peers donate forwarding capacity so fresh data lands at the pooled
    // rate; the exchange stretches over the full horizon.
    p.label = Strategy::Fig3b;
    double relay, forward;
    pick_fresh_duties(n, c0, d.source_only_data / T,
                      std::numeric_limits<double>::infinity(), 0.0, relay,
                      forward);
    p.fresh_relay = relay;
  }
  FlowPlan plan = assemble_plan(swarm, dist, p);
  plan.splits.x = (p.label == Strategy::Fig3a) ? plan.splits.assist_first
                                               : plan.splits.fresh_relay;
  require_valid(plan, swarm, dist);
  return plan;
}

FlowPlan plan_differentiated(const PeerSwarm& swarm,
                             const InitialDistribution& dist, int L) {
  if (!dist.pure_up()) {
    throw std::invalid_argument("plans require a pure unique-proportional "
                                "distribution; reduce the common block first");
  }
  const int n = swarm.size();
  if (L < 1 || L > n) throw std::invalid_argument("set size out of [1, N]");
  const ServiceOutcome outcome = differentiated_service_time(swarm, dist, L);
  const DerivedQuantities d = derive_quantities(swarm, dist);
  const double T = outcome.t_last;
  const double c0 = swarm.source_upload();
  const double rho0 = d.source_only_data / T;

  StrategyParams p;
  p.horizon = T;
  p.targets = L;

  const double f_first = std::accumulate(dist.unique_amounts.begin(),
                                         dist.unique_amounts.begin() + L, 0.0);
  const double f_last = d.peer_data - f_first;

  if (outcome.regime == Regime::Eq18Single) {
    p.label = Strategy::Fig5a;
    p.copy_last = std::max(
        0.0, f_last / T - (d.total_peer_upload - swarm.peer_upload(0)));
  } else if (geq_tol(T, L * d.exchange_time)) {
    // Exchange fits at stretched rates; leftovers forward fresh data.
    p.label = Strategy::Fig5c;
    const double u_first =
        std::max(0.0, swarm.prefix_capacity(L) - (L - 1) * f_first / T);
    const double u_last =
        std::max(0.0, swarm.suffix_capacity(L) - L * f_last / T);
    double relay, forward;
    pick_fresh_duties(L, c0, rho0, u_first, u_last, relay, forward);
    p.fresh_relay = relay;
    p.fresh_forward = forward;
  } else {
    // T below L*ta: the last set cannot stream its data alone; the first set
    // forwards it, and either source copies (long-pole exchange) or first-set
    // leftovers (long-pole fresh data) square the budget.
    const double t_l_prime = (L * d.peer_data - f_first) / d.total_peer_upload;
    if (less_tol(L * d.bottleneck_time, t_l_prime)) {
      p.label = Strategy::Fig5a;
      const double spare = std::max(0.0, c0 - L * rho0);
      const double u_first = (L - 1) * f_first / T;
      const double u_last = L * f_last / T;
      p.copy_first = (u_first + u_last > 0.0)
                         ? spare * u_first / (u_first + u_last)
                         : spare;
      p.copy_last = spare - p.copy_first;
    } else {
      p.label = Strategy::Fig5b;
      double relay, forward;
      pick_fresh_duties(L, c0, rho0,
                        std::numeric_limits<double>::infinity(), 0.0, relay,
                        forward);
      p.fresh_relay = relay;
    }
  }

  FlowPlan plan = assemble_plan(swarm, dist, p);
  require_valid(plan, swarm, dist);
  return plan;
}

PlanReport check_plan(const FlowPlan& plan, const PeerSwarm& swarm,
                      const InitialDistribution& dist, bool detailed) {
  PlanReport report;
  report.passed = true;
  report.min_slack = std::numeric_limits<double>::infinity();
  const int n = swarm.size();
  const int ncat = n + 1;
  const int targets = plan.target_count;

  auto record = [&](bool pass, double slack, auto&& name_fn) {
    report.passed = report.passed && pass;
    report.min_slack = std::min(report.min_slack, slack);
    if (detailed) report.checks.push_back({name_fn(), pass, slack});
  };

  // Structure.
  bool ok = plan.horizon > 0.0 && targets >= 1 && targets <= n &&
            !plan.segments.empty();
  double dur_sum = 0.0;
  for (const Segment& seg : plan.segments) {
    ok = ok && seg.duration > 0.0;
    dur_sum += seg.duration;
    for (const Flow& f : seg.flows) {
      ok = ok && f.sender >= kSource && f.sender < n && f.receiver >= 0 &&
           f.receiver < n && f.rate >= 0.0 &&
           (f.category.fresh() ||
            (f.category.peer >= 0 && f.category.peer < n));
    }
  }
  ok = ok && nearly_equal(dur_sum, plan.horizon);
  record(ok, ok ? 0.0 : -1.0, [] { return std::string("structure"); });
  if (!ok) return report;

  // Capacity, per segment and sender. The source is index n in the scratch
  // array.
  for (size_t s = 0; s < plan.segments.size(); ++s) {
    std::vector<double> out(n + 1, 0.0);
    for (const Flow& f : plan.segments[s].flows) {
      out[f.sender == kSource ? n : f.sender] += f.rate;
    }
    for (int j = 0; j <= n; ++j) {
      const double cap = (j == n) ? swarm.source_upload() : swarm.peer_upload(j);
      const double slack = cap - out[j];
      const bool pass = out[j] <= cap + 1e-9;
      record(pass, slack / std::max(1.0, cap), [&] {
        return "capacity " + std::string(j == n ? "src" : std::to_string(j + 1)) +
               " seg " + std::to_string(s);
      });
    }
  }

  // Demand per target and category it lacks.
  const double f0 = fresh_amount(swarm, dist);
  std::vector<double> delivered(static_cast<size_t>(n) * ncat, 0.0);
  for (const Segment& seg : plan.segments) {
    for (const Flow& f : seg.flows) {
      delivered[f.receiver * ncat + f.category.id()] += f.rate * seg.duration;
    }
  }
  double total_delivered = 0.0;
  double total_required = 0.0;
  for (int r = 0; r < targets; ++r) {
    for (int k = 0; k < ncat; ++k) {
      const bool fresh = k == 0;
      if (!fresh && k - 1 == r) continue;
      const double need = fresh ? f0 : dist.unique_amounts[k - 1];
      if (need <= kTinyRate) continue;
      const double got = delivered[r * ncat + k];
      total_delivered += got;
      total_required += need;
      const double slack = got - need;
      const bool pass = slack >= -1e-9 * std::max(need, 1.0);
      record(pass, slack / std::max(need, 1.0), [&] {
        return "demand " + std::to_string(r + 1) + " " +
               (fresh ? std::string("fresh") : "u" + std::to_string(k));
      });
    }
    const double total =
        dist.unique_amounts[r] + dist.common_data +
        std::accumulate(delivered.begin() + r * ncat,
                        delivered.begin() + (r + 1) * ncat, 0.0);
    const double slack = total - swarm.file_size();
    const bool pass = slack >= -1e-9 * swarm.file_size();
    record(pass, slack / swarm.file_size(),
           [&] { return "completion " + std::to_string(r + 1); });
  }
  report.delivered_volume = total_delivered;
  report.required_volume = total_required;

  // Relay causality: a forward must never be cumulatively ahead of the feed
  // it replicates. Both sides are piecewise linear with the same breakpoints,
  // so checking every segment boundary suffices.
  std::vector<double> feed_cum(static_cast<size_t>(n) * ncat, 0.0);
  std::map<std::tuple<int, int, int>, double> fwd_cum;  // (sender, cat, receiver)
  for (size_t s = 0; s < plan.segments.size(); ++s) {
    const Segment& seg = plan.segments[s];
    for (const Flow& f : seg.flows) {
      if (!f.relay) continue;
      const bool from_origin =
          f.sender == kSource ||
          (!f.category.fresh() && f.category.peer == f.sender);
      if (from_origin) {
        feed_cum[f.receiver * ncat + f.category.id()] +=
            f.rate * seg.duration;
      } else {
        fwd_cum[{f.sender, f.category.id(), f.receiver}] +=
            f.rate * seg.duration;
      }
    }
    for (const auto& [key, out] : fwd_cum) {
      const auto [j, cat, r] = key;
      const double in = feed_cum[j * ncat + cat];
      const double slack = in - out;
      const bool pass = out <= in + 1e-9 * std::max(1.0, in);
      record(pass, slack / std::max(1.0, in), [&] {
        return "causality " + std::to_string(j + 1) + " cat " +
               std::to_string(cat) + " -> " + std::to_string(r + 1) + " seg " +
               std::to_string(s);
      });
    }
  }

  if (report.min_slack == std::numeric_limits<double>::infinity()) {
    report.min_slack = 0.0;
  }
  return report;
}

void write_plan(std::ostream& os, const FlowPlan& plan) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  os << "horizon " << num(plan.horizon) << "\n";
  os << "targets " << plan.target_count << "\n";
  os << "strategy " << to_string(plan.strategy) << "\n";
  os << "segments " << plan.segments.size() << "\n";
  for (size_t s = 0; s < plan.segments.size(); ++s) {
    os << "segment " << s << " " << num(plan.segments[s].duration) << "\n";
    for (const Flow& f : plan.segments[s].flows) {
      if (f.sender == kSource) {
        os << "src";
      } else {
        os << f.sender + 1;
      }
      os << " " << f.receiver + 1 << " "
         << (f.category.fresh() ? std::string("fresh")
                                : "u" + std::to_string(f.category.peer + 1))
         << " " << num(f.rate) << " " << (f.relay ? 1 : 0) << "\n";
    }
  }
}

FlowPlan read_plan(std::istream& is) {
  FlowPlan plan;
  std::string line;
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("malformed plan: " + what);
  };
  size_t nsegs = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "horizon") {
      if (!(ls >> plan.horizon)) fail("horizon");
    } else if (tok == "targets") {
      if (!(ls >> plan.target_count)) fail("targets");
    } else if (tok == "strategy") {
      std::string s;
      ls >> s;
      plan.strategy = strategy_from_string(s);
    } else if (tok == "segments") {
      if (!(ls >> nsegs)) fail("segments");
    } else if (tok == "segment") {
      size_t idx;
      double dur;
      if (!(ls >> idx >> dur)) fail("segment header");
      plan.segments.push_back({dur, {}});
    } else {
      if (plan.segments.empty()) fail("flow before segment header");
      Flow f;
      if (tok == "src") {
        f.sender = kSource;
      } else {
        f.sender = std::stoi(tok) - 1;
      }
      int receiver;
      std::string cat;
      int relay;
      if (!(ls >> receiver >> cat >> f.rate >> relay)) fail("flow line");
      f.receiver = receiver - 1;
      if (cat == "fresh") {
        f.category = fresh_category();
      } else if (cat.size() > 1 && cat[0] == 'u') {
        f.category = unique_category(std::stoi(cat.substr(1)) - 1);
      } else {
        fail("category '" + cat + "'");
      }
      f.relay = relay != 0;
      plan.segments.back().flows.push_back(f);
    }
  }
  if (plan.segments.size() != nsegs || plan.segments.empty()) {
    fail("segment count");
  }
  return plan;
}

}  // namespace p2pflow
