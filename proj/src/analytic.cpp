#include "p2pflow/analytic.hpp"

#include <numeric>
#include <stdexcept>

#include "p2pflow/multiplicity.hpp"

namespace p2pflow {

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::BottleneckBound: return "bottleneck_bound";
    case Regime::Eq16: return "eq16";
    case Regime::Eq1SourceBound: return "eq1_source_bound";
    case Regime::Eq1PeerBound: return "eq1_peer_bound";
    case Regime::Eq18Single: return "eq18_single";
    case Regime::Eq24: return "eq24";
    case Regime::Eq31: return "eq31";
    case Regime::Eq6Bottleneck: return "eq6_bottleneck";
    case Regime::Eq7: return "eq7";
  }
  return "?";
}

namespace {

constexpr double kZeroPhi = 1e-15;

void require_pure_up(const InitialDistribution& dist) {
  if (!dist.pure_up()) {
    throw std::invalid_argument(
        "analysis requires a pure unique-proportional distribution; reduce "
        "the common block first");
  }
}

double first_set_data(const InitialDistribution& dist, int L) {
  return std::accumulate(dist.unique_amounts.begin(),
                         dist.unique_amounts.begin() + L, 0.0);
}

}  // namespace

HelperQuantities helper_quantities(const PeerSwarm& swarm,
                                   const InitialDistribution& dist, int L,
                                   double T) {
  const int n = swarm.size();
  if (L < 1 || L > n) throw std::invalid_argument("set size out of [1, N]");
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  const DerivedQuantities d = derive_quantities(swarm, dist);

  HelperQuantities h;
  h.f_first = first_set_data(dist, L);
  h.f_last = d.peer_data - h.f_first;
  h.t_l_prime = (L * d.peer_data - h.f_first) / d.total_peer_upload;
  h.t_zero_cap = std::max(
      d.source_only_data /
          ((swarm.source_upload() + swarm.prefix_capacity(L) / L) / L),
      d.bottleneck_time);
  h.u_first = (L - 1) * h.f_first / T;
  h.u_last = L * h.f_last / T;
  h.u_r_first = swarm.prefix_capacity(L) - h.u_first;
  h.u_r_last = swarm.suffix_capacity(L) - h.u_last;
  h.u_r_both = d.total_peer_upload - h.u_first - h.u_last;
  return h;
}

ServiceOutcome equal_service_time(const PeerSwarm& swarm,
                                  const InitialDistribution& dist) {
  require_pure_up(dist);
  const DerivedQuantities d = derive_quantities(swarm, dist);
  const int n = swarm.size();
  const double c0 = swarm.source_upload();
  const double f = swarm.file_size();
  const double pooled = (c0 + d.total_peer_upload) / n;

  if (dist.phi <= kZeroPhi) {
    if (leq_tol(c0, pooled)) {
      return {f / c0, Regime::Eq1SourceBound, n};
    }
    return {f / pooled, Regime::Eq1PeerBound, n};
  }

  // Source-bound case: the exchange finishes strictly inside the bottleneck
  // time and the spare peer capacity can forward fresh data at full source
  // rate.
  if (d.bottleneck_time > 0.0 &&
      less_tol((n - 1) * d.exchange_time, d.bottleneck_time)) {
    const double spare =
        d.total_peer_upload - (n - 1) * d.peer_data / d.bottleneck_time;
    if (geq_tol(spare, (n - 1) * c0)) {
      return {d.bottleneck_time, Regime::BottleneckBound, n};
    }
  }
  return {(n - dist.phi) * f / (c0 + d.total_peer_upload), Regime::Eq16, n};
}

ServiceOutcome differentiated_service_time(const PeerSwarm& swarm,
                                           const InitialDistribution& dist,
                                           int L) {
  require_pure_up(dist);
  const int n = swarm.size();
  if (L < 1 || L > n) throw std::invalid_argument("set size out of [1, N]");
  const DerivedQuantities d = derive_quantities(swarm, dist);
  const double c0 = swarm.source_upload();
  const double f = swarm.file_size();
  const bool no_data = dist.phi <= kZeroPhi;

  const int m = no_data ? classic_multiplicity(swarm).m
                        : phi_multiplicity(swarm, dist).m;
  if (L <= m) {
    return {d.bottleneck_time,
            no_data ? Regime::Eq6Bottleneck : Regime::BottleneckBound, L};
  }
  if (L == 1 && geq_tol(dist.phi, d.phi_zero)) {
    return {(f - dist.unique_amounts[0]) /
                (c0 + d.total_peer_upload - swarm.peer_upload(0)),
            Regime::Eq18Single, 1};
  }

  const double f_first = first_set_data(dist, L);
  const double t_zero_cap = std::max(
      d.source_only_data / ((c0 + swarm.prefix_capacity(L) / L) / L),
      d.bottleneck_time);
  if (leq_tol(t_zero_cap, L * d.exchange_time)) {
    return {(L * f - f_first) / (c0 + d.total_peer_upload), Regime::Eq24, L};
  }
  return {(L - dist.phi) * f /
              (c0 + d.total_peer_upload - swarm.suffix_capacity(L) / L),
          no_data ? Regime::Eq7 : Regime::Eq31, L};
}

}  // namespace p2pflow
