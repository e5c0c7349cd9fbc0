#include "p2pflow/multiplicity.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace p2pflow {

const char* to_string(MultiplicityRule rule) {
  switch (rule) {
    case MultiplicityRule::PhiAbovePhi0: return "phi_above_phi0";
    case MultiplicityRule::PhiEqualPhi0: return "phi_equal_phi0";
    case MultiplicityRule::Ineq32AtLPrimePlus1: return "ineq32_at_Lprime_plus_1";
    case MultiplicityRule::Ineq34Search: return "ineq34_search";
    case MultiplicityRule::ClassicFallback: return "classic_fallback";
  }
  return "?";
}

double multiplicity_function(const PeerSwarm& swarm, int m) {
  const int n = swarm.size();
  if (m < 1 || m > n) {
    throw std::invalid_argument("multiplicity argument out of [1, N]");
  }
  if (m == 1) return std::numeric_limits<double>::infinity();
  const double head = swarm.prefix_capacity(m) / (m - 1);
  if (m == n) return head;
  return head + swarm.suffix_capacity(m) / m;
}

MultiplicityResult classic_multiplicity(const PeerSwarm& swarm,
                                        bool sort_descending) {
  if (sort_descending) {
    std::vector<double> caps = swarm.peer_uploads();
    std::sort(caps.begin(), caps.end(), std::greater<>());
    PeerSwarm sorted(swarm.source_upload(), std::move(caps), swarm.file_size());
    return classic_multiplicity(sorted, false);
  }
  const double c0 = swarm.source_upload();
  for (int m = swarm.size(); m >= 2; --m) {
    if (leq_tol(c0, multiplicity_function(swarm, m))) {
      return {m, MultiplicityRule::ClassicFallback, std::nullopt};
    }
  }
  return {1, MultiplicityRule::ClassicFallback, std::nullopt};
}

namespace {

void require_below_phi0(const DerivedQuantities& d, double phi) {
  if (geq_tol(phi, d.phi_zero)) {
    throw std::invalid_argument("operation defined only for phi below phi0");
  }
}

double last_set_data(const InitialDistribution& dist, int first) {
  return std::accumulate(dist.unique_amounts.begin() + first,
                         dist.unique_amounts.end(), 0.0);
}

}  // namespace

double residual_rate_ur(const PeerSwarm& swarm, const InitialDistribution& dist,
                        int l) {
  const int n = swarm.size();
  if (l < 2 || l > n - 1) {
    throw std::invalid_argument("ur argument out of [2, N-1]");
  }
  const DerivedQuantities d = derive_quantities(swarm, dist);
  require_below_phi0(d, dist.phi);
  return d.total_peer_upload / (l - 1) - d.peer_data / d.bottleneck_time -
         swarm.suffix_capacity(l) / (static_cast<double>(l) * (l - 1));
}

bool check_ineq_34(const PeerSwarm& swarm, const InitialDistribution& dist,
                   int L) {
  const int n = swarm.size();
  if (L < 1 || L > n) {
    throw std::invalid_argument("set size out of [1, N]");
  }
  const DerivedQuantities d = derive_quantities(swarm, dist);
  require_below_phi0(d, dist.phi);
  if (L == 1) return true;
  return leq_tol(swarm.source_upload(),
                 (1.0 - dist.phi) * multiplicity_function(swarm, L));
}

int l_prime_index(const PeerSwarm& swarm, const InitialDistribution& dist) {
  const DerivedQuantities d = derive_quantities(swarm, dist);
  const int n = swarm.size();
  if (d.exchange_time <= 0.0) return std::max(1, n - 1);
  const double r = d.bottleneck_time / d.exchange_time;
  const double rounded = std::round(r);
  int lp;
  if (nearly_equal(r, rounded)) {
    lp = static_cast<int>(rounded) - 1;  // t0 == k*ta sits at the top of bin k-1
  } else {
    lp = static_cast<int>(std::floor(r));
  }
  return std::clamp(lp, 1, std::max(1, n - 1));
}

bool check_ineq_32(const PeerSwarm& swarm, const InitialDistribution& dist,
                   int L) {
  const int n = swarm.size();
  if (L < 2 || L > n) {
    throw std::invalid_argument("set size out of [2, N]");
  }
  const DerivedQuantities d = derive_quantities(swarm, dist);
  require_below_phi0(d, dist.phi);
  if (L != l_prime_index(swarm, dist) + 1) {
    throw std::invalid_argument("residual-rate test applies only at L' + 1");
  }
  const double f_last = last_set_data(dist, L);
  const double residual =
      d.total_peer_upload -
      ((L - 1) * d.peer_data + f_last) / d.bottleneck_time;
  return geq_tol(residual, (L - 1) * swarm.source_upload());
}

MultiplicityResult phi_multiplicity(const PeerSwarm& swarm,
                                    const InitialDistribution& dist) {
  if (!dist.pure_up()) {
    throw std::invalid_argument(
        "phi multiplicity requires a pure unique-proportional distribution");
  }
  const DerivedQuantities d = derive_quantities(swarm, dist);
  if (nearly_equal(dist.phi, d.phi_zero)) {
    return {1, MultiplicityRule::PhiEqualPhi0, std::nullopt};
  }
  if (dist.phi > d.phi_zero) {
    return {0, MultiplicityRule::PhiAbovePhi0, std::nullopt};
  }
  const int lp = l_prime_index(swarm, dist);
  if (check_ineq_32(swarm, dist, lp + 1)) {
    return {lp + 1, MultiplicityRule::Ineq32AtLPrimePlus1, lp};
  }
  for (int L = lp; L >= 1; --L) {
    if (check_ineq_34(swarm, dist, L)) {
      return {L, MultiplicityRule::Ineq34Search, lp};
    }
  }
  return {1, MultiplicityRule::Ineq34Search, lp};  // L == 1 always passes
}

}  // namespace p2pflow
