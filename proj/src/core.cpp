#include "p2pflow/core.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace p2pflow {

PeerSwarm::PeerSwarm(double source_upload, std::vector<double> peer_uploads,
                     double file_size)
    : source_upload_(source_upload),
      peer_uploads_(std::move(peer_uploads)),
      file_size_(file_size) {
  if (!(source_upload_ > 0.0) || !std::isfinite(source_upload_)) {
    throw std::invalid_argument("source upload capacity must be positive");
  }
  if (!(file_size_ > 0.0) || !std::isfinite(file_size_)) {
    throw std::invalid_argument("file size must be positive");
  }
  prefix_.reserve(peer_uploads_.size());
  double run = 0.0;
  for (double c : peer_uploads_) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("peer upload capacities must be positive");
    }
    run += c;
    prefix_.push_back(run);
  }
}

std::string ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return c.name + ": " + c.detail;
  }
  return {};
}

DerivedQuantities derive_quantities(const PeerSwarm& swarm,
                                    const InitialDistribution& dist) {
  if (static_cast<int>(dist.unique_amounts.size()) != swarm.size()) {
    throw std::invalid_argument(
        "distribution and swarm disagree on the number of peers");
  }
  if (swarm.size() == 0) {
    throw std::invalid_argument("swarm has no peers");
  }
  DerivedQuantities d;
  const double f = swarm.file_size();
  d.total_peer_upload = swarm.total_peer_upload();
  d.peer_data = dist.phi * f;
  d.source_only_data = (1.0 - dist.phi) * f;
  d.exchange_time = d.peer_data / d.total_peer_upload;
  d.bottleneck_time = d.source_only_data / swarm.source_upload();
  d.phi_zero =
      d.total_peer_upload / (swarm.source_upload() + d.total_peer_upload);
  d.no_data_bottleneck = f / swarm.source_upload();
  return d;
}

InitialDistribution make_up_distribution(const PeerSwarm& swarm, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) {
    throw std::invalid_argument("phi must lie in [0, 1]");
  }
  InitialDistribution dist;
  dist.phi = phi;
  dist.common_data = 0.0;
  const double scale = phi * swarm.file_size() / swarm.total_peer_upload();
  dist.unique_amounts.reserve(swarm.size());
  for (double c : swarm.peer_uploads()) {
    dist.unique_amounts.push_back(c * scale);
  }
  return dist;
}

std::pair<PeerSwarm, InitialDistribution> reduce_ucp_to_up(
    const PeerSwarm& swarm, const InitialDistribution& dist) {
  const double x = dist.common_data;
  const double f = swarm.file_size();
  if (x <= 0.0) {
    return {swarm, dist};
  }
  if (geq_tol(x, f)) {
    throw std::invalid_argument("common block covers the whole file");
  }
  if (x > dist.phi * f * (1.0 + kRelTol)) {
    throw std::invalid_argument("common block exceeds the peers' data share");
  }
  PeerSwarm reduced(swarm.source_upload(), swarm.peer_uploads(), f - x);
  InitialDistribution up;
  up.phi = std::max(0.0, (dist.phi * f - x) / (f - x));
  up.common_data = 0.0;
  up.unique_amounts = dist.unique_amounts;
  return {std::move(reduced), std::move(up)};
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate_distribution(const PeerSwarm& swarm,
                                       const InitialDistribution& dist) {
  ValidationReport report;
  auto add = [&](std::string name, bool pass, std::string detail) {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  const int n = swarm.size();
  const bool sized = static_cast<int>(dist.unique_amounts.size()) == n;
  add("length", sized,
      sized ? "" : "expected " + std::to_string(n) + " amounts, got " +
                       std::to_string(dist.unique_amounts.size()));
  if (!sized) return report;

  bool nonneg = dist.common_data >= 0.0;
  for (double a : dist.unique_amounts) nonneg = nonneg && a >= 0.0;
  add("non_negative", nonneg, nonneg ? "" : "negative amount present");

  const double sum = std::accumulate(dist.unique_amounts.begin(),
                                     dist.unique_amounts.end(), 0.0);
  const double total = sum + dist.common_data;
  const double implied_phi = total / swarm.file_size();
  const bool totals = nearly_equal(total, dist.phi * swarm.file_size());
  add("total_amount", totals,
      totals ? ""
             : "amounts imply phi " + fmt(implied_phi) + ", declared " +
                   fmt(dist.phi));

  const bool bound = leq_tol(implied_phi, 1.0) && leq_tol(dist.phi, 1.0);
  add("phi_bound", bound,
      bound ? "" : "phi " + fmt(std::max(implied_phi, dist.phi)) + " exceeds 1");

  // Unique blocks must be proportional to upload capacity: a_i / c_i equal
  // for all peers, i.e. equal to the exchange time.
  bool proportional = true;
  std::string prop_detail;
  if (sum > 0.0) {
    const double ta = sum / swarm.total_peer_upload();
    for (int i = 0; i < n; ++i) {
      const double ratio = dist.unique_amounts[i] / swarm.peer_upload(i);
      if (!nearly_equal(ratio, ta)) {
        proportional = false;
        prop_detail = "peer " + std::to_string(i + 1) + " ratio " + fmt(ratio) +
                      " vs " + fmt(ta);
        break;
      }
    }
  }
  add("proportionality", proportional, prop_detail);

  // Amount-based blocks cannot overlap; report the structural guarantee.
  add("uniqueness", true, "disjoint by construction");
  return report;
}

}  // namespace p2pflow
