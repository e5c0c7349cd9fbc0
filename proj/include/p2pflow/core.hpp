#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace p2pflow {

// Relative tolerance for regime-boundary comparisons. Boundaries such as
// t0 == ta are measure-zero in the input space; a fixed documented tolerance
// keeps case selection deterministic.
inline constexpr double kRelTol = 1e-9;

inline bool nearly_equal(double a, double b, double rtol = kRelTol) {
  return std::fabs(a - b) <= rtol * std::max({std::fabs(a), std::fabs(b), 1.0});
}

// a <= b, treating near-equal values as equal.
inline bool leq_tol(double a, double b, double rtol = kRelTol) {
  return a <= b || nearly_equal(a, b, rtol);
}

inline bool geq_tol(double a, double b, double rtol = kRelTol) {
  return a >= b || nearly_equal(a, b, rtol);
}

// Strictly less; near-equal values count as a tie, not as less.
inline bool less_tol(double a, double b, double rtol = kRelTol) {
  return a < b && !nearly_equal(a, b, rtol);
}

/// An upload-constrained swarm: one source holding the whole file plus N
/// peers. Units are abstract (data units, time units, data per time).
/// Peer order is significant and preserved as given; prefix/suffix capacity
/// sums follow that order.
class PeerSwarm {
 public:
  PeerSwarm(double source_upload, std::vector<double> peer_uploads,
            double file_size);

  double source_upload() const { return source_upload_; }
  const std::vector<double>& peer_uploads() const { return peer_uploads_; }
  double peer_upload(int i) const { return peer_uploads_[i]; }
  double file_size() const { return file_size_; }

  int size() const { return static_cast<int>(peer_uploads_.size()); }
  /// Sum of all peer upload capacities (U).
  double total_peer_upload() const { return prefix_.empty() ? 0.0 : prefix_.back(); }
  /// Sum of the first k peer capacities, 0 <= k <= N.
  double prefix_capacity(int k) const { return k <= 0 ? 0.0 : prefix_[k - 1]; }
  /// Sum of the last N-k peer capacities.
  double suffix_capacity(int k) const {
    return total_peer_upload() - prefix_capacity(k);
  }

 private:
  double source_upload_ = 0.0;
  std::vector<double> peer_uploads_;
  double file_size_ = 0.0;
  std::vector<double> prefix_;  // running capacity sums
};

/// Initial data held by the peers before download starts. Data is modeled
/// as continuous per-category amounts, never as file intervals; uniqueness
/// of each peer's block is structural. `common_data` is the block every
/// peer holds (zero under a pure unique-proportional distribution).
struct InitialDistribution {
  double phi = 0.0;          // fraction of the file present across peers
  double common_data = 0.0;  // x, held by every peer
  std::vector<double> unique_amounts;  // a_i, one per peer

  bool pure_up() const { return common_data <= 0.0; }
};

/// Scalar quantities shared by the analysis modules.
struct DerivedQuantities {
  double total_peer_upload = 0.0;   // U
  double peer_data = 0.0;           // F_a, amount held across peers
  double source_only_data = 0.0;    // F_0, amount only the source holds
  double exchange_time = 0.0;       // t_a, time for each peer to push its block
  double bottleneck_time = 0.0;     // t_0 = F_0 / C_0
  double phi_zero = 0.0;            // U / (C_0 + U)
  double no_data_bottleneck = 0.0;  // t_b = F / C_0
};

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
  }
  std::string first_failure() const;
};

/// Computes the derived scalars for a distribution on a swarm. Pure; throws
/// std::invalid_argument on a length mismatch.
DerivedQuantities derive_quantities(const PeerSwarm& swarm,
                                    const InitialDistribution& dist);

/// Builds the unique-proportional distribution for a given phi:
/// a_i = c_i * phi * F / U, no common block.
InitialDistribution make_up_distribution(const PeerSwarm& swarm, double phi);

/// Rewrites an instance with a common block x as the equivalent pure
/// unique-proportional instance on a file of size F－x. Identity when x == 0.
std::pair<PeerSwarm, InitialDistribution> reduce_ucp_to_up(
    const PeerSwarm& swarm, const InitialDistribution& dist);

/// Checks every distribution invariant and reports each outcome; never
/// throws for invalid data. Disjointness of the unique blocks is satisfied
/// by construction of the quantity model and reported as such.
ValidationReport validate_distribution(const PeerSwarm& swarm,
                                       const InitialDistribution& dist);

}  // namespace p2pflow
