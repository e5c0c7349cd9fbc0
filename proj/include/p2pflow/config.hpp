#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "p2pflow/core.hpp"

namespace p2pflow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  double phi_start = 0.0;
  double phi_stop = 0.0;
  int phi_steps = 1;
  int l_min = 1;
  int l_max = 1;
};

/// One experiment description, read from a flat JSON document.
struct RunConfig {
  double source_upload = 0.0;
  std::vector<double> peer_uploads;
  double file_size = 0.0;
  double phi = 0.0;
  double common_data = 0.0;
  std::optional<int> first_set_size;
  std::optional<SweepSpec> sweep;
  std::optional<double> sim_step;
  std::optional<std::string> output;

  PeerSwarm swarm() const;
  InitialDistribution distribution() const;
};

/// Parses and validates a config document. Unknown keys are rejected by
/// name; JSON syntax errors carry line/column positions.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

/// Evaluates the closed forms over the phi grid and L range, phi-major.
/// Columns: phi,L,T_L,regime,multiplicity.
std::string run_sweep(const RunConfig& config);

}  // namespace p2pflow
