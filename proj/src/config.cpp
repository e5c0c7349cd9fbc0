#include "p2pflow/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "p2pflow/analytic.hpp"
#include "p2pflow/format.hpp"
#include "p2pflow/multiplicity.hpp"

namespace p2pflow {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

std::pair<int, int> line_column(const std::string& text, size_t byte) {
  int line = 1;
  int col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number_field(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) fail("field '" + key + "' must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) fail("field '" + key + "' must be finite");
  return v;
}

int int_field(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer()) {
    fail("field '" + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

}  // namespace

PeerSwarm RunConfig::swarm() const {
  return PeerSwarm(source_upload, peer_uploads, file_size);
}

InitialDistribution RunConfig::distribution() const {
  InitialDistribution d = make_up_distribution(swarm(), phi);
  if (common_data > 0.0) {
    // Declared phi covers both the common block and the unique blocks.
    const double unique_total = phi * file_size - common_data;
    if (unique_total < -kRelTol * file_size) {
      fail("common_data exceeds the data share implied by phi");
    }
    const double scale = phi > 0.0 ? std::max(0.0, unique_total) /
                                         (phi * file_size)
                                   : 0.0;
    for (double& a : d.unique_amounts) a *= scale;
    d.common_data = common_data;
  }
  return d;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte ? e.byte - 1 : 0);
    fail("parse error at line " + std::to_string(line) + ", column " +
         std::to_string(col));
  }
  if (!doc.is_object()) fail("config must be a JSON object");

  static const std::set<std::string> kKnown = {
      "source_upload", "peer_uploads", "file_size",  "phi",
      "common_data",   "first_set_size", "phi_start", "phi_stop",
      "phi_steps",     "l_min",        "l_max",      "sim_step",
      "output"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.count(key)) fail("unknown key '" + key + "'");
  }
  for (const char* key : {"source_upload", "peer_uploads", "file_size"}) {
    if (!doc.contains(key)) fail(std::string("missing key '") + key + "'");
  }

  RunConfig cfg;
  cfg.source_upload = number_field(doc, "source_upload");
  if (cfg.source_upload <= 0.0) fail("source_upload must be positive");
  if (!doc["peer_uploads"].is_array() || doc["peer_uploads"].empty()) {
    fail("peer_uploads must be a non-empty array");
  }
  for (const auto& v : doc["peer_uploads"]) {
    if (!v.is_number() || !(v.get<double>() > 0.0) ||
        !std::isfinite(v.get<double>())) {
      fail("peer_uploads entries must be positive numbers");
    }
    cfg.peer_uploads.push_back(v.get<double>());
  }
  if (cfg.peer_uploads.size() < 2) fail("at least two peers are required");
  cfg.file_size = number_field(doc, "file_size");
  if (cfg.file_size <= 0.0) fail("file_size must be positive");

  if (doc.contains("phi")) {
    cfg.phi = number_field(doc, "phi");
    if (cfg.phi < 0.0 || cfg.phi > 1.0) fail("phi must lie in [0, 1]");
  }
  if (doc.contains("common_data")) {
    cfg.common_data = number_field(doc, "common_data");
    if (cfg.common_data < 0.0) fail("common_data must be non-negative");
    if (cfg.common_data >= cfg.file_size) {
      fail("common_data must be smaller than file_size");
    }
  }
  const int n = static_cast<int>(cfg.peer_uploads.size());
  if (doc.contains("first_set_size")) {
    const int l = int_field(doc, "first_set_size");
    if (l < 1 || l > n) fail("first_set_size out of [1, N]");
    cfg.first_set_size = l;
  }

  const bool any_sweep = doc.contains("phi_start") || doc.contains("phi_stop") ||
                         doc.contains("phi_steps");
  if (any_sweep) {
    SweepSpec sweep;
    for (const char* key : {"phi_start", "phi_stop", "phi_steps"}) {
      if (!doc.contains(key)) fail(std::string("sweep needs key '") + key + "'");
    }
    sweep.phi_start = number_field(doc, "phi_start");
    sweep.phi_stop = number_field(doc, "phi_stop");
    sweep.phi_steps = int_field(doc, "phi_steps");
    if (sweep.phi_steps < 1) fail("phi_steps must be at least 1");
    if (sweep.phi_start < 0.0 || sweep.phi_stop > 1.0 ||
        sweep.phi_start > sweep.phi_stop) {
      fail("phi grid must satisfy 0 <= start <= stop <= 1");
    }
    sweep.l_min = doc.contains("l_min") ? int_field(doc, "l_min") : 1;
    sweep.l_max = doc.contains("l_max") ? int_field(doc, "l_max") : n;
    if (sweep.l_min < 1 || sweep.l_max > n || sweep.l_min > sweep.l_max) {
      fail("L range must satisfy 1 <= l_min <= l_max <= N");
    }
    cfg.sweep = sweep;
  }
  if (doc.contains("sim_step")) {
    const double s = number_field(doc, "sim_step");
    if (!(s > 0.0)) fail("sim_step must be positive");
    cfg.sim_step = s;
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) fail("output must be a string");
    cfg.output = doc["output"].get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string run_sweep(const RunConfig& config) {
  if (!config.sweep) fail("config has no sweep specification");
  const SweepSpec& spec = *config.sweep;
  const PeerSwarm swarm = config.swarm();

  std::ostringstream os;
  os << "phi,L,T_L,regime,multiplicity\n";
  for (int k = 0; k < spec.phi_steps; ++k) {
    const double phi =
        spec.phi_steps == 1
            ? spec.phi_start
            : (k == spec.phi_steps - 1
                   ? spec.phi_stop
                   : spec.phi_start + k * (spec.phi_stop - spec.phi_start) /
                                          (spec.phi_steps - 1));
    const InitialDistribution dist = make_up_distribution(swarm, phi);
    const int mult = phi <= 0.0 ? classic_multiplicity(swarm).m
                                : phi_multiplicity(swarm, dist).m;
    for (int l = spec.l_min; l <= spec.l_max; ++l) {
      const ServiceOutcome out = differentiated_service_time(swarm, dist, l);
      os << format_sig(phi) << "," << l << "," << format_sig(out.t_last) << ","
         << to_string(out.regime) << "," << mult << "\n";
    }
  }
  return os.str();
}

}  // namespace p2pflow
