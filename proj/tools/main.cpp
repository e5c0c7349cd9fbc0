#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "p2pflow/analytic.hpp"
#include "p2pflow/config.hpp"
#include "p2pflow/fluidsim.hpp"
#include "p2pflow/format.hpp"
#include "p2pflow/multiplicity.hpp"
#include "p2pflow/nested.hpp"
#include "p2pflow/planner.hpp"

namespace {

using namespace p2pflow;

// --out "name" lands in $P2PFLOW_OUTPUT_DIR when the name is relative and
// the variable is set; otherwise it is used as given. Empty means stdout.
void emit(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::string path = out;
  const char* dir = std::getenv("P2PFLOW_OUTPUT_DIR");
  if (dir && *dir && out.find('/') == std::string::npos) {
    path = std::string(dir) + "/" + out;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

struct Loaded {
  RunConfig config;
  PeerSwarm swarm;
  InitialDistribution dist;  // reduced to pure unique-proportional
};

Loaded load(const std::string& config_path) {
  RunConfig cfg = load_config(config_path);
  PeerSwarm swarm = cfg.swarm();
  InitialDistribution raw = cfg.distribution();
  auto [reduced_swarm, reduced_dist] = reduce_ucp_to_up(swarm, raw);
  return {std::move(cfg), std::move(reduced_swarm), std::move(reduced_dist)};
}

int cmd_analyze(const std::string& config_path, const std::string& out) {
  Loaded in = load(config_path);
  const DerivedQuantities d = derive_quantities(in.swarm, in.dist);
  const int mult = in.dist.phi <= 0.0
                       ? classic_multiplicity(in.swarm).m
                       : phi_multiplicity(in.swarm, in.dist).m;
  ServiceOutcome outcome =
      in.config.first_set_size
          ? differentiated_service_time(in.swarm, in.dist,
                                        *in.config.first_set_size)
          : equal_service_time(in.swarm, in.dist);
  std::ostringstream os;
  os << "N " << in.swarm.size() << "\n"
     << "U " << format_sig(d.total_peer_upload) << "\n"
     << "phi " << format_sig(in.dist.phi) << "\n"
     << "phi0 " << format_sig(d.phi_zero) << "\n"
     << "t0 " << format_sig(d.bottleneck_time) << "\n"
     << "ta " << format_sig(d.exchange_time) << "\n"
     << "L " << outcome.first_set_size << "\n"
     << "T_L " << format_sig(outcome.t_last) << "\n"
     << "regime " << to_string(outcome.regime) << "\n"
     << "multiplicity " << mult << "\n";
  emit(out, os.str());
  return 0;
}

int cmd_multiplicity(const std::string& config_path, const std::string& out) {
  Loaded in = load(config_path);
  const MultiplicityResult classic = classic_multiplicity(in.swarm);
  std::ostringstream os;
  os << "classic " << classic.m << " rule " << to_string(classic.rule_used)
     << "\n";
  const MultiplicityResult phi = phi_multiplicity(in.swarm, in.dist);
  os << "phi_multiplicity " << phi.m << " rule " << to_string(phi.rule_used);
  if (phi.l_prime) os << " l_prime " << *phi.l_prime;
  os << "\n";
  emit(out, os.str());
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out) {
  Loaded in = load(config_path);
  emit(out, run_sweep(in.config));
  return 0;
}

int cmd_plan(const std::string& config_path, const std::string& out) {
  Loaded in = load(config_path);
  const FlowPlan plan =
      in.config.first_set_size
          ? plan_differentiated(in.swarm, in.dist, *in.config.first_set_size)
          : plan_equal_service(in.swarm, in.dist);
  std::ostringstream os;
  write_plan(os, plan);
  emit(out, os.str());
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& plan_path,
                 const std::string& out) {
  Loaded in = load(config_path);
  std::ifstream pf(plan_path);
  if (!pf) throw std::runtime_error("cannot open plan '" + plan_path + "'");
  const FlowPlan plan = read_plan(pf);
  const double step =
      in.config.sim_step.value_or(std::max(plan.horizon, 1e-12) / 1e4);
  const SimResult sim = simulate(in.swarm, in.dist, plan, step);
  std::ostringstream os;
  write_sim_csv(os, sim);
  emit(out, os.str());
  return 0;
}

int cmd_nested(const std::string& config_path, const std::string& tiers_arg,
               const std::string& out) {
  Loaded in = load(config_path);
  std::vector<int> tiers;
  std::stringstream ts(tiers_arg);
  std::string tok;
  while (std::getline(ts, tok, ',')) {
    tiers.push_back(std::stoi(tok));
  }
  const TierSchedule schedule = schedule_nested(
      in.swarm, in.dist, tiers, in.config.sim_step);
  emit(out, tier_csv(schedule));
  return 0;
}

int cmd_validate(const std::string& config_path, const std::string& out) {
  RunConfig cfg = load_config(config_path);
  const ValidationReport report =
      validate_distribution(cfg.swarm(), cfg.distribution());
  std::ostringstream os;
  for (const auto& c : report.checks) {
    os << c.name << " " << (c.pass ? "pass" : "FAIL");
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  emit(out, os.str());
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upload-constrained P2P distribution: finish-time analysis, "
               "flow planning and simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string plan_path;
  std::string tiers;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (JSON)")->required();
    sub->add_option("--out", out, "output file (default: stdout)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "finish time for one instance");
  add_common(analyze);
  CLI::App* multiplicity = app.add_subcommand("multiplicity", "multiplicity rules");
  add_common(multiplicity);
  CLI::App* sweep = app.add_subcommand("sweep", "phi x L sweep as CSV");
  add_common(sweep);
  CLI::App* plan = app.add_subcommand("plan", "emit a bandwidth allocation plan");
  add_common(plan);
  CLI::App* simulate = app.add_subcommand("simulate", "execute a plan in fluid time");
  add_common(simulate);
  simulate->add_option("--plan", plan_path, "plan file")->required();
  CLI::App* nested = app.add_subcommand("nested", "chain tiers of service");
  add_common(nested);
  nested->add_option("--tiers", tiers, "comma-separated tier sizes")->required();
  CLI::App* validate = app.add_subcommand("validate", "check the distribution");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(config_path, out);
    if (app.got_subcommand(multiplicity)) return cmd_multiplicity(config_path, out);
    if (app.got_subcommand(sweep)) return cmd_sweep(config_path, out);
    if (app.got_subcommand(plan)) return cmd_plan(config_path, out);
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(config_path, plan_path, out);
    }
    if (app.got_subcommand(nested)) return cmd_nested(config_path, tiers, out);
    if (app.got_subcommand(validate)) return cmd_validate(config_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
