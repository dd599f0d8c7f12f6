// netrisk command-line front end.

#include "netrisk/benson.hpp"
#include "netrisk/clearing.hpp"
#include "netrisk/errors.hpp"
#include "netrisk/io.hpp"
#include "netrisk/milp/lp_format.hpp"
#include "netrisk/scalarize.hpp"
#include "netrisk/scenarios.hpp"
#include "netrisk/sweep.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using netrisk::Error;
using netrisk::ErrorKind;
using netrisk::io::json;

namespace {

enum ExitCode { kOk = 0, kInfeasible = 2, kSolverFailure = 3, kConfigError = 4 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InfeasibleSpec:
    case ErrorKind::UpperBoundNotMember:
      return kInfeasible;
    case ErrorKind::SolverFailure:
    case ErrorKind::NoConvergence:
    case ErrorKind::UnboundedVariable:
      return kSolverFailure;
    default:
      return kConfigError;
  }
}

int report(const std::string& kind, const std::string& message, int code) {
  json err{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string output;
};

struct InputFlags {
  std::string network;
  std::string scenarios;
  std::string group_sizes;
  std::string assignment;
};

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  const netrisk::Vector v = netrisk::io::parse_vector(text);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != std::floor(v(i))) throw Error(ErrorKind::Parse, "expected integers: " + text);
    out.push_back(static_cast<int>(v(i)));
  }
  return out;
}

json load_config(const Globals& g) {
  if (g.config.empty()) return json::object();
  return json::parse(netrisk::io::read_file(g.config));
}

fs::path config_dir(const Globals& g) {
  return g.config.empty() ? fs::path(".") : fs::path(g.config).parent_path();
}

netrisk::RunConfig run_config(const Globals& g) {
  netrisk::RunConfig cfg = netrisk::run_config_from_json(load_config(g), config_dir(g));
  if (g.seed && cfg.generator) cfg.generator->seed = *g.seed;
  if (!g.output.empty()) cfg.output_dir = g.output;
  return cfg;
}

/// Generator config from --config: either a bare generator object or a run
/// config with a "generator" member.
netrisk::GeneratorConfig generator_config(const Globals& g) {
  const json j = load_config(g);
  if (j.empty()) throw Error(ErrorKind::InvalidConfig, "--config with a generator section is required");
  netrisk::GeneratorConfig cfg = netrisk::io::generator_from_json(j.contains("generator") ? j.at("generator") : j);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

netrisk::Inputs load_inputs(const Globals& g, const InputFlags& f) {
  netrisk::RunConfig cfg = g.config.empty() ? netrisk::RunConfig{} : run_config(g);
  if (!f.network.empty()) cfg.network_path = f.network;
  if (!f.scenarios.empty()) cfg.scenarios_path = f.scenarios;
  if (!f.group_sizes.empty()) cfg.grouping = netrisk::Grouping::from_sizes(parse_ints(f.group_sizes));
  if (!f.assignment.empty()) {
    auto a = parse_ints(f.assignment);
    for (int& v : a) --v;
    cfg.grouping = netrisk::Grouping::from_assignment(std::move(a));
  }
  if (!cfg.network_path && !cfg.generator) throw Error(ErrorKind::InvalidConfig, "--network is required");
  if (!cfg.scenarios_path && !cfg.generator) throw Error(ErrorKind::InvalidConfig, "--scenarios is required");
  cfg.sweep.reset();
  return netrisk::materialize(cfg, std::nullopt);
}

void add_inputs(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--network", f.network, "Network JSON");
  cmd->add_option("--scenarios", f.scenarios, "Scenario CSV (q,x1,...,xn)");
  cmd->add_option("--group-sizes", f.group_sizes, "Consecutive group sizes, e.g. 3,3");
  cmd->add_option("--assignment", f.assignment, "Group of each node (1-based), e.g. 1,1,2,2");
}

/// Writes to <output>/<name> when --output is set, else to stdout.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
  } else {
    netrisk::io::write_file(fs::path(g.output) / name, text);
  }
}

netrisk::Vector capital_or_zero(const std::string& text, int groups) {
  if (text.empty()) return netrisk::Vector::Zero(groups);
  netrisk::Vector z = netrisk::io::parse_vector(text);
  if (z.size() != groups) throw Error(ErrorKind::DimensionMismatch, "capital vector needs one entry per group");
  return z;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clearing vectors and systemic risk sets of interbank networks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Generator seed (overrides the config)");
  app.add_option("--config", g.config, "Configuration JSON");
  app.add_option("--output", g.output, "Output directory");

  // generate-network
  auto* gen_net = app.add_subcommand("generate-network", "Random network from a generator config");

  // generate-scenarios
  auto* gen_scen = app.add_subcommand("generate-scenarios", "Random cash-flow scenarios from a generator config");
  int count = 0;
  gen_scen->add_option("-K,--count", count, "Scenario count (default: scenario_count in the config)");

  // clear
  auto* clear_cmd = app.add_subcommand("clear", "Clearing vector for each cash-flow row");
  std::string network_path, cash_flow_path;
  clear_cmd->add_option("--network", network_path, "Network JSON")->required();
  clear_cmd->add_option("--cash-flow", cash_flow_path, "Cash-flow CSV (x1,...,xn)")->required();

  // aggregate
  auto* agg_cmd = app.add_subcommand("aggregate", "Expected aggregate payment at a capital vector");
  InputFlags agg_in;
  add_inputs(agg_cmd, agg_in);
  std::string agg_z;
  std::optional<double> agg_gamma_p;
  agg_cmd->add_option("--z", agg_z, "Group capital vector (default 0)");
  agg_cmd->add_option("--gamma-p", agg_gamma_p, "Threshold fraction; reports membership");

  // scalarize
  auto* sc_cmd = app.add_subcommand("scalarize", "Solve one weighted-sum or minimum-step problem");
  InputFlags sc_in;
  add_inputs(sc_cmd, sc_in);
  std::string kind = "z1", anchor, export_path;
  int group = 1;
  std::optional<double> sc_gamma_p;
  sc_cmd->add_option("--kind", kind, "z1 or z2")->check(CLI::IsMember({"z1", "z2"}));
  auto* group_opt = sc_cmd->add_option("--group", group, "Group index (1-based) for z1");
  auto* anchor_opt = sc_cmd->add_option("--anchor", anchor, "Anchor point v1,...,vG for z2");
  group_opt->excludes(anchor_opt);
  sc_cmd->add_option("--gamma-p", sc_gamma_p, "Threshold fraction of total obligations");
  sc_cmd->add_option("--export-lp", export_path, "Also write the model in LP format");

  // approximate
  auto* ap_cmd = app.add_subcommand("approximate", "Inner and outer approximation of the risk set");
  InputFlags ap_in;
  add_inputs(ap_cmd, ap_in);
  std::optional<double> ap_eps, ap_gamma_p;
  std::string ap_zub;
  bool ap_batch = false;
  ap_cmd->add_option("--epsilon", ap_eps, "Approximation tolerance");
  ap_cmd->add_option("--gamma-p", ap_gamma_p, "Threshold fraction of total obligations");
  ap_cmd->add_option("--z-ub", ap_zub, "Upper-bound point: auto or v1,...,vG");
  ap_cmd->add_flag("--batch", ap_batch, "Solve all eligible corners of a round in parallel");

  // export-lp
  auto* lp_cmd = app.add_subcommand("export-lp", "Write a clearing or scalarization model in LP format");
  InputFlags lp_in;
  add_inputs(lp_cmd, lp_in);
  std::string lp_cash, lp_kind, lp_anchor, lp_file;
  int lp_group = 1;
  std::optional<double> lp_gamma_p;
  lp_cmd->add_option("--cash-flow", lp_cash, "Cash-flow CSV; exports the clearing model of its first row");
  lp_cmd->add_option("--kind", lp_kind, "z1 or z2; exports a scalarization model")
      ->check(CLI::IsMember({"z1", "z2"}));
  lp_cmd->add_option("--group", lp_group, "Group index (1-based) for z1");
  lp_cmd->add_option("--anchor", lp_anchor, "Anchor point for z2");
  lp_cmd->add_option("--gamma-p", lp_gamma_p, "Threshold fraction");
  lp_cmd->add_option("--file", lp_file, "Output path (default: stdout or <output>/model.lp)");

  // sweep
  auto* sw_cmd = app.add_subcommand("sweep", "Sensitivity study over one parameter (needs --config)");
  int jobs = 1;
  sw_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("CommandLine", e.what(), kConfigError);
  }

  try {
    if (*gen_net) {
      const auto cfg = generator_config(g);
      emit(g, "network.json", netrisk::io::network_to_json(netrisk::generate_network(cfg)).dump(2) + "\n");
    } else if (*gen_scen) {
      const auto cfg = generator_config(g);
      int k = count;
      if (k <= 0) k = load_config(g).value("scenario_count", 0);
      if (k <= 0) throw Error(ErrorKind::InvalidConfig, "scenario count missing (--count)");
      emit(g, "scenarios.csv", netrisk::io::scenarios_to_csv(netrisk::generate_scenarios(cfg, k)));
    } else if (*clear_cmd) {
      const auto net = netrisk::io::load_network(network_path);
      const netrisk::Matrix x = netrisk::io::cash_flows_from_csv(netrisk::io::read_file(cash_flow_path));
      json out = json::array();
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        out.push_back(netrisk::io::clearing_to_json(netrisk::clear(net, x.row(r).transpose())));
      }
      emit(g, "clearing.json", out.dump(2) + "\n");
    } else if (*agg_cmd) {
      const auto in = load_inputs(g, agg_in);
      const netrisk::Vector z = capital_or_zero(agg_z, in.grouping.groups());
      const double value = netrisk::expected_aggregate(in.net, in.scenarios, in.grouping, z);
      json out{{"z", netrisk::io::to_json(z)}};
      if (std::isfinite(value)) {
        out["expected_aggregate"] = value;
      } else {
        out["expected_aggregate"] = nullptr;
        out["defined"] = false;
      }
      if (agg_gamma_p) {
        const double gamma = *agg_gamma_p * in.net.total_obligations();
        out["gamma"] = gamma;
        out["member"] = value >= gamma - netrisk::kMembershipTol;
      }
      emit(g, "aggregate.json", out.dump(2) + "\n");
    } else if (*sc_cmd) {
      const auto in = load_inputs(g, sc_in);
      netrisk::RiskSpec spec = in.spec;
      if (sc_gamma_p) spec.gamma_p = *sc_gamma_p;
      spec.validate();
      const auto prob = kind == "z1"
                            ? netrisk::build_z1(in.net, in.scenarios, in.grouping, spec, group - 1)
                            : netrisk::build_z2(in.net, in.scenarios, in.grouping, spec,
                                                capital_or_zero(anchor, in.grouping.groups()));
      if (!export_path.empty()) netrisk::io::write_file(export_path, netrisk::milp::export_lp(prob.model));
      const auto res = netrisk::solve_scalarization(prob);
      emit(g, "scalarization.json", netrisk::io::scalarization_to_json(prob, res).dump(2) + "\n");
      if (res.status == netrisk::milp::Status::Infeasible) {
        return report("InfeasibleSpec", "no capital vector reaches the threshold", kInfeasible);
      }
      if (!res.optimal()) return report("SolverFailure", "solver stopped at a limit", kSolverFailure);
    } else if (*ap_cmd) {
      const auto in = load_inputs(g, ap_in);
      netrisk::RiskSpec spec = in.spec;
      if (ap_eps) spec.epsilon = *ap_eps;
      if (ap_gamma_p) spec.gamma_p = *ap_gamma_p;
      if (!ap_zub.empty()) spec.z_ub = netrisk::io::parse_z_ub(ap_zub);
      netrisk::ApproximateOptions opts;
      opts.batch = ap_batch;
      const auto pair = netrisk::approximate(in.net, in.scenarios, in.grouping, spec, opts);
      const fs::path dir = g.output.empty() ? fs::path(".") : fs::path(g.output);
      netrisk::io::write_file(dir / "corners.csv", netrisk::io::corners_csv(pair));
      netrisk::io::write_file(dir / "metadata.json", netrisk::io::run_metadata(pair).dump(2) + "\n");
      if (in.grouping.groups() == 2) netrisk::io::write_file(dir / "polyline.csv", netrisk::io::polyline_csv(pair));
      std::cout << json{{"inner_count", pair.inner_points.size()},
                        {"outer_count", pair.outer.corners.size()},
                        {"z2_count", pair.z2_count},
                        {"certified", pair.certified},
                        {"output", dir.string()}}
                       .dump()
                << '\n';
    } else if (*lp_cmd) {
      std::string text;
      if (!lp_kind.empty()) {
        const auto in = load_inputs(g, lp_in);
        netrisk::RiskSpec spec = in.spec;
        if (lp_gamma_p) spec.gamma_p = *lp_gamma_p;
        const auto prob = lp_kind == "z1"
                              ? netrisk::build_z1(in.net, in.scenarios, in.grouping, spec, lp_group - 1)
                              : netrisk::build_z2(in.net, in.scenarios, in.grouping, spec,
                                                  capital_or_zero(lp_anchor, in.grouping.groups()));
        text = netrisk::milp::export_lp(prob.model);
      } else {
        if (lp_in.network.empty() || lp_cash.empty()) {
          throw Error(ErrorKind::InvalidConfig, "export-lp needs --kind, or --network with --cash-flow");
        }
        const auto net = netrisk::io::load_network(lp_in.network);
        const netrisk::Matrix x = netrisk::io::cash_flows_from_csv(netrisk::io::read_file(lp_cash));
        const netrisk::Vector row = x.row(0).transpose();
        const auto model = net.variant().is_rv() ? netrisk::build_clearing_milp_rv(net, row, {})
                                                 : netrisk::build_clearing_milp_en(net, row, {});
        text = netrisk::milp::export_lp(model);
      }
      if (!lp_file.empty()) {
        netrisk::io::write_file(lp_file, text);
      } else {
        emit(g, "model.lp", text);
      }
    } else if (*sw_cmd) {
      if (g.config.empty()) throw Error(ErrorKind::InvalidConfig, "sweep requires --config");
      const auto cfg = run_config(g);
      const auto rows = netrisk::run(cfg, jobs);
      std::cout << json{{"runs", rows.size()}, {"output", cfg.output_dir.string()}}.dump() << '\n';
    }
  } catch (const Error& e) {
    return report(std::string(netrisk::to_string(e.kind())), e.what(), exit_code_for(e.kind()));
  } catch (const json::exception& e) {
    return report("Parse", e.what(), kConfigError);
  } catch (const fs::filesystem_error& e) {
    return report("InvalidConfig", e.what(), kConfigError);
  } catch (const std::exception& e) {
    return report("SolverFailure", e.what(), kSolverFailure);
  }
  return kOk;
}
