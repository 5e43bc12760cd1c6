// Command line front end.
//
// Exit codes: 0 success, 2 bad configuration, 3 infeasible operating point,
// 4 I/O failure.  Result files are written atomically; single-record outputs
// go to stdout unless --out is given.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwpcn/config.hpp"
#include "cwpcn/io.hpp"
#include "cwpcn/monte_carlo.hpp"
#include "cwpcn/oracle.hpp"
#include "cwpcn/overlay.hpp"
#include "cwpcn/rate_region.hpp"
#include "cwpcn/scenario.hpp"
#include "cwpcn/underlay.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string format = "csv";
  std::int64_t seed = -1;
  std::int64_t trials = -1;
  std::int64_t grid_points = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_format = true) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--preset", args.preset, "built-in scenario: case1|case2|case3");
  cmd->add_option("--out", args.out_path, "output path");
  if (with_format)
    cmd->add_option("--format", args.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", args.seed, "override scenario seed");
  cmd->add_option("--trials", args.trials, "override trial count");
  cmd->add_option("--grid-points", args.grid_points, "override sweep resolution");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cwpcn::IoError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cwpcn::RunConfig load(const CommonArgs& args) {
  cwpcn::RunConfig cfg;
  if (!args.config_path.empty()) {
    cfg = cwpcn::parse_config(slurp(args.config_path));
  } else if (!args.preset.empty()) {
    cfg.schema_version = 1;
    if (args.preset == "case1") cfg.scenario = cwpcn::scenario_case1();
    else if (args.preset == "case2") cfg.scenario = cwpcn::scenario_case2();
    else if (args.preset == "case3") cfg.scenario = cwpcn::scenario_case3();
    else throw cwpcn::BadConfigError("preset: must be one of case1|case2|case3");
  } else {
    throw cwpcn::BadConfigError("either --config or --preset is required");
  }
  if (args.seed >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(args.seed);
  if (args.trials >= 0) {
    if (args.trials < 1) throw cwpcn::BadConfigError("trials: must be >= 1");
    cfg.scenario.trials = static_cast<std::size_t>(args.trials);
  }
  if (args.grid_points >= 0) {
    if (args.grid_points < 2) throw cwpcn::BadConfigError("grid-points: must be >= 2");
    cfg.grid_points = static_cast<std::size_t>(args.grid_points);
  }
  return cfg;
}

void emit(const std::string& out_path, const std::string& default_name,
          const std::string& content) {
  if (!out_path.empty()) {
    cwpcn::atomic_write_file(out_path, content);
  } else if (!default_name.empty()) {
    cwpcn::atomic_write_file(cwpcn::default_output_dir() + "/" + default_name, content);
  } else {
    std::cout << content;
  }
}

json solve_record(const char* model, const cwpcn::SolveResult& sr, bool with_gamma0) {
  json rec;
  rec["schema_version"] = 1;
  rec["model"] = model;
  rec["tau"] = sr.tau;
  rec["e"] = sr.e;
  rec["throughput"] = sr.throughput;
  rec["primary_rate"] = sr.primary_rate;
  rec["p_c"] = sr.p_c;
  if (with_gamma0) rec["gamma0"] = sr.gamma0;
  return rec;
}

int cmd_solve(const CommonArgs& args, bool overlay) {
  const cwpcn::RunConfig cfg = load(args);
  const cwpcn::NetworkInstance inst = cwpcn::build_instance(cfg.scenario);
  cwpcn::SolveResult sr;
  if (overlay) {
    sr = cwpcn::solve_p2(inst, cfg.scenario.r_bar);
  } else {
    sr = cwpcn::solve_p1(inst, cfg.scenario.gamma);
  }
  emit(args.out_path, "", solve_record(overlay ? "overlay" : "underlay", sr, overlay).dump(2) + "\n");
  return kExitOk;
}

std::string sibling_name(const std::string& base, const char* tag) {
  const auto dot = base.find_last_of('.');
  if (dot == std::string::npos || base.find('/', dot) != std::string::npos)
    return base + "_" + tag;
  return base.substr(0, dot) + "_" + tag + base.substr(dot);
}

json frontier_json(const char* model, const cwpcn::RateRegionFrontier& fr) {
  json rec;
  rec["schema_version"] = 1;
  rec["model"] = model;
  rec["points"] = json::array();
  for (const auto& pt : fr.points) {
    rec["points"].push_back(
        {{"param", pt.param}, {"r_primary", pt.r_primary}, {"r_secondary", pt.r_secondary}});
  }
  return rec;
}

int cmd_region(const CommonArgs& args) {
  const cwpcn::RunConfig cfg = load(args);
  const cwpcn::NetworkInstance inst = cwpcn::build_instance(cfg.scenario);
  const cwpcn::ModelChoice model =
      cfg.model == cwpcn::ModelChoice::Unset ? cwpcn::ModelChoice::Both : cfg.model;
  const bool json_fmt = args.format == "json";
  const char* ext = json_fmt ? "json" : "csv";

  auto run_one = [&](bool overlay) -> std::string {
    cwpcn::RateRegionFrontier fr =
        overlay ? cwpcn::frontier_overlay(inst, cwpcn::default_rbar_grid(inst, cfg.grid_points))
                : cwpcn::frontier_underlay(inst, cwpcn::default_gamma_grid(inst, cfg.grid_points));
    return json_fmt ? frontier_json(overlay ? "overlay" : "underlay", fr).dump(2) + "\n"
                    : cwpcn::to_csv(fr);
  };

  if (model == cwpcn::ModelChoice::Both) {
    const std::string base = args.out_path.empty()
                                 ? cwpcn::default_output_dir() + "/region." + ext
                                 : args.out_path;
    cwpcn::atomic_write_file(sibling_name(base, "underlay"), run_one(false));
    cwpcn::atomic_write_file(sibling_name(base, "overlay"), run_one(true));
    return kExitOk;
  }
  const bool overlay = model == cwpcn::ModelChoice::Overlay;
  emit(args.out_path,
       std::string("region_") + (overlay ? "overlay" : "underlay") + "." + ext,
       run_one(overlay));
  return kExitOk;
}

cwpcn::ShareModel require_model(const cwpcn::RunConfig& cfg) {
  if (cfg.model == cwpcn::ModelChoice::Underlay) return cwpcn::ShareModel::Underlay;
  if (cfg.model == cwpcn::ModelChoice::Overlay) return cwpcn::ShareModel::Overlay;
  throw cwpcn::BadConfigError("model: must be underlay or overlay for this command");
}

std::string mc_csv_header() { return "param,model,mean,std_error,trials,infeasible\n"; }

std::string mc_csv_row(double param, const char* model, const cwpcn::MonteCarloResult& r) {
  std::string row = cwpcn::fmt_double(param);
  row += ',';
  row += model;
  row += ',';
  row += cwpcn::fmt_double(r.mean);
  row += ',';
  row += cwpcn::fmt_double(r.std_error);
  row += ',';
  row += std::to_string(r.trials);
  row += ',';
  row += std::to_string(r.infeasible);
  row += '\n';
  return row;
}

json mc_json_row(double param, const char* model, const cwpcn::MonteCarloResult& r) {
  return {{"param", param},     {"model", model},
          {"mean", r.mean},     {"std_error", r.std_error},
          {"trials", r.trials}, {"infeasible", r.infeasible}};
}

int cmd_montecarlo(const CommonArgs& args) {
  const cwpcn::RunConfig cfg = load(args);
  const cwpcn::ShareModel model = require_model(cfg);
  const char* name = model == cwpcn::ShareModel::Overlay ? "overlay" : "underlay";
  const cwpcn::MonteCarloResult r = cwpcn::monte_carlo_throughput(cfg.scenario, model);
  const double param = model == cwpcn::ShareModel::Overlay
                           ? cfg.scenario.r_bar
                           : (cfg.scenario.gamma.unconstrained
                                  ? std::numeric_limits<double>::infinity()
                                  : cfg.scenario.gamma.gamma);
  std::string content;
  if (args.format == "json") {
    json rec;
    rec["schema_version"] = 1;
    rec["results"] = json::array({mc_json_row(param, name, r)});
    content = rec.dump(2) + "\n";
  } else {
    content = mc_csv_header() + mc_csv_row(param, name, r);
  }
  emit(args.out_path, std::string("montecarlo.") + (args.format == "json" ? "json" : "csv"),
       content);
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args, bool sweep_alpha) {
  const cwpcn::RunConfig cfg = load(args);
  const cwpcn::ShareModel model = require_model(cfg);
  const char* name = model == cwpcn::ShareModel::Overlay ? "overlay" : "underlay";
  if (cfg.sweep_values.empty())
    throw cwpcn::BadConfigError("sweep.values: required for sweep commands");

  std::string csv = mc_csv_header();
  json rows = json::array();
  for (double v : cfg.sweep_values) {
    cwpcn::Scenario scn = cfg.scenario;
    if (sweep_alpha) {
      if (!(v > 0.0)) throw cwpcn::BadConfigError("sweep.values: alpha must be > 0");
      scn.alpha = v;
    } else {
      if (!(v > 0.0)) throw cwpcn::BadConfigError("sweep.values: p_max must be > 0");
      scn.p_max = v;
    }
    const cwpcn::MonteCarloResult r = cwpcn::monte_carlo_throughput(scn, model);
    csv += mc_csv_row(v, name, r);
    rows.push_back(mc_json_row(v, name, r));
  }
  std::string content;
  if (args.format == "json") {
    json rec;
    rec["schema_version"] = 1;
    rec["results"] = rows;
    content = rec.dump(2) + "\n";
  } else {
    content = csv;
  }
  const std::string def = std::string(sweep_alpha ? "sweep_alpha." : "sweep_pmax.") +
                          (args.format == "json" ? "json" : "csv");
  emit(args.out_path, def, content);
  return kExitOk;
}

int cmd_verify(const CommonArgs& args) {
  const cwpcn::RunConfig cfg = load(args);
  if (!cfg.has_allocation)
    throw cwpcn::BadConfigError("allocation: required for verify");
  const cwpcn::ShareModel model = require_model(cfg);
  const cwpcn::NetworkInstance inst = cwpcn::build_instance(cfg.scenario);
  if (cfg.allocation.e.size() != inst.k)
    throw cwpcn::BadConfigError("allocation.e: must have one entry per CU");

  const double tau = cfg.allocation.tau;
  const std::vector<double>& e = cfg.allocation.e;
  std::vector<std::string> violations;
  const double tol = 1e-9;

  cwpcn::UnderlayProblem prob;
  prob.inst = inst;
  prob.slopes = model == cwpcn::ShareModel::Overlay
                    ? cwpcn::effective_gains(inst).gamma_hat
                    : cwpcn::effective_gains(inst).gamma;
  const double p_c = model == cwpcn::ShareModel::Overlay
                         ? inst.p_max
                         : cwpcn::underlay_ap_power(inst, cfg.scenario.gamma);
  prob.q = cwpcn::harvested_power(inst, p_c);
  prob.gamma = model == cwpcn::ShareModel::Overlay
                   ? cwpcn::GammaItc::unbounded()
                   : cfg.scenario.gamma;

  for (std::size_t i = 0; i < inst.k; ++i) {
    if (e[i] < -tol) violations.push_back("e[" + std::to_string(i) + "] negative");
    const double cap = tau * prob.q[i];
    if (e[i] > cap * (1.0 + tol) + tol * 1e-300)
      violations.push_back("e[" + std::to_string(i) + "] exceeds harvested energy");
  }
  double itc = 0.0;
  for (std::size_t i = 0; i < inst.k; ++i) itc += inst.h_cu_pr[i] * e[i];

  double throughput, primary;
  if (model == cwpcn::ShareModel::Overlay) {
    throughput = cwpcn::secondary_throughput(tau, e, prob.slopes);
    primary = cwpcn::primary_rate_overlay(inst, tau, e);
    if (primary < cfg.scenario.r_bar - tol)
      violations.push_back("primary rate falls below r_bar");
  } else {
    throughput = cwpcn::secondary_throughput(tau, e, prob.slopes);
    primary = cwpcn::primary_rate_underlay(inst, tau, e, p_c);
    if (!cfg.scenario.gamma.unconstrained) {
      const double budget = (1.0 - tau) * cfg.scenario.gamma.gamma;
      if (itc > budget + tol * std::max(1.0, budget))
        violations.push_back("aggregate interference exceeds the cap");
    }
  }

  json rec;
  rec["schema_version"] = 1;
  rec["model"] = model == cwpcn::ShareModel::Overlay ? "overlay" : "underlay";
  rec["feasible"] = violations.empty();
  rec["violations"] = violations;
  rec["throughput"] = throughput;
  rec["primary_rate"] = primary;
  if (model == cwpcn::ShareModel::Underlay && tau > 0.0 && tau < 1.0) {
    rec["kkt_max_residual"] = cwpcn::verify_kkt(prob, tau, e).max_residual;
  }
  emit(args.out_path, "", rec.dump(2) + "\n");
  return violations.empty() ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cognitive wireless-powered network design tool"};
  app.require_subcommand(1);

  CommonArgs a_su, a_so, a_rg, a_mc, a_sp, a_sa, a_vf;
  CLI::App* su = app.add_subcommand("solve-underlay", "best design under an interference cap");
  add_common(su, a_su, false);
  CLI::App* so = app.add_subcommand("solve-overlay", "best design under a primary rate floor");
  add_common(so, a_so, false);
  CLI::App* rg = app.add_subcommand("region", "achievable rate-region frontier sweep");
  add_common(rg, a_rg);
  CLI::App* mc = app.add_subcommand("montecarlo", "fading average of the optimal throughput");
  add_common(mc, a_mc);
  CLI::App* sp = app.add_subcommand("sweep-pmax", "Monte Carlo sweep over the H-AP power cap");
  add_common(sp, a_sp);
  CLI::App* sa = app.add_subcommand("sweep-alpha", "Monte Carlo sweep over the pathloss exponent");
  add_common(sa, a_sa);
  CLI::App* vf = app.add_subcommand("verify", "feasibility/optimality report for an allocation");
  add_common(vf, a_vf, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (su->parsed()) return cmd_solve(a_su, false);
    if (so->parsed()) return cmd_solve(a_so, true);
    if (rg->parsed()) return cmd_region(a_rg);
    if (mc->parsed()) return cmd_montecarlo(a_mc);
    if (sp->parsed()) return cmd_sweep(a_sp, false);
    if (sa->parsed()) return cmd_sweep(a_sa, true);
    if (vf->parsed()) return cmd_verify(a_vf);
  } catch (const cwpcn::BadConfigError& err) {
    std::cerr << "error [bad-config]: " << err.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error [bad-config]: " << err.what() << "\n";
    return kExitBadConfig;
  } catch (const cwpcn::InfeasibleError& err) {
    std::cerr << "error [infeasible]: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const cwpcn::IoError& err) {
    std::cerr << "error [io-error]: " << err.what() << "\n";
    return kExitIo;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return kExitOk;
}
