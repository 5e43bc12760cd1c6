#pragma once

// JSON configuration boundary.  This is the only place dB/dBm units exist;
// everything handed to the library is already linear.  Parsing is strict: an
// unknown key, a missing schema_version or an out-of-range value fails with
// the offending field spelled out, instead of silently running a scenario the
// user did not write.  Comments (// and /* */) are allowed in config files.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "cwpcn/scenario.hpp"
#include "cwpcn/units.hpp"

namespace cwpcn {

class BadConfigError : public std::runtime_error {
 public:
  explicit BadConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ModelChoice { Unset, Underlay, Overlay, Both };

struct RunConfig {
  int schema_version = 0;
  ModelChoice model = ModelChoice::Unset;
  Scenario scenario;
  std::vector<double> sweep_values;
  std::size_t grid_points = 64;  // frontier sweep resolution
  bool has_allocation = false;   // verify input
  Allocation allocation;
};

namespace config_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& field, const std::string& what) {
  throw BadConfigError(field + ": " + what);
}

inline void expect_keys(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) { ok = true; break; }
    if (!ok) fail(where.empty() ? item.key() : where + "." + item.key(),
                  "unexpected field");
  }
}

inline double get_number(const json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(where + key, "must be a number");
  return v.get<double>();
}

}  // namespace config_detail

inline RunConfig parse_config(const std::string& text) {
  using config_detail::expect_keys;
  using config_detail::fail;
  using config_detail::get_number;
  using nlohmann::json;

  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& err) {
    throw BadConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!root.is_object()) fail("config", "top level must be an object");
  expect_keys(root, "",
              {"schema_version", "model", "scenario", "sweep", "grid_points",
               "allocation"});

  RunConfig cfg;
  if (!root.contains("schema_version")) fail("schema_version", "required field is missing");
  if (!root["schema_version"].is_number_integer())
    fail("schema_version", "must be an integer");
  cfg.schema_version = root["schema_version"].get<int>();
  if (cfg.schema_version != 1) fail("schema_version", "unsupported version, expected 1");

  if (root.contains("model")) {
    const auto& m = root["model"];
    if (!m.is_string()) fail("model", "must be a string");
    const std::string s = m.get<std::string>();
    if (s == "underlay") cfg.model = ModelChoice::Underlay;
    else if (s == "overlay") cfg.model = ModelChoice::Overlay;
    else if (s == "both") cfg.model = ModelChoice::Both;
    else fail("model", "must be one of underlay|overlay|both");
  }

  if (root.contains("grid_points")) {
    if (!root["grid_points"].is_number_integer() || root["grid_points"].get<int>() < 2)
      fail("grid_points", "must be an integer >= 2");
    cfg.grid_points = root["grid_points"].get<std::size_t>();
  }

  if (root.contains("sweep")) {
    const auto& sw = root["sweep"];
    if (!sw.is_object()) fail("sweep", "must be an object");
    expect_keys(sw, "sweep", {"values"});
    if (!sw.contains("values") || !sw["values"].is_array())
      fail("sweep.values", "must be an array of numbers");
    for (const auto& v : sw["values"]) {
      if (!v.is_number()) fail("sweep.values", "must be an array of numbers");
      cfg.sweep_values.push_back(v.get<double>());
    }
  }

  cfg.scenario = scenario_case1();
  if (root.contains("scenario")) {
    const auto& sc = root["scenario"];
    if (!sc.is_object()) fail("scenario", "must be an object");
    expect_keys(sc, "scenario",
                {"preset", "pt_pos_m", "pr_pos_m", "ap_pos_m", "cu_pos_m", "alpha",
                 "ref_gain_db", "ref_distance_m", "p_max_w", "p_primary_w",
                 "noise_ap_dbm", "noise_pr_dbm", "eta", "gamma_dbm",
                 "gamma_unconstrained", "r_bar_bits", "fading", "seed", "trials"});

    if (sc.contains("preset")) {
      const std::string p = sc["preset"].is_string() ? sc["preset"].get<std::string>() : "";
      if (p == "case1") cfg.scenario = scenario_case1();
      else if (p == "case2") cfg.scenario = scenario_case2();
      else if (p == "case3") cfg.scenario = scenario_case3();
      else fail("scenario.preset", "must be one of case1|case2|case3");
    }
    Scenario& scn = cfg.scenario;

    if (sc.contains("pt_pos_m")) scn.pt_pos = get_number(sc, "scenario.", "pt_pos_m");
    if (sc.contains("pr_pos_m")) scn.pr_pos = get_number(sc, "scenario.", "pr_pos_m");
    if (sc.contains("ap_pos_m")) scn.ap_pos = get_number(sc, "scenario.", "ap_pos_m");
    if (sc.contains("cu_pos_m")) {
      if (!sc["cu_pos_m"].is_array()) fail("scenario.cu_pos_m", "must be an array");
      scn.cu_pos.clear();
      for (const auto& v : sc["cu_pos_m"]) {
        if (!v.is_number()) fail("scenario.cu_pos_m", "must be an array of numbers");
        scn.cu_pos.push_back(v.get<double>());
      }
    }
    if (sc.contains("alpha")) {
      scn.alpha = get_number(sc, "scenario.", "alpha");
      if (!(scn.alpha > 0.0)) fail("scenario.alpha", "must be > 0");
    }
    if (sc.contains("ref_gain_db"))
      scn.ref_gain = db_to_linear(get_number(sc, "scenario.", "ref_gain_db"));
    if (sc.contains("ref_distance_m")) {
      scn.ref_distance = get_number(sc, "scenario.", "ref_distance_m");
      if (!(scn.ref_distance > 0.0)) fail("scenario.ref_distance_m", "must be > 0");
    }
    if (sc.contains("p_max_w")) {
      scn.p_max = get_number(sc, "scenario.", "p_max_w");
      if (!(scn.p_max > 0.0)) fail("scenario.p_max_w", "must be > 0");
    }
    if (sc.contains("p_primary_w")) {
      scn.p_primary = get_number(sc, "scenario.", "p_primary_w");
      if (!(scn.p_primary >= 0.0)) fail("scenario.p_primary_w", "must be >= 0");
    }
    if (sc.contains("noise_ap_dbm"))
      scn.noise_ap = dbm_to_watts(get_number(sc, "scenario.", "noise_ap_dbm"));
    if (sc.contains("noise_pr_dbm"))
      scn.noise_pr = dbm_to_watts(get_number(sc, "scenario.", "noise_pr_dbm"));
    if (sc.contains("eta")) {
      scn.eta = get_number(sc, "scenario.", "eta");
      if (!(scn.eta >= 0.0 && scn.eta <= 1.0)) fail("scenario.eta", "must lie in [0,1]");
    }
    const bool has_gamma = sc.contains("gamma_dbm");
    const bool has_unc = sc.contains("gamma_unconstrained");
    if (has_gamma && has_unc)
      fail("scenario.gamma_dbm", "conflicts with gamma_unconstrained");
    if (has_gamma)
      scn.gamma = GammaItc::bounded(dbm_to_watts(get_number(sc, "scenario.", "gamma_dbm")));
    if (has_unc) {
      if (!sc["gamma_unconstrained"].is_boolean())
        fail("scenario.gamma_unconstrained", "must be a boolean");
      if (sc["gamma_unconstrained"].get<bool>()) scn.gamma = GammaItc::unbounded();
    }
    if (sc.contains("r_bar_bits")) {
      scn.r_bar = get_number(sc, "scenario.", "r_bar_bits");
      if (!(scn.r_bar >= 0.0)) fail("scenario.r_bar_bits", "must be >= 0");
    }
    if (sc.contains("fading")) {
      const std::string f = sc["fading"].is_string() ? sc["fading"].get<std::string>() : "";
      if (f == "none") scn.fading = Fading::None;
      else if (f == "rayleigh") scn.fading = Fading::Rayleigh;
      else fail("scenario.fading", "must be one of none|rayleigh");
    }
    if (sc.contains("seed")) {
      if (!sc["seed"].is_number_integer() || sc["seed"].get<std::int64_t>() < 0)
        fail("scenario.seed", "must be a non-negative integer");
      scn.seed = sc["seed"].get<std::uint64_t>();
    }
    if (sc.contains("trials")) {
      if (!sc["trials"].is_number_integer() || sc["trials"].get<std::int64_t>() < 1)
        fail("scenario.trials", "must be an integer >= 1");
      scn.trials = sc["trials"].get<std::size_t>();
    }
  }

  if (root.contains("allocation")) {
    const auto& al = root["allocation"];
    if (!al.is_object()) fail("allocation", "must be an object");
    expect_keys(al, "allocation", {"tau", "e"});
    if (!al.contains("tau") || !al["tau"].is_number())
      fail("allocation.tau", "must be a number");
    cfg.allocation.tau = al["tau"].get<double>();
    if (!(cfg.allocation.tau >= 0.0 && cfg.allocation.tau <= 1.0))
      fail("allocation.tau", "must lie in [0,1]");
    if (!al.contains("e") || !al["e"].is_array())
      fail("allocation.e", "must be an array of numbers");
    for (const auto& v : al["e"]) {
      if (!v.is_number()) fail("allocation.e", "must be an array of numbers");
      cfg.allocation.e.push_back(v.get<double>());
    }
    cfg.has_allocation = true;
  }

  try {
    cfg.scenario.validate();
  } catch (const std::invalid_argument& err) {
    throw BadConfigError(std::string("scenario: ") + err.what());
  }
  return cfg;
}

}  // namespace cwpcn
