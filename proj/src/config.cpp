#include "basket/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace basket {

using nlohmann::json;

EngineConfig::EngineConfig() { scenario.population = sim::Scenario::default_population(); }

sim::TrialConfig EngineConfig::trial_config() const {
  sim::TrialConfig config;
  config.design = design;
  config.analysis = analysis;
  config.utility = utility;
  config.censoring = censoring;
  config.accrual_months = accrual_months;
  return config;
}

void EngineConfig::validate() const {
  if (frame.aberrations.empty() || frame.tumors.empty())
    throw std::invalid_argument("frame must name at least one aberration and one tumor");
  scenario.validate(frame);
  trial_config().validate();
  comparator.validate();
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (u0_grid.empty() || u1_grid.empty())
    throw std::invalid_argument("calibration grids must be nonempty");
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("config: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(where + "." + key, "expected a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(where + "." + key, "expected an integer");
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) fail(where + "." + key, "expected a boolean");
  return obj[key].get<bool>();
}

std::vector<std::string> get_string_list(const json& arr, const std::string& where) {
  if (!arr.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) fail(where, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

ppmx::McmcConfig get_mcmc(const json& obj, const std::string& where,
                          const ppmx::McmcConfig& fallback) {
  check_keys(obj, where, {"sweeps", "burn_in", "thin"});
  ppmx::McmcConfig out = fallback;
  out.iterations = get_int(obj, where, "sweeps", fallback.iterations);
  out.burn_in = get_int(obj, where, "burn_in", fallback.burn_in);
  out.thin = get_int(obj, where, "thin", fallback.thin);
  return out;
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

EngineConfig EngineConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: parse error at line " +
                             std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) throw std::runtime_error("config: top level must be an object");
  check_keys(root, "config",
             {"frame", "population", "scenario", "design", "analysis", "utility", "comparator",
              "simulation", "calibration"});

  EngineConfig config;

  if (root.contains("frame")) {
    const json& f = root["frame"];
    check_keys(f, "frame", {"aberrations", "tumors"});
    if (f.contains("aberrations"))
      config.frame.aberrations = get_string_list(f["aberrations"], "frame.aberrations");
    if (f.contains("tumors")) config.frame.tumors = get_string_list(f["tumors"], "frame.tumors");
  }
  const int q = config.frame.n_aberrations();
  const int nc = config.frame.n_tumors();

  if (root.contains("population")) {
    const json& pop = root["population"];
    if (!pop.is_array() || static_cast<int>(pop.size()) != q)
      fail("population", "expected " + std::to_string(q) + " rows");
    config.scenario.population.resize(q, nc);
    for (int j = 0; j < q; ++j) {
      if (!pop[j].is_array() || static_cast<int>(pop[j].size()) != nc)
        fail("population", "row " + std::to_string(j) + " must have " + std::to_string(nc) +
                               " entries");
      for (int c = 0; c < nc; ++c) {
        if (!pop[j][c].is_number_integer()) fail("population", "entries must be integers");
        config.scenario.population(j, c) = pop[j][c].get<int>();
      }
    }
  } else if (q == 5 && nc == 3) {
    config.scenario.population = sim::Scenario::default_population();
  } else {
    fail("population", "required for a non-default frame");
  }

  if (root.contains("scenario")) {
    const json& s = root["scenario"];
    check_keys(s, "scenario", {"beta0", "sigma", "interactions"});
    config.scenario.beta0 = get_number(s, "scenario", "beta0", 0.0);
    config.scenario.sigma = get_number(s, "scenario", "sigma", 0.2);
    if (s.contains("interactions")) {
      if (!s["interactions"].is_array()) fail("scenario.interactions", "expected an array");
      for (const auto& item : s["interactions"]) {
        check_keys(item, "scenario.interactions[]", {"mutation", "tumor", "coef"});
        if (!item.contains("mutation") || !item.contains("tumor") || !item.contains("coef"))
          fail("scenario.interactions[]", "needs mutation, tumor and coef");
        sim::Interaction inter;
        try {
          inter.pair.aberration =
              config.frame.aberration_index(item["mutation"].get<std::string>());
          inter.pair.tumor = config.frame.tumor_index(item["tumor"].get<std::string>());
        } catch (const std::exception& e) {
          fail("scenario.interactions[]", e.what());
        }
        if (!item["coef"].is_number()) fail("scenario.interactions[].coef", "expected a number");
        inter.coef = item["coef"].get<double>();
        config.scenario.interactions.push_back(inter);
      }
    }
  }

  if (root.contains("design")) {
    const json& d = root["design"];
    check_keys(d, "design",
               {"run_in", "adaptive", "cohort", "p0", "p1", "follow_up_months", "accrual_months"});
    config.design.run_in = get_int(d, "design", "run_in", config.design.run_in);
    config.design.adaptive = get_int(d, "design", "adaptive", config.design.adaptive);
    config.design.cohort = get_int(d, "design", "cohort", config.design.cohort);
    config.design.p0 = get_number(d, "design", "p0", config.design.p0);
    config.design.p1 = get_number(d, "design", "p1", config.design.p1);
    config.design.follow_up_months =
        get_number(d, "design", "follow_up_months", config.design.follow_up_months);
    config.accrual_months = get_number(d, "design", "accrual_months", config.accrual_months);
  }

  if (root.contains("analysis")) {
    const json& a = root["analysis"];
    check_keys(a, "analysis",
               {"mass", "dirichlet_weight", "nix_k", "nix_nu", "interim", "final",
                "superiority_mc", "include_arm_covariate"});
    config.analysis.mass = get_number(a, "analysis", "mass", config.analysis.mass);
    config.analysis.dirichlet_weight =
        get_number(a, "analysis", "dirichlet_weight", config.analysis.dirichlet_weight);
    config.analysis.nix_k = get_number(a, "analysis", "nix_k", config.analysis.nix_k);
    config.analysis.nix_nu = get_number(a, "analysis", "nix_nu", config.analysis.nix_nu);
    if (a.contains("interim"))
      config.analysis.interim_mcmc = get_mcmc(a["interim"], "analysis.interim",
                                              config.analysis.interim_mcmc);
    if (a.contains("final"))
      config.analysis.final_mcmc = get_mcmc(a["final"], "analysis.final",
                                            config.analysis.final_mcmc);
    config.analysis.superiority_mc =
        get_int(a, "analysis", "superiority_mc", config.analysis.superiority_mc);
    config.analysis.include_arm_covariate =
        get_bool(a, "analysis", "include_arm_covariate", config.analysis.include_arm_covariate);
  }

  if (root.contains("utility")) {
    const json& u = root["utility"];
    check_keys(u, "utility", {"u0", "u1", "alpha", "beta", "min_size", "eps0", "eps1"});
    config.utility.u0 = get_number(u, "utility", "u0", config.utility.u0);
    config.utility.u1 = get_number(u, "utility", "u1", config.utility.u1);
    config.utility.alpha = get_number(u, "utility", "alpha", config.utility.alpha);
    config.utility.beta = get_number(u, "utility", "beta", config.utility.beta);
    config.utility.min_size = get_int(u, "utility", "min_size", config.utility.min_size);
    config.utility.eps0 = get_number(u, "utility", "eps0", config.utility.eps0);
    config.utility.eps1 = get_number(u, "utility", "eps1", config.utility.eps1);
  }

  if (root.contains("comparator")) {
    const json& c = root["comparator"];
    check_keys(c, "comparator", {"mu0", "tau2", "b1", "b2"});
    config.comparator.mu0 = get_number(c, "comparator", "mu0", config.comparator.mu0);
    const double tau2 = get_number(c, "comparator", "tau2", 1.0 / config.comparator.lambda);
    if (!(tau2 > 0.0)) fail("comparator.tau2", "must be > 0");
    config.comparator.lambda = 1.0 / tau2;
    config.comparator.shape = get_number(c, "comparator", "b1", config.comparator.shape);
    config.comparator.rate = get_number(c, "comparator", "b2", config.comparator.rate);
  }

  if (root.contains("simulation")) {
    const json& s = root["simulation"];
    check_keys(s, "simulation", {"censoring", "reps"});
    config.censoring = get_bool(s, "simulation", "censoring", config.censoring);
    config.reps = get_int(s, "simulation", "reps", config.reps);
  }

  if (root.contains("calibration")) {
    const json& c = root["calibration"];
    check_keys(c, "calibration", {"u0_grid", "u1_grid", "tie_target", "tpr_target"});
    auto get_grid = [&](const char* key, std::vector<double>& grid) {
      if (!c.contains(key)) return;
      if (!c[key].is_array()) fail(std::string("calibration.") + key, "expected an array");
      grid.clear();
      for (const auto& v : c[key]) {
        if (!v.is_number()) fail(std::string("calibration.") + key, "expected numbers");
        grid.push_back(v.get<double>());
      }
    };
    get_grid("u0_grid", config.u0_grid);
    get_grid("u1_grid", config.u1_grid);
    config.targets.tie = get_number(c, "calibration", "tie_target", config.targets.tie);
    config.targets.tpr = get_number(c, "calibration", "tpr_target", config.targets.tpr);
  }

  try {
    config.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  return config;
}

EngineConfig EngineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string EngineConfig::to_json_text() const {
  json root;
  root["frame"] = {{"aberrations", frame.aberrations}, {"tumors", frame.tumors}};
  json pop = json::array();
  for (int j = 0; j < scenario.population.rows(); ++j) {
    json row = json::array();
    for (int c = 0; c < scenario.population.cols(); ++c) row.push_back(scenario.population(j, c));
    pop.push_back(row);
  }
  root["population"] = pop;
  json inters = json::array();
  for (const auto& inter : scenario.interactions) {
    inters.push_back({{"mutation", frame.aberrations.at(inter.pair.aberration)},
                      {"tumor", frame.tumors.at(inter.pair.tumor)},
                      {"coef", inter.coef}});
  }
  root["scenario"] = {{"beta0", scenario.beta0}, {"sigma", scenario.sigma},
                      {"interactions", inters}};
  root["design"] = {{"run_in", design.run_in},
                    {"adaptive", design.adaptive},
                    {"cohort", design.cohort},
                    {"p0", design.p0},
                    {"p1", design.p1},
                    {"follow_up_months", design.follow_up_months},
                    {"accrual_months", accrual_months}};
  root["analysis"] = {{"mass", analysis.mass},
                      {"dirichlet_weight", analysis.dirichlet_weight},
                      {"nix_k", analysis.nix_k},
                      {"nix_nu", analysis.nix_nu},
                      {"interim",
                       {{"sweeps", analysis.interim_mcmc.iterations},
                        {"burn_in", analysis.interim_mcmc.burn_in},
                        {"thin", analysis.interim_mcmc.thin}}},
                      {"final",
                       {{"sweeps", analysis.final_mcmc.iterations},
                        {"burn_in", analysis.final_mcmc.burn_in},
                        {"thin", analysis.final_mcmc.thin}}},
                      {"superiority_mc", analysis.superiority_mc},
                      {"include_arm_covariate", analysis.include_arm_covariate}};
  root["utility"] = {{"u0", utility.u0},       {"u1", utility.u1},
                     {"alpha", utility.alpha}, {"beta", utility.beta},
                     {"min_size", utility.min_size}, {"eps0", utility.eps0},
                     {"eps1", utility.eps1}};
  root["comparator"] = {{"mu0", comparator.mu0},
                        {"tau2", 1.0 / comparator.lambda},
                        {"b1", comparator.shape},
                        {"b2", comparator.rate}};
  root["simulation"] = {{"censoring", censoring}, {"reps", reps}};
  root["calibration"] = {{"u0_grid", u0_grid},
                         {"u1_grid", u1_grid},
                         {"tie_target", targets.tie},
                         {"tpr_target", targets.tpr}};
  return root.dump(2) + "\n";
}

}  // namespace basket
