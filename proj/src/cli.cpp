#include "basket/cli.hpp"

#include "basket/config.hpp"
#include "basket/dataset.hpp"
#include "basket/manifest.hpp"
#include "basket/outputs.hpp"
#include "basket/parallel.hpp"
#include "basket/roster.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace basket::cli {

namespace {

namespace fs = std::filesystem;

int thread_count(const CommonOptions& options) {
  if (options.threads > 0) return options.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct LoadedConfig {
  EngineConfig config;
  std::string digest;
};

LoadedConfig load_config(const CommonOptions& options) {
  LoadedConfig loaded;
  if (options.config_path.empty()) {
    loaded.config = EngineConfig();
    loaded.digest = fnv1a_digest(loaded.config.to_json_text());
  } else {
    std::ifstream in(options.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + options.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    loaded.config = EngineConfig::from_json_text(text);
    loaded.digest = fnv1a_digest(text);
  }
  if (options.reps) loaded.config.reps = *options.reps;
  if (options.no_censoring) loaded.config.censoring = false;
  loaded.config.validate();
  return loaded;
}

sim::TrialConfig trial_config_for(const LoadedConfig& loaded, const CommonOptions& options) {
  sim::TrialConfig config = loaded.config.trial_config();
  if (options.no_adaptive) config.adaptive = false;
  return config;
}

std::ofstream open_output(const std::string& dir, const std::string& name,
                          std::vector<std::string>& outputs) {
  std::ofstream out(dir + "/" + name);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  outputs.push_back(name);
  return out;
}

int run_guarded(const std::string& what, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int cmd_simulate(const CommonOptions& options) {
  return run_guarded("simulate", [&] {
    const LoadedConfig loaded = load_config(options);
    const sim::TrialConfig trial_config = trial_config_for(loaded, options);
    fs::create_directories(options.out_dir);

    RunManifest manifest;
    manifest.command = "simulate";
    manifest.config_digest = loaded.digest;
    manifest.seed = options.seed;
    manifest.started_at = iso_timestamp_now();

    const auto reps = sim::run_replicates(loaded.config.scenario, trial_config,
                                          loaded.config.frame, options.seed, loaded.config.reps,
                                          thread_count(options));
    const sim::OperatingChars oc = sim::operating_characteristics(reps, loaded.config.frame);

    {
      auto out = open_output(options.out_dir, "replicates.csv", manifest.outputs);
      outputs::write_replicates(out, reps, loaded.config.frame);
    }
    {
      auto out = open_output(options.out_dir, "summary.csv", manifest.outputs);
      outputs::write_summary(out, oc);
    }
    {
      auto out = open_output(options.out_dir, "pr_a.csv", manifest.outputs);
      outputs::write_matrix(out, oc.pr_a, loaded.config.frame);
    }
    {
      auto out = open_output(options.out_dir, "alloc_fractions.csv", manifest.outputs);
      outputs::write_matrix(out, oc.mean_alloc_frac, loaded.config.frame);
    }
    manifest.finished_at = iso_timestamp_now();
    manifest.outputs.push_back("manifest.json");
    write_manifest(options.out_dir, manifest);
  });
}

int cmd_analyze(const CommonOptions& options, const std::string& roster_path) {
  return run_guarded("analyze", [&] {
    const LoadedConfig loaded = load_config(options);
    const EngineConfig& config = loaded.config;
    const std::vector<Patient> patients = read_roster_file(roster_path, config.frame);
    if (patients.empty()) throw std::runtime_error("roster has no patients");
    fs::create_directories(options.out_dir);

    RunManifest manifest;
    manifest.command = "analyze";
    manifest.config_digest = loaded.digest;
    manifest.seed = options.seed;
    manifest.started_at = iso_timestamp_now();

    ppmx::PpmxData data = ppmx::build_dataset(patients, config.frame,
                                              config.analysis.include_arm_covariate);
    if (data.n_with_outcome() == 0) throw std::runtime_error("roster has no recorded outcomes");
    const ppmx::AnalysisModel model = sim::analysis_model(data, config.frame, config.analysis);
    ppmx::McmcConfig mcmc = config.analysis.final_mcmc;
    mcmc.seed = derive_seed(options.seed, 0xa71, 0);
    const ppmx::PosteriorDraws draws = ppmx::mcmc_run(data, model, mcmc);

    std::vector<double> times;
    for (int i = 0; i < data.n(); ++i)
      if (data.has_outcome(i)) times.push_back(data.time(i));
    const predictive::HorizonConfig horizon = predictive::compute_horizon(times);

    const decision::DecisionInputs inputs = decision::decision_inputs(
        draws, patients, config.frame, horizon, config.utility.min_size);
    const decision::ReportResult report = decision::optimal_report(inputs, config.utility);

    {
      auto out = open_output(options.out_dir, "posterior_draws.csv", manifest.outputs);
      ppmx::write_draws(out, draws);
    }
    {
      auto out = open_output(options.out_dir, "report.csv", manifest.outputs);
      out << "rank,report,expected_utility\n";
      for (std::size_t r = 0; r < report.ranked.size(); ++r)
        out << r << "," << report.ranked[r].report.label(config.frame) << ","
            << outputs::format_double(report.ranked[r].expected_utility) << "\n";
    }
    {
      auto out = open_output(options.out_dir, "pair_table.csv", manifest.outputs);
      out << "pair,n,expected_contribution,mean_log_hr\n";
      for (int a = 0; a < inputs.n_pairs(); ++a)
        out << inputs.pairs[a].label(config.frame) << "," << inputs.subgroup_sizes(a) << ","
            << outputs::format_double(report.pair_contribution(a)) << ","
            << outputs::format_double(report.pair_mean_log_hr(a)) << "\n";
    }
    {
      auto out = open_output(options.out_dir, "decision.csv", manifest.outputs);
      out << "chosen,expected_utility,prob_h0,prob_h1,horizon\n";
      out << report.best.label(config.frame) << ","
          << outputs::format_double(report.best_utility) << ","
          << outputs::format_double(report.prob_h0) << ","
          << outputs::format_double(report.prob_h1) << ","
          << outputs::format_double(horizon.t_months) << "\n";
    }
    {
      auto out = open_output(options.out_dir, "pi.csv", manifest.outputs);
      out << "id,pi\n";
      Rng pi_rng(derive_seed(options.seed, 0xa71, 1));
      for (const Patient& p : patients) {
        const double pi = predictive::superiority_prob(draws, p, config.frame,
                                                       config.analysis.superiority_mc, pi_rng);
        out << p.id << "," << outputs::format_double(pi) << "\n";
      }
    }
    manifest.finished_at = iso_timestamp_now();
    manifest.outputs.push_back("manifest.json");
    write_manifest(options.out_dir, manifest);
  });
}

int cmd_calibrate(const CommonOptions& options) {
  return run_guarded("calibrate", [&] {
    const LoadedConfig loaded = load_config(options);
    const EngineConfig& config = loaded.config;
    const sim::TrialConfig trial_config = trial_config_for(loaded, options);
    fs::create_directories(options.out_dir);

    RunManifest manifest;
    manifest.command = "calibrate";
    manifest.config_digest = loaded.digest;
    manifest.seed = options.seed;
    manifest.started_at = iso_timestamp_now();

    // Null scenario and a common-effect scenario on the configured population.
    sim::Scenario null_scenario = config.scenario;
    null_scenario.beta0 = 0.0;
    null_scenario.interactions.clear();
    sim::Scenario effect_scenario = null_scenario;
    effect_scenario.beta0 = 0.4;

    const sim::CalibrationResult result = sim::calibrate(
        null_scenario, effect_scenario, trial_config, config.frame, config.u0_grid,
        config.u1_grid, config.targets, options.seed, config.reps, thread_count(options));

    {
      auto out = open_output(options.out_dir, "calibration_table.csv", manifest.outputs);
      out << "parameter,value,rate\n";
      for (const auto& row : result.tie_table)
        out << "u0," << outputs::format_double(row.value) << ","
            << outputs::format_double(row.rate) << "\n";
      for (const auto& row : result.tpr_table)
        out << "u1," << outputs::format_double(row.value) << ","
            << outputs::format_double(row.rate) << "\n";
    }
    {
      auto out = open_output(options.out_dir, "selected.json", manifest.outputs);
      nlohmann::json j;
      j["u0"] = result.selected.u0;
      j["u1"] = result.selected.u1;
      j["alpha"] = result.selected.alpha;
      j["beta"] = result.selected.beta;
      j["eps0"] = result.selected.eps0;
      j["eps1"] = result.selected.eps1;
      j["tie_met"] = result.tie_met;
      j["tpr_met"] = result.tpr_met;
      out << j.dump(2) << "\n";
    }
    manifest.finished_at = iso_timestamp_now();
    manifest.outputs.push_back("manifest.json");
    write_manifest(options.out_dir, manifest);
  });
}

int cmd_compare(const CommonOptions& options) {
  return run_guarded("compare", [&] {
    const LoadedConfig loaded = load_config(options);
    const EngineConfig& config = loaded.config;
    const sim::TrialConfig trial_config = trial_config_for(loaded, options);
    fs::create_directories(options.out_dir);

    RunManifest manifest;
    manifest.command = "compare";
    manifest.config_digest = loaded.digest;
    manifest.seed = options.seed;
    manifest.started_at = iso_timestamp_now();

    struct RepErrors {
      Eigen::MatrixXd ours, naive, separate;
    };
    std::vector<RepErrors> errors(config.reps);
    parallel_for(config.reps, thread_count(options), [&](int r) {
      const std::uint64_t rep_seed = derive_seed(options.seed, 0x5e9, r);
      const sim::RepResult rep =
          sim::run_trial(config.scenario, trial_config, config.frame, rep_seed);
      errors[r].ours = rep.te.abs_error;

      // Equal-randomization trial shared by both comparator analyses.
      Rng rng(derive_seed(rep_seed, 0xc0));
      std::vector<Patient> patients = sim::sample_population(config.scenario, config.frame, rng);
      for (Patient& p : patients) {
        p.arm = rng.bernoulli(0.5) ? Arm::Targeted : Arm::Other;
        p.outcome = Outcome{sim::true_outcome_time(p, *p.arm, config.scenario, rng), false};
      }
      const sim::ComparatorPosterior naive = sim::naive_fit(patients, config.comparator);
      const auto separate = sim::separate_fit(patients, config.frame, config.comparator);
      errors[r].naive = sim::te_metrics_naive(naive, config.scenario, config.frame).abs_error;
      errors[r].separate =
          sim::te_metrics_separate(separate, config.scenario, config.frame).abs_error;
    });

    const int q = config.frame.n_aberrations();
    const int nc = config.frame.n_tumors();
    auto mean_errors = [&](auto select) {
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(q, nc);
      Eigen::MatrixXi count = Eigen::MatrixXi::Zero(q, nc);
      for (const RepErrors& e : errors) {
        const Eigen::MatrixXd& m = select(e);
        for (int j = 0; j < q; ++j)
          for (int c = 0; c < nc; ++c)
            if (!std::isnan(m(j, c))) {
              mean(j, c) += m(j, c);
              count(j, c) += 1;
            }
      }
      for (int j = 0; j < q; ++j)
        for (int c = 0; c < nc; ++c)
          mean(j, c) = count(j, c) > 0 ? mean(j, c) / count(j, c)
                                       : std::numeric_limits<double>::quiet_NaN();
      return mean;
    };
    const Eigen::MatrixXd ours = mean_errors([](const RepErrors& e) -> const Eigen::MatrixXd& {
      return e.ours;
    });
    const Eigen::MatrixXd naive = mean_errors([](const RepErrors& e) -> const Eigen::MatrixXd& {
      return e.naive;
    });
    const Eigen::MatrixXd separate = mean_errors(
        [](const RepErrors& e) -> const Eigen::MatrixXd& { return e.separate; });

    {
      auto out = open_output(options.out_dir, "te_errors.csv", manifest.outputs);
      out << "pair,method,mean_abs_error\n";
      auto rows = [&](const char* method, const Eigen::MatrixXd& m) {
        for (int j = 0; j < q; ++j)
          for (int c = 0; c < nc; ++c) {
            const MutationTumorPair pair{j, c};
            out << pair.label(config.frame) << "," << method << ","
                << (std::isnan(m(j, c)) ? "NA" : outputs::format_double(m(j, c))) << "\n";
          }
      };
      rows("OURS", ours);
      rows("NAIVE", naive);
      rows("SEPARATE", separate);
    }
    manifest.finished_at = iso_timestamp_now();
    manifest.outputs.push_back("manifest.json");
    write_manifest(options.out_dir, manifest);
  });
}

int cmd_print_config(const CommonOptions& options) {
  return run_guarded("print-config", [&] {
    const LoadedConfig loaded = load_config(options);
    std::cout << loaded.config.to_json_text();
  });
}

int cmd_plot(const std::string& matrix_path, const std::string& svg_path,
             const std::string& title, const std::string& config_path) {
  return run_guarded("plot", [&] {
    CommonOptions options;
    options.config_path = config_path;
    const LoadedConfig loaded = load_config(options);
    std::ifstream in(matrix_path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + matrix_path);
    const Eigen::MatrixXd m = outputs::read_matrix(in, loaded.config.frame);
    std::ofstream out(svg_path);
    if (!out) throw std::runtime_error("cannot write " + svg_path);
    outputs::write_heatmap_svg(out, m, loaded.config.frame, title);
  });
}

}  // namespace basket::cli
