// Command-line front end: simulate the VMA process, evaluate the analytic
// residual covariance, run OLS/FGLS or the Gibbs sampler on a series file,
// and drive the Monte Carlo harness.

#include <CLI11.hpp>

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpsur/bayes.hpp"
#include "lpsur/csv.hpp"
#include "lpsur/dgp.hpp"
#include "lpsur/estimators.hpp"
#include "lpsur/experiment.hpp"
#include "lpsur/lp.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Input and argument problems exit 1; failures inside the numerics exit 2.
template <typename Fn>
int run_numerical(Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

struct SeriesArgs {
  std::string series_path;
  std::string params_path;
  int L = 0;
  int H = -1;
  int m = 2;
};

// Resolve dimensions from the sidecar when given, else from --L/--H flags.
lpsur::SeriesData load_series(const SeriesArgs& args, lpsur::DgpConfig& cfg) {
  const lpsur::CsvTable table = lpsur::read_csv(args.series_path);
  const int n_cols = static_cast<int>(table.header.size()) - 1;
  const int n_rows = static_cast<int>(table.rows.size());
  if (!args.params_path.empty()) {
    lpsur::read_params_json(args.params_path, &cfg);
  } else {
    if (args.L < 1 || args.H < 0) {
      throw std::invalid_argument("--L and --H are required when no --params sidecar is given");
    }
    cfg.L = args.L;
    cfg.H = args.H;
    cfg.M = n_cols;
    cfg.T = n_rows - args.H;
  }
  return lpsur::read_series_csv(args.series_path, cfg);
}

void print_matrix(const Eigen::MatrixXd& m) {
  std::cout << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) std::cout << ",";
    std::cout << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) std::cout << ",";
      std::cout << lpsur::format_double(m(i, j));
    }
    std::cout << "]";
  }
  std::cout << "]\n";
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& prefix,
                      const std::string& path) {
  lpsur::CsvTable table;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    table.header.push_back(prefix + std::to_string(j));
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(lpsur::format_double(m(i, j)));
    table.rows.push_back(std::move(row));
  }
  lpsur::write_csv(path, table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local projection SUR-likelihood toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw VMA parameters and simulate a series");
  std::string sim_config;
  lpsur::DgpConfig sim_cfg;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out = "out";
  sim->add_option("--config", sim_config, "Experiment config JSON (dgp block) or 'paper_defaults'");
  sim->add_option("--M", sim_cfg.M, "Variable count");
  sim->add_option("--L", sim_cfg.L, "VMA order");
  sim->add_option("--H", sim_cfg.H, "Max projection horizon");
  sim->add_option("--T", sim_cfg.T, "Sample length");
  sim->add_option("--d", sim_cfg.d, "IRF shape parameter");
  sim->add_option("--seed", sim_seed, "Seed override");
  sim->add_option("--out", sim_out, "Output directory");

  // xi
  auto* xi = app.add_subcommand("xi", "Evaluate the analytic LP residual covariance");
  std::string xi_params;
  int xi_m = 0;
  int xi_h = -1;
  xi->add_option("--params", xi_params, "JSON with either phi+omega or gammas+omega")->required();
  xi->add_option("--m", xi_m, "Target variable (1-based); required with gammas input");
  xi->add_option("--H", xi_h, "Horizon; defaults to the phi length or config H");

  // estimate
  auto* est = app.add_subcommand("estimate", "OLS or FGLS on a series file");
  SeriesArgs est_args;
  bool est_fgls = false;
  std::string est_out = "out";
  std::string est_dump_design;
  est->add_option("--series", est_args.series_path, "Series CSV (t, w_1..w_M)")->required();
  est->add_option("--params", est_args.params_path, "Params sidecar JSON for dimensions");
  est->add_option("--L", est_args.L, "Lag order");
  est->add_option("--H", est_args.H, "Max projection horizon");
  est->add_option("--m", est_args.m, "Target variable (1-based)");
  est->add_flag("--fgls", est_fgls, "Iterate feasible GLS after OLS");
  est->add_option("--out", est_out, "Output directory");
  est->add_option("--dump-design", est_dump_design, "Also write the stacked design CSV here");

  // gibbs
  auto* gib = app.add_subcommand("gibbs", "Posterior summary via the Gibbs sampler");
  SeriesArgs gib_args;
  lpsur::GibbsConfig gib_cfg;
  std::string gib_out = "out";
  std::string gib_chains;
  gib->add_option("--series", gib_args.series_path, "Series CSV (t, w_1..w_M)")->required();
  gib->add_option("--params", gib_args.params_path, "Params sidecar JSON for dimensions");
  gib->add_option("--L", gib_args.L, "Lag order");
  gib->add_option("--H", gib_args.H, "Max projection horizon");
  gib->add_option("--m", gib_args.m, "Target variable (1-based)");
  gib->add_option("--draws", gib_cfg.n_draws, "Total Gibbs sweeps");
  gib->add_option("--burn", gib_cfg.n_burn, "Burn-in sweeps to discard");
  gib->add_option("--seed", gib_cfg.seed, "Sampler seed");
  gib->add_option("--out", gib_out, "Output directory");
  gib->add_option("--chains", gib_chains, "Also export the kept draws to this CSV");

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo replication harness");
  std::string mc_config;
  std::optional<int> mc_trials;
  std::optional<std::uint64_t> mc_seed;
  std::optional<std::string> mc_out;
  std::optional<int> mc_jobs;
  mc->add_option("--config", mc_config, "Config JSON path or 'paper_defaults'")->required();
  mc->add_option("--trials", mc_trials, "Trial count override");
  mc->add_option("--seed", mc_seed, "Master seed override");
  mc->add_option("--out", mc_out, "Output directory override");
  mc->add_option("--jobs", mc_jobs, "Concurrent trial workers (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (sim->parsed()) {
    try {
      if (!sim_config.empty()) {
        const lpsur::ExperimentConfig base = lpsur::load_experiment_config(sim_config);
        lpsur::DgpConfig from_file = base.dgp;
        // Explicit flags win over the config file.
        for (const auto& [opt, member] :
             std::vector<std::pair<std::string, int lpsur::DgpConfig::*>>{
                 {"--M", &lpsur::DgpConfig::M},
                 {"--L", &lpsur::DgpConfig::L},
                 {"--H", &lpsur::DgpConfig::H},
                 {"--T", &lpsur::DgpConfig::T}}) {
          if (sim->count(opt) > 0) from_file.*member = sim_cfg.*member;
        }
        if (sim->count("--d") > 0) from_file.d = sim_cfg.d;
        sim_cfg = from_file;
      }
      if (sim_seed) sim_cfg.seed = *sim_seed;
      sim_cfg.validate();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return run_numerical([&] {
      lpsur::RngState param_rng(sim_cfg.seed, 0);
      const lpsur::VmaParams params = lpsur::gen_vma_params(sim_cfg, param_rng);
      lpsur::RngState series_rng(sim_cfg.seed, 1);
      const lpsur::SeriesData series = lpsur::simulate_vma(params, sim_cfg, series_rng);
      std::filesystem::create_directories(sim_out);
      lpsur::write_series_csv(series, sim_out + "/series.csv");
      lpsur::write_params_json(params, sim_cfg, sim_out + "/params.json");
      std::cout << "wrote " << sim_out << "/series.csv and " << sim_out << "/params.json\n";
    });
  }

  if (xi->parsed()) {
    nlohmann::json doc;
    {
      std::ifstream in(xi_params);
      if (!in) {
        std::cerr << "error: --params file not found: " << xi_params << "\n";
        return kExitUsage;
      }
      try {
        in >> doc;
      } catch (const std::exception& e) {
        std::cerr << "error: cannot parse " << xi_params << ": " << e.what() << "\n";
        return kExitUsage;
      }
    }
    return run_numerical([&] {
      lpsur::PhiFirstLag phi;
      std::optional<lpsur::SpdMatrix> omega;
      if (doc.contains("phi")) {
        const auto& rows = doc.at("phi");
        const int m = doc.value("m", 1);
        std::vector<Eigen::VectorXd> vectors;
        for (const auto& row : rows) {
          Eigen::VectorXd v(row.size());
          for (std::size_t j = 0; j < row.size(); ++j) v[j] = row.at(j).get<double>();
          vectors.push_back(std::move(v));
        }
        const int M = vectors.empty() ? 1 : static_cast<int>(vectors[0].size());
        phi = lpsur::make_phi_first_lag(vectors, m, M);
        const auto& om = doc.at("omega");
        Eigen::MatrixXd omat(om.size(), om.at(0).size());
        for (std::size_t i = 0; i < om.size(); ++i) {
          for (std::size_t j = 0; j < om.at(i).size(); ++j) {
            omat(i, j) = om.at(i).at(j).get<double>();
          }
        }
        omega.emplace(omat);
      } else {
        lpsur::DgpConfig cfg;
        const lpsur::VmaParams params = lpsur::read_params_json(xi_params, &cfg);
        const int m = xi_m > 0 ? xi_m : 2;
        const int H = xi_h >= 0 ? xi_h : cfg.H;
        phi = lpsur::phi_from_gamma(params, m, H);
        omega.emplace(params.omega);
      }
      if (xi_h >= 0 && phi.horizon() != xi_h && doc.contains("phi")) {
        throw std::invalid_argument("--H disagrees with the phi vector count");
      }
      const lpsur::ResidCov result = lpsur::analytic_xi(phi, *omega, phi.m);
      print_matrix(result.mat());
    });
  }

  if (est->parsed()) {
    lpsur::DgpConfig cfg;
    std::optional<lpsur::SeriesData> series;
    try {
      series.emplace(load_series(est_args, cfg));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return run_numerical([&] {
      const lpsur::LpDesign design = lpsur::build_design(*series, est_args.m, cfg.L, cfg.H);
      if (!est_dump_design.empty()) lpsur::write_design_csv(design, est_dump_design);
      const lpsur::LpEstimate estimate =
          est_fgls ? lpsur::fgls_estimate(design) : lpsur::ols_estimate(design);
      std::filesystem::create_directories(est_out);
      write_matrix_csv(estimate.coeffs.theta, "h_", est_out + "/theta.csv");
      write_matrix_csv(estimate.sigma.mat(), "h_", est_out + "/sigma.csv");
      std::cout << (est_fgls ? "fgls" : "ols") << " done in " << estimate.iterations
                << " iteration(s), converged=" << (estimate.converged ? "yes" : "no") << "\n";
    });
  }

  if (gib->parsed()) {
    lpsur::DgpConfig cfg;
    std::optional<lpsur::SeriesData> series;
    try {
      series.emplace(load_series(gib_args, cfg));
      gib_cfg.validate();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return run_numerical([&] {
      const lpsur::LpDesign design = lpsur::build_design(*series, gib_args.m, cfg.L, cfg.H);
      lpsur::RngState rng(gib_cfg.seed, 0);
      const lpsur::PosteriorDraws draws = lpsur::run_gibbs(design, gib_cfg, rng);
      const lpsur::PosteriorSummary summary = lpsur::posterior_summary(draws);
      std::filesystem::create_directories(gib_out);

      lpsur::CsvTable table;
      table.header = {"quantity", "mean", "q05", "q95"};
      for (Eigen::Index i = 0; i < summary.theta_mean.rows(); ++i) {
        for (Eigen::Index j = 0; j < summary.theta_mean.cols(); ++j) {
          table.rows.push_back({"theta_" + std::to_string(i) + "_" + std::to_string(j),
                                lpsur::format_double(summary.theta_mean(i, j)),
                                lpsur::format_double(summary.theta_q05(i, j)),
                                lpsur::format_double(summary.theta_q95(i, j))});
        }
      }
      for (Eigen::Index i = 0; i < summary.sigma_mean.rows(); ++i) {
        for (Eigen::Index j = 0; j < summary.sigma_mean.cols(); ++j) {
          table.rows.push_back({"sigma_" + std::to_string(i) + "_" + std::to_string(j),
                                lpsur::format_double(summary.sigma_mean(i, j)),
                                lpsur::format_double(summary.sigma_q05(i, j)),
                                lpsur::format_double(summary.sigma_q95(i, j))});
        }
      }
      lpsur::write_csv(gib_out + "/posterior.csv", table);
      if (!gib_chains.empty()) lpsur::write_chains_csv(draws, gib_chains);
      std::cout << "kept " << draws.count() << " draws; wrote " << gib_out << "/posterior.csv\n";
    });
  }

  if (mc->parsed()) {
    lpsur::ExperimentConfig cfg;
    try {
      cfg = lpsur::load_experiment_config(mc_config);
      if (mc_trials) cfg.n_trials = *mc_trials;
      if (mc_seed) cfg.master_seed = *mc_seed;
      if (mc_out) cfg.out_dir = *mc_out;
      if (mc_jobs) cfg.jobs = *mc_jobs;
      cfg.validate();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return run_numerical([&] {
      const lpsur::MonteCarloResult result = lpsur::run_monte_carlo(cfg);
      lpsur::write_histogram_tables(result, cfg, cfg.out_dir);
      std::cout << "completed " << cfg.n_trials - result.failures.size() << "/" << cfg.n_trials
                << " trials; tables written to " << cfg.out_dir << "\n";
    });
  }

  return kExitUsage;
}
