#ifndef LPSUR_EXPERIMENT_HPP
#define LPSUR_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpsur/bayes.hpp"
#include "lpsur/dgp.hpp"

namespace lpsur {

struct ExperimentConfig {
  DgpConfig dgp;
  int n_trials = 1000;
  std::vector<std::string> estimators = {"ols"};  // subset of ols, fgls, gibbs
  GibbsConfig gibbs;
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  int response_var = 2;  // m, 1-based
  int jobs = 0;          // 0 = all available cores

  void validate() const;
};

struct TrialRecord {
  int trial = 0;
  std::string estimator;
  std::vector<double> sigma_hat;  // lower triangle of Sigma_hat, rows i >= j
  std::vector<double> irf_hat;    // coefficients on the lag-1 shock regressor, horizons 1..L
  int geweke_n_pass = -1;         // -1 for non-Bayesian estimators
  int geweke_n_total = -1;
  bool geweke_pass = true;
};

struct TruthRecord {
  std::vector<double> xi_true;   // lower triangle of the analytic residual covariance
  std::vector<double> irf_true;  // (m,1) entries of the coefficient matrices
};

struct MonteCarloResult {
  TruthRecord truth;
  std::vector<TrialRecord> records;
  std::vector<std::pair<int, std::string>> failures;  // skipped trials
};

// Parameters are drawn once from (master_seed, stream 0) and held fixed;
// trial i simulates shocks from (master_seed, stream i+1), so trials are
// reproducible independently of execution order. Individual trial failures
// are skipped and recorded; more than 1% failures aborts the run.
MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg);

// Emits sigma_<tag>.csv and irf_<tag>.csv per estimator (gibbs maps to
// "bayes"), geweke_bayes.csv when Gibbs ran, failures.csv when trials were
// skipped, and summary.csv with trial means, standard deviations and truth.
void write_histogram_tables(const MonteCarloResult& result, const ExperimentConfig& cfg,
                            const std::string& out_dir);

// The numerical illustration settings: M=3, L=5, H=7, T=200, d=0.8,
// response variable 2, 1000 trials, 11000 draws with 1000 burn-in.
ExperimentConfig paper_defaults();

// Parse a JSON config file; the literal name "paper_defaults" is accepted
// in place of a path. Unknown keys are rejected.
ExperimentConfig load_experiment_config(const std::string& path_or_name);

std::vector<std::pair<int, int>> lower_triangle_index(int dim);

}  // namespace lpsur

#endif  // LPSUR_EXPERIMENT_HPP
