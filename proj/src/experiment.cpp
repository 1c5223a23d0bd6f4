#include "lpsur/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "lpsur/csv.hpp"
#include "lpsur/estimators.hpp"
#include "lpsur/lp.hpp"
#include <nlohmann/json.hpp>

namespace lpsur {

namespace {

const std::set<std::string> kKnownEstimators = {"ols", "fgls", "gibbs"};

std::string file_tag(const std::string& estimator) {
  return estimator == "gibbs" ? "bayes" : estimator;
}

}  // namespace

void ExperimentConfig::validate() const {
  dgp.validate();
  gibbs.validate();
  if (n_trials < 1) throw std::invalid_argument("ExperimentConfig: n_trials must be at least 1");
  if (estimators.empty()) {
    throw std::invalid_argument("ExperimentConfig: at least one estimator is required");
  }
  std::set<std::string> seen;
  for (const auto& e : estimators) {
    if (kKnownEstimators.count(e) == 0) {
      throw std::invalid_argument("ExperimentConfig: unknown estimator '" + e + "'");
    }
    if (!seen.insert(e).second) {
      throw std::invalid_argument("ExperimentConfig: duplicate estimator '" + e + "'");
    }
  }
  if (response_var < 1 || response_var > dgp.M) {
    throw std::invalid_argument("ExperimentConfig: response_var out of range");
  }
  if (dgp.H < dgp.L - 1) {
    throw std::invalid_argument(
        "ExperimentConfig: needs H >= L - 1 so every impulse response horizon is estimated");
  }
  if (jobs < 0) throw std::invalid_argument("ExperimentConfig: jobs must be non-negative");
}

std::vector<std::pair<int, int>> lower_triangle_index(int dim) {
  std::vector<std::pair<int, int>> index;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) index.emplace_back(i, j);
  }
  return index;
}

namespace {

std::vector<double> lower_triangle(const Eigen::MatrixXd& m) {
  std::vector<double> values;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j <= i; ++j) values.push_back(m(i, j));
  }
  return values;
}

std::vector<double> irf_coefficients(const Eigen::MatrixXd& theta, int L) {
  // Coefficient on the lag-1 shock regressor (first column of X). The
  // response column h is dated t+h and the regressor t-1, so column h
  // recovers Gamma_{h+1}: the VMA-lag-l response sits in column l-1.
  std::vector<double> irf(L);
  for (int l = 1; l <= L; ++l) irf[l - 1] = theta(0, l - 1);
  return irf;
}

TrialRecord gibbs_trial(int trial, const LpDesign& design, const GibbsConfig& gibbs_cfg,
                        int L, RngState& rng) {
  const PosteriorDraws draws = run_gibbs(design, gibbs_cfg, rng);
  const PosteriorSummary summary = posterior_summary(draws);

  TrialRecord rec;
  rec.trial = trial;
  rec.estimator = "gibbs";
  rec.sigma_hat = lower_triangle(summary.sigma_mean);
  rec.irf_hat = irf_coefficients(summary.theta_mean, L);

  // Monitored scalars: the L impulse-response coefficients and diag(Sigma).
  const int n_eq = design.H + 1;
  Eigen::MatrixXd chains(draws.count(), L + n_eq);
  for (int k = 0; k < draws.count(); ++k) {
    for (int l = 1; l <= L; ++l) chains(k, l - 1) = draws.theta_draws[k](0, l - 1);
    for (int i = 0; i < n_eq; ++i) chains(k, L + i) = draws.sigma_draws[k](i, i);
  }
  const GewekeResult geweke = geweke_test_all(chains);
  rec.geweke_n_total = static_cast<int>(geweke.pass.size());
  rec.geweke_n_pass = static_cast<int>(std::count(geweke.pass.begin(), geweke.pass.end(), true));
  rec.geweke_pass = geweke.all_pass();
  return rec;
}

}  // namespace

MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  const int m = cfg.response_var;

  RngState param_rng(cfg.master_seed, 0);
  const VmaParams params = gen_vma_params(cfg.dgp, param_rng);

  MonteCarloResult result;
  const PhiFirstLag phi = phi_from_gamma(params, m, cfg.dgp.H);
  result.truth.xi_true = lower_triangle(analytic_xi(phi, params.omega, m).mat());
  result.truth.irf_true.resize(cfg.dgp.L);
  for (int l = 1; l <= cfg.dgp.L; ++l) {
    result.truth.irf_true[l - 1] = params.gammas[l - 1](m - 1, 0);
  }

  std::vector<std::vector<TrialRecord>> per_trial(cfg.n_trials);
  std::vector<std::pair<int, std::string>> failures;
  std::mutex failures_mutex;
  std::atomic<int> next_trial{0};

  auto worker = [&]() {
    for (;;) {
      const int trial = next_trial.fetch_add(1);
      if (trial >= cfg.n_trials) return;
      try {
        RngState rng(cfg.master_seed, static_cast<std::uint64_t>(trial) + 1);
        const SeriesData series = simulate_vma(params, cfg.dgp, rng);
        const LpDesign design = build_design(series, m, cfg.dgp.L, cfg.dgp.H);
        std::vector<TrialRecord> records;
        for (const auto& estimator : cfg.estimators) {
          if (estimator == "gibbs") {
            records.push_back(gibbs_trial(trial, design, cfg.gibbs, cfg.dgp.L, rng));
            continue;
          }
          const LpEstimate est =
              estimator == "ols" ? ols_estimate(design) : fgls_estimate(design);
          TrialRecord rec;
          rec.trial = trial;
          rec.estimator = estimator;
          rec.sigma_hat = lower_triangle(est.sigma.mat());
          rec.irf_hat = irf_coefficients(est.coeffs.theta, cfg.dgp.L);
          records.push_back(std::move(rec));
        }
        per_trial[trial] = std::move(records);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        failures.emplace_back(trial, e.what());
      }
    }
  };

  int n_workers = cfg.jobs > 0 ? cfg.jobs
                               : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, cfg.n_trials);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::sort(failures.begin(), failures.end());
  if (static_cast<double>(failures.size()) > 0.01 * cfg.n_trials) {
    throw std::runtime_error("run_monte_carlo: " + std::to_string(failures.size()) + " of " +
                             std::to_string(cfg.n_trials) +
                             " trials failed, exceeding the 1% cap; first failure: " +
                             failures.front().second);
  }
  result.failures = std::move(failures);
  for (auto& records : per_trial) {
    for (auto& rec : records) result.records.push_back(std::move(rec));
  }
  return result;
}

namespace {

struct SeriesStats {
  double mean = 0.0;
  double sd = 0.0;
};

SeriesStats stats_of(const std::vector<double>& values) {
  SeriesStats s;
  const double n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace

void write_histogram_tables(const MonteCarloResult& result, const ExperimentConfig& cfg,
                            const std::string& out_dir) {
  if (result.records.empty()) {
    throw std::invalid_argument("write_histogram_tables: no trial records");
  }
  std::filesystem::create_directories(out_dir);
  const auto tri = lower_triangle_index(cfg.dgp.H + 1);
  const int L = cfg.dgp.L;

  CsvTable summary;
  summary.header = {"estimator", "quantity", "mean", "sd", "truth"};

  for (const auto& estimator : cfg.estimators) {
    std::vector<const TrialRecord*> records;
    for (const auto& rec : result.records) {
      if (rec.estimator == estimator) records.push_back(&rec);
    }
    if (records.empty()) continue;
    const std::string tag = file_tag(estimator);

    CsvTable sigma_table;
    sigma_table.header.push_back("trial");
    for (const auto& [i, j] : tri) {
      sigma_table.header.push_back("sigma_" + std::to_string(i) + "_" + std::to_string(j));
    }
    std::vector<std::string> truth_row{"truth"};
    for (double v : result.truth.xi_true) truth_row.push_back(format_double(v));
    sigma_table.rows.push_back(std::move(truth_row));
    for (const auto* rec : records) {
      std::vector<std::string> row{std::to_string(rec->trial)};
      for (double v : rec->sigma_hat) row.push_back(format_double(v));
      sigma_table.rows.push_back(std::move(row));
    }
    write_csv(out_dir + "/sigma_" + tag + ".csv", sigma_table);

    CsvTable irf_table;
    irf_table.header.push_back("trial");
    for (int l = 1; l <= L; ++l) irf_table.header.push_back("gamma_" + std::to_string(l));
    std::vector<std::string> irf_truth{"truth"};
    for (double v : result.truth.irf_true) irf_truth.push_back(format_double(v));
    irf_table.rows.push_back(std::move(irf_truth));
    for (const auto* rec : records) {
      std::vector<std::string> row{std::to_string(rec->trial)};
      for (double v : rec->irf_hat) row.push_back(format_double(v));
      irf_table.rows.push_back(std::move(row));
    }
    write_csv(out_dir + "/irf_" + tag + ".csv", irf_table);

    if (estimator == "gibbs") {
      CsvTable geweke_table;
      geweke_table.header = {"trial", "n_pass", "n_total", "all_pass"};
      for (const auto* rec : records) {
        geweke_table.rows.push_back({std::to_string(rec->trial),
                                     std::to_string(rec->geweke_n_pass),
                                     std::to_string(rec->geweke_n_total),
                                     rec->geweke_pass ? "1" : "0"});
      }
      write_csv(out_dir + "/geweke_bayes.csv", geweke_table);
    }

    for (std::size_t q = 0; q < tri.size(); ++q) {
      std::vector<double> values;
      for (const auto* rec : records) values.push_back(rec->sigma_hat[q]);
      const SeriesStats s = stats_of(values);
      summary.rows.push_back({estimator,
                              "sigma_" + std::to_string(tri[q].first) + "_" +
                                  std::to_string(tri[q].second),
                              format_double(s.mean), format_double(s.sd),
                              format_double(result.truth.xi_true[q])});
    }
    for (int l = 1; l <= L; ++l) {
      std::vector<double> values;
      for (const auto* rec : records) values.push_back(rec->irf_hat[l - 1]);
      const SeriesStats s = stats_of(values);
      summary.rows.push_back({estimator, "gamma_" + std::to_string(l), format_double(s.mean),
                              format_double(s.sd),
                              format_double(result.truth.irf_true[l - 1])});
    }
  }

  if (!result.failures.empty()) {
    CsvTable failure_table;
    failure_table.header = {"trial", "error"};
    for (const auto& [trial, message] : result.failures) {
      std::string cleaned = message;
      std::replace(cleaned.begin(), cleaned.end(), ',', ';');
      failure_table.rows.push_back({std::to_string(trial), cleaned});
    }
    write_csv(out_dir + "/failures.csv", failure_table);
  }

  write_csv(out_dir + "/summary.csv", summary);
}

ExperimentConfig paper_defaults() {
  ExperimentConfig cfg;
  cfg.dgp = DgpConfig{};  // M=3, L=5, H=7, T=200, d=0.8
  cfg.n_trials = 1000;
  cfg.estimators = {"ols", "gibbs"};
  cfg.gibbs.n_draws = 11000;
  cfg.gibbs.n_burn = 1000;
  cfg.master_seed = 20200710;
  cfg.response_var = 2;
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path_or_name) {
  if (path_or_name == "paper_defaults") return paper_defaults();
  std::ifstream in(path_or_name);
  if (!in) {
    throw std::invalid_argument("config file not found: " + path_or_name);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config parse error in " + path_or_name + ": " + e.what());
  }

  ExperimentConfig cfg;
  const std::set<std::string> known_top = {"dgp",         "n_trials", "estimators",
                                           "gibbs",       "master_seed", "out_dir",
                                           "response_var", "jobs"};
  for (const auto& [key, value] : doc.items()) {
    if (known_top.count(key) == 0) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (doc.contains("dgp")) {
    const std::set<std::string> known = {"M", "L", "H", "T", "d", "seed"};
    for (const auto& [key, value] : doc["dgp"].items()) {
      if (known.count(key) == 0) {
        throw std::invalid_argument("config: unknown dgp key '" + key + "'");
      }
    }
    const auto& d = doc["dgp"];
    if (d.contains("M")) cfg.dgp.M = d["M"].get<int>();
    if (d.contains("L")) cfg.dgp.L = d["L"].get<int>();
    if (d.contains("H")) cfg.dgp.H = d["H"].get<int>();
    if (d.contains("T")) cfg.dgp.T = d["T"].get<int>();
    if (d.contains("d")) cfg.dgp.d = d["d"].get<double>();
    if (d.contains("seed")) cfg.dgp.seed = d["seed"].get<std::uint64_t>();
  }
  if (doc.contains("gibbs")) {
    const std::set<std::string> known = {"n_draws", "n_burn", "seed", "init"};
    for (const auto& [key, value] : doc["gibbs"].items()) {
      if (known.count(key) == 0) {
        throw std::invalid_argument("config: unknown gibbs key '" + key + "'");
      }
    }
    const auto& g = doc["gibbs"];
    if (g.contains("n_draws")) cfg.gibbs.n_draws = g["n_draws"].get<int>();
    if (g.contains("n_burn")) cfg.gibbs.n_burn = g["n_burn"].get<int>();
    if (g.contains("seed")) cfg.gibbs.seed = g["seed"].get<std::uint64_t>();
    if (g.contains("init")) cfg.gibbs.init = g["init"].get<std::string>();
  }
  if (doc.contains("n_trials")) cfg.n_trials = doc["n_trials"].get<int>();
  if (doc.contains("estimators")) cfg.estimators = doc["estimators"].get<std::vector<std::string>>();
  if (doc.contains("master_seed")) cfg.master_seed = doc["master_seed"].get<std::uint64_t>();
  if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
  if (doc.contains("response_var")) cfg.response_var = doc["response_var"].get<int>();
  if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
  cfg.validate();
  return cfg;
}

}  // namespace lpsur
