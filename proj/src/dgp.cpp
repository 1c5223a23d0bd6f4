#include "lpsur/dgp.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lpsur/csv.hpp"
#include <nlohmann/json.hpp>

namespace lpsur {

void DgpConfig::validate() const {
  if (M < 2) throw std::invalid_argument("DgpConfig: M must be at least 2");
  if (L < 1) throw std::invalid_argument("DgpConfig: L must be at least 1");
  if (H < 0) throw std::invalid_argument("DgpConfig: H must be non-negative");
  if (T <= M * L + 1) throw std::invalid_argument("DgpConfig: T must exceed M*L + 1");
  if (!std::isfinite(d)) throw std::invalid_argument("DgpConfig: d must be finite");
}

void VmaParams::validate() const {
  const int m_dim = var_count();
  if (gammas.empty()) throw std::invalid_argument("VmaParams: no coefficient matrices");
  for (const auto& g : gammas) {
    if (g.rows() != m_dim || g.cols() != m_dim) {
      throw std::invalid_argument("VmaParams: coefficient matrix dimension mismatch");
    }
    if (g.row(0).cwiseAbs().maxCoeff() != 0.0) {
      throw std::invalid_argument("VmaParams: first row of every coefficient matrix must be zero");
    }
  }
  for (int i = 1; i < m_dim; ++i) {
    if (omega.mat()(0, i) != 0.0 || omega.mat()(i, 0) != 0.0) {
      throw std::invalid_argument("VmaParams: shock covariance must be block-diagonal");
    }
  }
}

double SeriesData::reconstruction_error(const VmaParams& params) const {
  const int L = params.order();
  double worst = 0.0;
  for (Eigen::Index t = 0; t < w.rows(); ++t) {
    Eigen::VectorXd pred = eps.row(t + L).transpose();
    for (int l = 1; l <= L; ++l) {
      pred += params.gammas[l - 1] * eps.row(t + L - l).transpose();
    }
    worst = std::max(worst, (w.row(t).transpose() - pred).cwiseAbs().maxCoeff());
  }
  return worst;
}

IrfTruth gen_irf_weights(int L, double d) {
  if (L < 1) throw std::invalid_argument("gen_irf_weights: L must be at least 1");
  Eigen::VectorXd raw(L);
  for (int l = 1; l <= L; ++l) {
    raw[l - 1] = l * std::exp(d * (1.0 - l));
  }
  return IrfTruth{raw / raw.sum()};
}

VmaParams gen_vma_params(const DgpConfig& cfg, RngState& rng) {
  cfg.validate();
  const int M = cfg.M;
  const int L = cfg.L;
  const IrfTruth irf = gen_irf_weights(L, cfg.d);

  // One shared Gamma* block for rows 2..M, scaled per lag by 0.5(L-l)/L.
  Eigen::MatrixXd gamma_star(M - 1, M);
  for (int i = 0; i < M - 1; ++i) {
    for (int j = 0; j < M; ++j) gamma_star(i, j) = rng.normal();
  }

  std::vector<Eigen::MatrixXd> gammas(L, Eigen::MatrixXd::Zero(M, M));
  for (int l = 1; l <= L; ++l) {
    gammas[l - 1].bottomRows(M - 1) = (0.5 * (L - l) / L) * gamma_star;
  }
  for (int i = 1; i < M; ++i) {
    gammas[0](i, i) = rng.uniform01();
  }
  for (int l = 1; l <= L; ++l) {
    gammas[l - 1](1, 0) = irf.values[l - 1];
    gammas[l - 1].row(0).setZero();
  }

  const double omega_1 = sample_inverse_gamma(1.0, 1.0, rng);
  const SpdMatrix omega_star =
      sample_inverse_wishart(2.0, SpdMatrix(Eigen::MatrixXd::Identity(M - 1, M - 1)), rng);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(M, M);
  omega(0, 0) = omega_1;
  omega.bottomRightCorner(M - 1, M - 1) = omega_star.mat();

  VmaParams params{std::move(gammas), SpdMatrix(omega)};
  params.validate();
  return params;
}

SeriesData simulate_vma(const VmaParams& params, const DgpConfig& cfg, RngState& rng) {
  cfg.validate();
  params.validate();
  if (params.var_count() != cfg.M || params.order() != cfg.L) {
    throw std::invalid_argument("simulate_vma: params and config dimensions disagree");
  }
  const int n_obs = cfg.T + cfg.H;
  const int n_shocks = n_obs + cfg.L;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(cfg.M);

  SeriesData series;
  series.config = cfg;
  series.eps.resize(n_shocks, cfg.M);
  for (int r = 0; r < n_shocks; ++r) {
    series.eps.row(r) = sample_mvn(zero, params.omega, rng).transpose();
  }
  series.w.resize(n_obs, cfg.M);
  for (int t = 0; t < n_obs; ++t) {
    Eigen::VectorXd value = series.eps.row(t + cfg.L).transpose();
    for (int l = 1; l <= cfg.L; ++l) {
      value += params.gammas[l - 1] * series.eps.row(t + cfg.L - l).transpose();
    }
    series.w.row(t) = value.transpose();
  }
  return series;
}

void write_series_csv(const SeriesData& series, const std::string& path) {
  CsvTable table;
  table.header.push_back("t");
  for (int j = 1; j <= series.w.cols(); ++j) {
    table.header.push_back("w_" + std::to_string(j));
  }
  for (Eigen::Index t = 0; t < series.w.rows(); ++t) {
    std::vector<std::string> row;
    row.push_back(std::to_string(t + 1));
    for (Eigen::Index j = 0; j < series.w.cols(); ++j) {
      row.push_back(format_double(series.w(t, j)));
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

SeriesData read_series_csv(const std::string& path, const DgpConfig& cfg) {
  const CsvTable table = read_csv(path);
  const int n_cols = static_cast<int>(table.header.size()) - 1;
  if (n_cols != cfg.M) {
    throw std::runtime_error("read_series_csv: expected " + std::to_string(cfg.M) +
                             " series columns in " + path);
  }
  const int n_rows = static_cast<int>(table.rows.size());
  if (n_rows != cfg.T + cfg.H) {
    throw std::runtime_error("read_series_csv: expected " + std::to_string(cfg.T + cfg.H) +
                             " observations in " + path);
  }
  SeriesData series;
  series.config = cfg;
  series.w.resize(n_rows, n_cols);
  series.eps.resize(0, n_cols);
  for (int r = 0; r < n_rows; ++r) {
    for (int j = 0; j < n_cols; ++j) {
      series.w(r, j) = parse_double(table.rows[r][j + 1]);
    }
  }
  return series;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const auto n_rows = rows.size();
  const auto n_cols = rows.at(0).size();
  Eigen::MatrixXd m(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  }
  return m;
}

}  // namespace

void write_params_json(const VmaParams& params, const DgpConfig& cfg, const std::string& path) {
  nlohmann::json doc;
  doc["config"] = {{"M", cfg.M}, {"L", cfg.L}, {"H", cfg.H},
                   {"T", cfg.T}, {"d", cfg.d}, {"seed", cfg.seed}};
  doc["gammas"] = nlohmann::json::array();
  for (const auto& g : params.gammas) doc["gammas"].push_back(matrix_to_json(g));
  doc["omega"] = matrix_to_json(params.omega.mat());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_params_json: cannot open " + path);
  out << doc.dump(2) << '\n';
}

VmaParams read_params_json(const std::string& path, DgpConfig* cfg_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_params_json: cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  if (cfg_out != nullptr) {
    const auto& c = doc.at("config");
    cfg_out->M = c.at("M").get<int>();
    cfg_out->L = c.at("L").get<int>();
    cfg_out->H = c.at("H").get<int>();
    cfg_out->T = c.at("T").get<int>();
    cfg_out->d = c.at("d").get<double>();
    cfg_out->seed = c.at("seed").get<std::uint64_t>();
  }
  std::vector<Eigen::MatrixXd> gammas;
  for (const auto& g : doc.at("gammas")) gammas.push_back(matrix_from_json(g));
  VmaParams params{std::move(gammas), SpdMatrix(matrix_from_json(doc.at("omega")))};
  params.validate();
  return params;
}

}  // namespace lpsur
