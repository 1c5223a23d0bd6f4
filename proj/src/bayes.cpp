#include "lpsur/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpsur/csv.hpp"
#include "lpsur/samplers.hpp"

namespace lpsur {

void GibbsConfig::validate() const {
  if (n_draws < 1) throw std::invalid_argument("GibbsConfig: n_draws must be positive");
  if (n_burn < 0 || n_burn >= n_draws) {
    throw std::invalid_argument("GibbsConfig: need 0 <= n_burn < n_draws");
  }
  if (init != "ols") {
    throw std::invalid_argument("GibbsConfig: unknown initialization rule '" + init + "'");
  }
}

bool GewekeResult::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
}

namespace {

struct ThetaDrawContext {
  Eigen::MatrixXd theta_ols;   // K x (H+1)
  Eigen::MatrixXd xtx_chol_u;  // upper factor U with U^T U = X^T X
};

ThetaDrawContext make_theta_context(const LpDesign& design) {
  const LpCoeffs ols = ols_coefficients(design);
  const Eigen::MatrixXd xtx = design.X.transpose() * design.X;
  Eigen::LLT<Eigen::MatrixXd> llt(xtx);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("draw_theta_conditional: X^T X is not positive definite");
  }
  return ThetaDrawContext{ols.theta, llt.matrixU()};
}

LpCoeffs draw_theta_with(const ThetaDrawContext& ctx, const ResidCov& sigma,
                         const LpDesign& design, RngState& rng) {
  const int k = design.k();
  const int n_eq = design.H + 1;
  if (sigma.dim() != n_eq) {
    throw std::invalid_argument("draw_theta_conditional: sigma dimension must be H + 1");
  }
  Eigen::MatrixXd z(k, n_eq);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n_eq; ++j) z(i, j) = rng.normal();
  }
  // L_X Z = U^-1 Z satisfies L_X L_X^T = (X^T X)^-1.
  const Eigen::MatrixXd lx_z = ctx.xtx_chol_u.triangularView<Eigen::Upper>().solve(z);
  return LpCoeffs{ctx.theta_ols + lx_z * sigma.chol_lower().transpose()};
}

}  // namespace

LpCoeffs draw_theta_conditional(const ResidCov& sigma, const LpDesign& design, RngState& rng) {
  return draw_theta_with(make_theta_context(design), sigma, design, rng);
}

ResidCov draw_sigma_conditional(const LpCoeffs& coeffs, const LpDesign& design, RngState& rng) {
  const Eigen::MatrixXd resid = design.Y - design.X * coeffs.theta;
  Eigen::MatrixXd sse = resid.transpose() * resid;
  try {
    return sample_inverse_wishart(design.t_eff(), SpdMatrix(std::move(sse)), rng);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("draw_sigma_conditional: singular SSE: ") + e.what());
  }
}

PosteriorDraws run_gibbs(const LpDesign& design, const GibbsConfig& cfg, RngState& rng) {
  cfg.validate();
  if (design.t_eff() <= design.k() || design.t_eff() <= design.H + 2) {
    throw std::invalid_argument("run_gibbs: needs T_eff > K and T_eff > H + 2");
  }
  const ThetaDrawContext ctx = make_theta_context(design);
  LpCoeffs theta{ctx.theta_ols};

  PosteriorDraws draws;
  draws.config = cfg;
  const int kept = cfg.n_draws - cfg.n_burn;
  draws.theta_draws.reserve(kept);
  draws.sigma_draws.reserve(kept);

  for (int sweep = 0; sweep < cfg.n_draws; ++sweep) {
    try {
      const ResidCov sigma = draw_sigma_conditional(theta, design, rng);
      theta = draw_theta_with(ctx, sigma, design, rng);
      if (sweep >= cfg.n_burn) {
        draws.sigma_draws.push_back(sigma.mat());
        draws.theta_draws.push_back(theta.theta);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("run_gibbs: sweep " + std::to_string(sweep) + " failed: " +
                               e.what());
    }
  }
  return draws;
}

double spectral_density_zero(const Eigen::VectorXd& segment) {
  const int n = static_cast<int>(segment.size());
  if (n < 2) throw std::invalid_argument("spectral_density_zero: segment too short");
  const int bandwidth = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  if (n < bandwidth + 1) {
    throw std::invalid_argument("spectral_density_zero: segment shorter than bandwidth + 1");
  }
  const double mean = segment.mean();
  const Eigen::VectorXd centered = segment.array() - mean;
  double s = centered.squaredNorm() / n;
  for (int lag = 1; lag <= bandwidth; ++lag) {
    const double cov = centered.head(n - lag).dot(centered.tail(n - lag)) / n;
    s += 2.0 * (1.0 - static_cast<double>(lag) / (bandwidth + 1)) * cov;
  }
  return std::max(s, 0.0);
}

double numerical_std_error(const Eigen::VectorXd& chain) {
  return std::sqrt(spectral_density_zero(chain) / static_cast<double>(chain.size()));
}

GewekeResult geweke_test(const Eigen::VectorXd& chain, double frac_a, double frac_b,
                         double alpha) {
  const int n = static_cast<int>(chain.size());
  if (n < 100) throw std::invalid_argument("geweke_test: chain must have at least 100 draws");
  if (!(frac_a > 0.0) || !(frac_b > 0.0) || frac_a + frac_b > 1.0) {
    throw std::invalid_argument("geweke_test: need 0 < frac_a, frac_b with frac_a + frac_b <= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("geweke_test: alpha must lie in (0, 1)");
  }
  const int n_a = static_cast<int>(std::floor(frac_a * n));
  const int n_b = static_cast<int>(std::floor(frac_b * n));
  const Eigen::VectorXd seg_a = chain.head(n_a);
  const Eigen::VectorXd seg_b = chain.tail(n_b);

  const double var_term =
      spectral_density_zero(seg_a) / n_a + spectral_density_zero(seg_b) / n_b;
  // A constant chain has zero spectral mass; define z = 0 and pass.
  const double z = var_term > 0.0 ? (seg_a.mean() - seg_b.mean()) / std::sqrt(var_term) : 0.0;

  GewekeResult result;
  result.frac_a = frac_a;
  result.frac_b = frac_b;
  result.alpha = alpha;
  result.z_scores.push_back(z);
  result.pass.push_back(std::abs(z) <= normal_quantile(1.0 - alpha / 2.0));
  return result;
}

GewekeResult geweke_test_all(const Eigen::MatrixXd& chains, double frac_a, double frac_b,
                             double alpha) {
  GewekeResult result;
  result.frac_a = frac_a;
  result.frac_b = frac_b;
  result.alpha = alpha;
  for (Eigen::Index j = 0; j < chains.cols(); ++j) {
    const GewekeResult one = geweke_test(chains.col(j), frac_a, frac_b, alpha);
    result.z_scores.push_back(one.z_scores[0]);
    result.pass.push_back(one.pass[0]);
  }
  return result;
}

namespace {

double empirical_quantile(std::vector<double>& values, double p) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

void summarize(const std::vector<Eigen::MatrixXd>& draws, Eigen::MatrixXd& mean,
               Eigen::MatrixXd& q05, Eigen::MatrixXd& q95) {
  const Eigen::Index rows = draws[0].rows();
  const Eigen::Index cols = draws[0].cols();
  mean = Eigen::MatrixXd::Zero(rows, cols);
  q05.resize(rows, cols);
  q95.resize(rows, cols);
  for (const auto& d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  std::vector<double> scratch(draws.size());
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < draws.size(); ++k) scratch[k] = draws[k](i, j);
      q05(i, j) = empirical_quantile(scratch, 0.05);
      q95(i, j) = empirical_quantile(scratch, 0.95);
    }
  }
}

}  // namespace

PosteriorSummary posterior_summary(const PosteriorDraws& draws) {
  if (draws.count() == 0) {
    throw std::invalid_argument("posterior_summary: no stored draws");
  }
  PosteriorSummary s;
  summarize(draws.theta_draws, s.theta_mean, s.theta_q05, s.theta_q95);
  summarize(draws.sigma_draws, s.sigma_mean, s.sigma_q05, s.sigma_q95);
  return s;
}

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.2e-9 over (0, 1).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double q, r;
  if (p < p_low) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

void write_chains_csv(const PosteriorDraws& draws, const std::string& path) {
  if (draws.count() == 0) {
    throw std::invalid_argument("write_chains_csv: no stored draws");
  }
  CsvTable table;
  table.header.push_back("draw");
  const auto& theta0 = draws.theta_draws[0];
  const auto& sigma0 = draws.sigma_draws[0];
  for (Eigen::Index i = 0; i < theta0.rows(); ++i) {
    for (Eigen::Index j = 0; j < theta0.cols(); ++j) {
      table.header.push_back("theta_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  for (Eigen::Index i = 0; i < sigma0.rows(); ++i) {
    for (Eigen::Index j = 0; j < sigma0.cols(); ++j) {
      table.header.push_back("sigma_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  for (int k = 0; k < draws.count(); ++k) {
    std::vector<std::string> row;
    row.push_back(std::to_string(k));
    const auto& th = draws.theta_draws[k];
    for (Eigen::Index i = 0; i < th.rows(); ++i) {
      for (Eigen::Index j = 0; j < th.cols(); ++j) row.push_back(format_double(th(i, j)));
    }
    const auto& sg = draws.sigma_draws[k];
    for (Eigen::Index i = 0; i < sg.rows(); ++i) {
      for (Eigen::Index j = 0; j < sg.cols(); ++j) row.push_back(format_double(sg(i, j)));
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

}  // namespace lpsur
