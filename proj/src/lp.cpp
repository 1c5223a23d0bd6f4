#include "lpsur/lp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lpsur/csv.hpp"

namespace lpsur {

namespace {

Eigen::VectorXd basis_vector(int m, int M) {
  if (m < 1 || m > M) {
    throw std::invalid_argument("variable index m must lie in 1..M");
  }
  Eigen::VectorXd iota = Eigen::VectorXd::Zero(M);
  iota[m - 1] = 1.0;
  return iota;
}

void check_phi(const PhiFirstLag& phi, int m) {
  if (phi.vectors.empty()) {
    throw std::invalid_argument("PhiFirstLag: needs at least the h=0 selector vector");
  }
  const int M = phi.var_count();
  for (const auto& v : phi.vectors) {
    if (v.size() != M) {
      throw std::invalid_argument("PhiFirstLag: vectors must share one length");
    }
  }
  if (phi.m != m || (phi.vectors[0] - basis_vector(m, M)).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("PhiFirstLag: vector 0 must be the m-th standard basis vector");
  }
}

}  // namespace

PhiFirstLag make_phi_first_lag(const std::vector<Eigen::VectorXd>& phi_1_to_H, int m, int M) {
  PhiFirstLag phi;
  phi.m = m;
  phi.vectors.reserve(phi_1_to_H.size() + 1);
  phi.vectors.push_back(basis_vector(m, M));
  for (const auto& v : phi_1_to_H) {
    if (v.size() != M) {
      throw std::invalid_argument("make_phi_first_lag: vector length must equal M");
    }
    phi.vectors.push_back(v);
  }
  return phi;
}

BarPhi build_bar_phi(const PhiFirstLag& phi) {
  check_phi(phi, phi.m);
  const int H = phi.horizon();
  const int M = phi.var_count();
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(H + 1, M * (H + 1));
  for (int h = 0; h <= H; ++h) {
    for (int j = 0; j <= h; ++j) {
      rows.block(h, M * j, 1, M) = phi.vectors[h - j].transpose();
    }
  }
  return BarPhi{std::move(rows)};
}

LpDesign build_design(const SeriesData& series, int m, int L, int H) {
  const int M = static_cast<int>(series.w.cols());
  const int n_obs = static_cast<int>(series.w.rows());
  if (m < 1 || m > M) {
    throw std::invalid_argument("build_design: target variable index out of range");
  }
  if (L < 1 || H < 0) {
    throw std::invalid_argument("build_design: need L >= 1 and H >= 0");
  }
  const int T = n_obs - H;
  const int t_eff = T - L;
  const int K = M * L + 1;
  if (t_eff < K + 1) {
    throw std::invalid_argument("build_design: series too short, needs T - L >= K + 1 usable rows");
  }

  LpDesign design;
  design.m = m;
  design.H = H;
  design.L = L;
  design.M = M;
  design.T = T;
  design.Y.resize(t_eff, H + 1);
  design.X.resize(t_eff, K);
  // Row i corresponds to calendar time t = L + 1 + i (1-based).
  for (int i = 0; i < t_eff; ++i) {
    const int t = L + 1 + i;
    for (int h = 0; h <= H; ++h) {
      design.Y(i, h) = series.w(t + h - 1, m - 1);
    }
    for (int l = 1; l <= L; ++l) {
      design.X.block(i, M * (l - 1), 1, M) = series.w.row(t - l - 1);
    }
    design.X(i, K - 1) = 1.0;
  }
  return design;
}

double log_likelihood(const LpDesign& design, const LpCoeffs& coeffs, const ResidCov& cov) {
  const int n_eq = design.H + 1;
  if (coeffs.theta.rows() != design.k() || coeffs.theta.cols() != n_eq || cov.dim() != n_eq) {
    throw std::invalid_argument("log_likelihood: dimension mismatch");
  }
  const int t_eff = design.t_eff();
  const Eigen::MatrixXd resid = design.Y - design.X * coeffs.theta;
  // Whitened residuals: quadratic form becomes a plain squared norm.
  const Eigen::MatrixXd white = cov.chol_solve_lower(resid.transpose());
  const double quad = white.squaredNorm();
  return -0.5 * n_eq * t_eff * std::log(2.0 * std::numbers::pi) -
         0.5 * t_eff * cov.log_det() - 0.5 * quad;
}

ResidCov analytic_xi(const PhiFirstLag& phi, const SpdMatrix& omega, int m) {
  check_phi(phi, m);
  if (omega.dim() != phi.var_count()) {
    throw std::invalid_argument("analytic_xi: omega dimension must equal M");
  }
  const int H = phi.horizon();
  // Cache Omega phi_h once per horizon.
  std::vector<Eigen::VectorXd> omega_phi(H + 1);
  for (int h = 0; h <= H; ++h) omega_phi[h] = omega.mat() * phi.vectors[h];

  Eigen::MatrixXd xi(H + 1, H + 1);
  for (int i = 0; i <= H; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = 0.0;
      for (int k = 0; k <= j; ++k) {
        sum += phi.vectors[i - k].dot(omega_phi[j - k]);
      }
      xi(i, j) = sum;
      xi(j, i) = sum;
    }
  }
  return ResidCov(std::move(xi));
}

Eigen::MatrixXd dense_xi(const BarPhi& bar_phi, const SpdMatrix& omega) {
  const int M = omega.dim();
  const int n_eq = static_cast<int>(bar_phi.rows.rows());
  if (bar_phi.rows.cols() != static_cast<Eigen::Index>(M) * n_eq) {
    throw std::invalid_argument("dense_xi: BarPhi and omega dimensions disagree");
  }
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(M * n_eq, M * n_eq);
  for (int b = 0; b < n_eq; ++b) {
    kron.block(b * M, b * M, M, M) = omega.mat();
  }
  return bar_phi.rows * kron * bar_phi.rows.transpose();
}

Eigen::VectorXd lp_residual_realization(const Eigen::MatrixXd& shock_window,
                                        const PhiFirstLag& phi) {
  const int H = phi.horizon();
  if (shock_window.rows() != H + 1 || shock_window.cols() != phi.var_count()) {
    throw std::invalid_argument("lp_residual_realization: shock window must be (H+1) x M");
  }
  Eigen::VectorXd e(H + 1);
  for (int h = 0; h <= H; ++h) {
    double value = phi.vectors[0].dot(shock_window.row(h));
    for (int i = 1; i <= h; ++i) {
      value += phi.vectors[i].dot(shock_window.row(h - i));
    }
    e[h] = value;
  }
  return e;
}

PhiFirstLag phi_from_gamma(const VmaParams& params, int m, int H) {
  params.validate();
  const int M = params.var_count();
  const int L = params.order();
  PhiFirstLag phi;
  phi.m = m;
  phi.vectors.reserve(H + 1);
  phi.vectors.push_back(basis_vector(m, M));
  for (int h = 1; h <= H; ++h) {
    phi.vectors.push_back(h <= L ? Eigen::VectorXd(params.gammas[h - 1].row(m - 1).transpose())
                                 : Eigen::VectorXd(Eigen::VectorXd::Zero(M)));
  }
  return phi;
}

void write_design_csv(const LpDesign& design, const std::string& path) {
  CsvTable table;
  for (int h = 0; h <= design.H; ++h) {
    table.header.push_back("y_" + std::to_string(h));
  }
  for (int l = 1; l <= design.L; ++l) {
    for (int v = 1; v <= design.M; ++v) {
      table.header.push_back("x_l" + std::to_string(l) + "_v" + std::to_string(v));
    }
  }
  table.header.push_back("const");
  for (int i = 0; i < design.t_eff(); ++i) {
    std::vector<std::string> row;
    for (int h = 0; h <= design.H; ++h) row.push_back(format_double(design.Y(i, h)));
    for (int j = 0; j < design.k(); ++j) row.push_back(format_double(design.X(i, j)));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

}  // namespace lpsur
