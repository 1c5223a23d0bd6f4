#ifndef LPSUR_LP_HPP
#define LPSUR_LP_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lpsur/dgp.hpp"
#include "lpsur/spd.hpp"

namespace lpsur {

using ResidCov = SpdMatrix;  // (H+1) x (H+1) residual covariance

// Stacked SUR regression data for one endogenous variable. Row t of Y holds
// the responses (w_t^<m>, ..., w_{t+H}^<m>); the matching row of X holds
// (w_{t-1}^T, ..., w_{t-L}^T, 1). Regressors use only information dated
// t-1 or earlier.
struct LpDesign {
  Eigen::MatrixXd Y;  // T_eff x (H+1)
  Eigen::MatrixXd X;  // T_eff x K, K = M*L + 1, intercept last
  int m = 1;          // target variable, 1-based
  int H = 0;
  int L = 1;
  int M = 1;
  int T = 0;  // nominal sample length; T_eff = T - L

  int t_eff() const { return static_cast<int>(Y.rows()); }
  int k() const { return static_cast<int>(X.cols()); }
};

struct LpCoeffs {
  Eigen::MatrixXd theta;  // K x (H+1), column h = theta_(h)
};

// First-lag LP coefficient vectors. Index 0 is the selector iota_m by
// convention; indices 1..H are phi_(h),1 for the target variable.
struct PhiFirstLag {
  std::vector<Eigen::VectorXd> vectors;
  int m = 1;

  int horizon() const { return static_cast<int>(vectors.size()) - 1; }
  int var_count() const { return static_cast<int>(vectors.empty() ? 0 : vectors[0].size()); }
};

PhiFirstLag make_phi_first_lag(const std::vector<Eigen::VectorXd>& phi_1_to_H, int m, int M);

// Lower-block-triangular (H+1) x M(H+1) matrix with iota_m^T on the block
// diagonal and phi_(h-j),1^T in block (h, j).
struct BarPhi {
  Eigen::MatrixXd rows;
};

BarPhi build_bar_phi(const PhiFirstLag& phi);

LpDesign build_design(const SeriesData& series, int m, int L, int H);

// Log of the SUR-form likelihood: for residual rows u_t = y_t - Theta^T x_{t-1},
//   -(H+1) T_eff/2 log(2 pi) - T_eff/2 log|Sigma| - 1/2 sum_t u_t^T Sigma^-1 u_t,
// evaluated through the Cholesky factor of Sigma.
double log_likelihood(const LpDesign& design, const LpCoeffs& coeffs, const ResidCov& cov);

// Xi = BarPhi (I ⊗ Omega) BarPhi^T computed blockwise:
//   Xi[i,j] = sum_{k=0..min(i,j)} phi_{i-k}^T Omega phi_{j-k},  phi_0 = iota_m.
// The M(H+1)-square Kronecker product is never materialized.
ResidCov analytic_xi(const PhiFirstLag& phi, const SpdMatrix& omega, int m);

// Dense route for the same quantity, materializing I ⊗ Omega. Kept as the
// algebraic cross-check for the blockwise computation.
Eigen::MatrixXd dense_xi(const BarPhi& bar_phi, const SpdMatrix& omega);

// One stacked residual realization from a window of shocks (eps_t..eps_{t+H}):
//   e_h = sum_{i=1..h} phi_i^T eps_{t+h-i} + iota_m^T eps_{t+h}.
// Brute-force oracle for analytic_xi.
Eigen::VectorXd lp_residual_realization(const Eigen::MatrixXd& shock_window,
                                        const PhiFirstLag& phi);

// Population first-lag coefficients: vector h = m-th row of Gamma_h for
// h <= L, zero beyond the VMA order.
PhiFirstLag phi_from_gamma(const VmaParams& params, int m, int H);

// Header row names the y_h and x_lag_var columns.
void write_design_csv(const LpDesign& design, const std::string& path);

}  // namespace lpsur

#endif  // LPSUR_LP_HPP
