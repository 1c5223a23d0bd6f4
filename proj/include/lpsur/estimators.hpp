#ifndef LPSUR_ESTIMATORS_HPP
#define LPSUR_ESTIMATORS_HPP

#include <Eigen/Dense>

#include "lpsur/lp.hpp"

namespace lpsur {

struct LpEstimate {
  LpCoeffs coeffs;
  ResidCov sigma;
  Eigen::MatrixXd residuals;  // T_eff x (H+1), Y - X theta
  int iterations = 1;
  bool converged = true;
};

// Theta = (X^T X)^-1 X^T Y via column-pivoted QR; rejects rank-deficient X.
// The coefficient solve alone is exposed for callers that work with exactly
// interpolating designs, where the residual covariance is degenerate.
LpCoeffs ols_coefficients(const LpDesign& design);
LpEstimate ols_estimate(const LpDesign& design);

// Sigma = residuals^T residuals / T_eff (no degrees-of-freedom correction).
ResidCov residual_cov(const Eigen::MatrixXd& residuals);

// First step OLS, then alternate the GLS coefficient update given Sigma
// with the residual covariance update until vec(theta) settles. With a
// common regressor matrix across equations the GLS step reproduces OLS,
// so convergence arrives at iteration 2.
LpEstimate fgls_estimate(const LpDesign& design, int max_iter = 10, double tol = 1e-8);

}  // namespace lpsur

#endif  // LPSUR_ESTIMATORS_HPP
