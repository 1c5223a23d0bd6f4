#include "lpsur/estimators.hpp"

#include <sstream>
#include <stdexcept>

namespace lpsur {

namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> full_rank_qr(const Eigen::MatrixXd& x) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    // Columns permuted so that the dependent ones come last; report the
    // first original column that fell out of the basis.
    const auto& perm = qr.colsPermutation().indices();
    std::ostringstream msg;
    msg << "regressor matrix is rank deficient (rank " << qr.rank() << " of " << x.cols()
        << "; first dependent column " << perm[static_cast<int>(qr.rank())] << ")";
    throw std::runtime_error(msg.str());
  }
  return qr;
}

}  // namespace

LpCoeffs ols_coefficients(const LpDesign& design) {
  return LpCoeffs{full_rank_qr(design.X).solve(design.Y)};
}

LpEstimate ols_estimate(const LpDesign& design) {
  LpCoeffs coeffs = ols_coefficients(design);
  Eigen::MatrixXd resid = design.Y - design.X * coeffs.theta;
  ResidCov sigma = residual_cov(resid);
  return LpEstimate{std::move(coeffs), std::move(sigma), std::move(resid), 1, true};
}

ResidCov residual_cov(const Eigen::MatrixXd& residuals) {
  const int t_eff = static_cast<int>(residuals.rows());
  const int n_eq = static_cast<int>(residuals.cols());
  if (t_eff < n_eq) {
    throw std::invalid_argument("residual_cov: needs at least H + 1 rows");
  }
  Eigen::MatrixXd s = residuals.transpose() * residuals / static_cast<double>(t_eff);
  try {
    return ResidCov(std::move(s));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("residual_cov: collinear residuals: ") + e.what());
  }
}

LpEstimate fgls_estimate(const LpDesign& design, int max_iter, double tol) {
  if (max_iter < 1) {
    throw std::invalid_argument("fgls_estimate: max_iter must be at least 1");
  }
  LpEstimate est = ols_estimate(design);
  const auto qr = full_rank_qr(design.X);

  for (int iter = 2; iter <= max_iter; ++iter) {
    // GLS step given Sigma: whiten the equation dimension with the lower
    // Cholesky factor L of Sigma, regress Y L^-T on X, map back by L^T.
    const Eigen::MatrixXd& chol = est.sigma.chol_lower();
    const Eigen::MatrixXd y_white =
        chol.triangularView<Eigen::Lower>().solve(design.Y.transpose()).transpose();
    Eigen::MatrixXd theta = qr.solve(y_white) * chol.transpose();

    const double change = (theta - est.coeffs.theta).cwiseAbs().maxCoeff();
    const double scale = est.coeffs.theta.cwiseAbs().maxCoeff();
    est.coeffs.theta = std::move(theta);
    est.residuals = design.Y - design.X * est.coeffs.theta;
    est.sigma = residual_cov(est.residuals);
    est.iterations = iter;
    if (change <= tol * std::max(scale, 1.0)) {
      est.converged = true;
      return est;
    }
    est.converged = false;
  }
  return est;
}

}  // namespace lpsur
