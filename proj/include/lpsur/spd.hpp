#ifndef LPSUR_SPD_HPP
#define LPSUR_SPD_HPP

#include <Eigen/Dense>

namespace lpsur {

// Symmetric positive definite matrix with a cached lower Cholesky factor.
//
// Construction enforces symmetry to 1e-12 relative tolerance, symmetrizes
// as (S + S^T)/2, and requires the factorization to succeed with every
// squared pivot above an absolute floor of 1e-14. Failure throws; inputs
// are never regularized.
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }

  // Lower-triangular L with L L^T = mat().
  const Eigen::MatrixXd& chol_lower() const { return chol_; }

  double log_det() const;

  // L^-1 b and full inverse via the cached factor.
  Eigen::MatrixXd chol_solve_lower(const Eigen::MatrixXd& b) const;
  Eigen::MatrixXd inverse() const;

  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kPivotFloor = 1e-14;

 private:
  Eigen::MatrixXd mat_;
  Eigen::MatrixXd chol_;
};

}  // namespace lpsur

#endif  // LPSUR_SPD_HPP
