#include "lpsur/spd.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lpsur {

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) : mat_(std::move(entries)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw std::invalid_argument("SpdMatrix: matrix must be square and non-empty");
  }
  const double scale = mat_.cwiseAbs().maxCoeff();
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * std::max(scale, 1.0)) {
    std::ostringstream msg;
    msg << "SpdMatrix: matrix is not symmetric (max asymmetry " << asym << ")";
    throw std::invalid_argument(msg.str());
  }
  mat_ = 0.5 * (mat_ + mat_.transpose().eval());

  Eigen::LLT<Eigen::MatrixXd> llt(mat_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("SpdMatrix: Cholesky factorization failed, matrix is not positive definite");
  }
  chol_ = llt.matrixL();
  const double min_pivot = chol_.diagonal().minCoeff();
  if (!(min_pivot * min_pivot >= kPivotFloor)) {
    std::ostringstream msg;
    msg << "SpdMatrix: smallest Cholesky pivot " << min_pivot * min_pivot
        << " is below the positive-definiteness floor " << kPivotFloor;
    throw std::invalid_argument(msg.str());
  }
}

double SpdMatrix::log_det() const {
  return 2.0 * chol_.diagonal().array().log().sum();
}

Eigen::MatrixXd SpdMatrix::chol_solve_lower(const Eigen::MatrixXd& b) const {
  return chol_.triangularView<Eigen::Lower>().solve(b);
}

Eigen::MatrixXd SpdMatrix::inverse() const {
  const Eigen::MatrixXd linv = chol_solve_lower(Eigen::MatrixXd::Identity(dim(), dim()));
  return linv.transpose() * linv;
}

}  // namespace lpsur
