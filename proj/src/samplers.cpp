#include "lpsur/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace lpsur {

namespace {

// Marsaglia-Tsang, unit scale. Handles shape < 1 by boosting.
double sample_gamma(double shape, RngState& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform01();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_chisq(double df, RngState& rng) {
  return 2.0 * sample_gamma(0.5 * df, rng);
}

}  // namespace

Eigen::VectorXd sample_std_normal(int n, RngState& rng) {
  if (n < 0) {
    throw std::invalid_argument("sample_std_normal: n must be non-negative");
  }
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.normal();
  return z;
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const SpdMatrix& cov, RngState& rng) {
  if (mean.size() != cov.dim()) {
    throw std::invalid_argument("sample_mvn: mean and covariance dimensions disagree");
  }
  return mean + cov.chol_lower() * sample_std_normal(cov.dim(), rng);
}

double sample_inverse_gamma(double shape, double scale, RngState& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("sample_inverse_gamma: shape and scale must be positive");
  }
  return scale / sample_gamma(shape, rng);
}

SpdMatrix sample_inverse_wishart(double df, const SpdMatrix& scale, RngState& rng) {
  const int p = scale.dim();
  if (!(df > p - 1)) {
    throw std::invalid_argument("sample_inverse_wishart: need df > dim - 1");
  }
  // Bartlett factor of a Wishart(df, scale^-1) draw.
  const SpdMatrix scale_inv(scale.inverse());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(sample_chisq(df - i, rng));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const Eigen::MatrixXd la = scale_inv.chol_lower() * a;
  // S = ((LA)(LA)^T)^-1 computed from the triangular inverse.
  const Eigen::MatrixXd la_inv =
      la.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd s = la_inv.transpose() * la_inv;
  return SpdMatrix(0.5 * (s + s.transpose().eval()));
}

}  // namespace lpsur
