#ifndef LPSUR_SAMPLERS_HPP
#define LPSUR_SAMPLERS_HPP

#include <Eigen/Dense>

#include "lpsur/rng.hpp"
#include "lpsur/spd.hpp"

namespace lpsur {

// n independent standard normal draws; n = 0 yields an empty vector.
Eigen::VectorXd sample_std_normal(int n, RngState& rng);

// Draw from N(mean, cov) through the lower Cholesky factor of cov.
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const SpdMatrix& cov, RngState& rng);

// Inverse gamma in shape-scale form: density proportional to
// x^(-shape-1) exp(-scale/x), mean scale/(shape-1) for shape > 1.
double sample_inverse_gamma(double shape, double scale, RngState& rng);

// Inverse Wishart with density proportional to
// |S|^(-(df+dim+1)/2) exp(-tr(scale S^-1)/2); E[S] = scale/(df-dim-1).
// Implemented as a Bartlett-decomposition Wishart draw on scale^-1,
// followed by inversion. Requires df > dim - 1.
SpdMatrix sample_inverse_wishart(double df, const SpdMatrix& scale, RngState& rng);

}  // namespace lpsur

#endif  // LPSUR_SAMPLERS_HPP
