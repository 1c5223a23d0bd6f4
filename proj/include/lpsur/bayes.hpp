#ifndef LPSUR_BAYES_HPP
#define LPSUR_BAYES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lpsur/estimators.hpp"
#include "lpsur/lp.hpp"
#include "lpsur/rng.hpp"

namespace lpsur {

struct GibbsConfig {
  int n_draws = 11000;      // total sweeps
  int n_burn = 1000;        // discarded prefix
  std::uint64_t seed = 0;
  std::string init = "ols";

  void validate() const;
};

struct PosteriorDraws {
  std::vector<Eigen::MatrixXd> theta_draws;  // K x (H+1) each
  std::vector<Eigen::MatrixXd> sigma_draws;  // (H+1) x (H+1) each, SPD
  GibbsConfig config;

  int count() const { return static_cast<int>(theta_draws.size()); }
};

struct GewekeResult {
  std::vector<double> z_scores;
  std::vector<bool> pass;
  double frac_a = 0.1;
  double frac_b = 0.5;
  double alpha = 0.05;

  bool all_pass() const;
};

struct PosteriorSummary {
  Eigen::MatrixXd theta_mean, theta_q05, theta_q95;
  Eigen::MatrixXd sigma_mean, sigma_q05, sigma_q95;
};

// Conditional posterior of the coefficients under the flat prior:
// vec(Theta) | Sigma ~ N(vec(Theta_ols), Sigma ⊗ (X^T X)^-1), drawn in
// matrix-variate form Theta_ols + L_X Z L_Sigma^T without forming the
// K(H+1)-square precision.
LpCoeffs draw_theta_conditional(const ResidCov& sigma, const LpDesign& design, RngState& rng);

// Sigma | Theta ~ IW(T_eff, (Y - X Theta)^T (Y - X Theta)).
ResidCov draw_sigma_conditional(const LpCoeffs& coeffs, const LpDesign& design, RngState& rng);

// Gibbs sampler for (Theta, Sigma): initialize at the OLS estimates, then
// alternate the Sigma and Theta conditionals, keeping post-burn draws.
PosteriorDraws run_gibbs(const LpDesign& design, const GibbsConfig& cfg, RngState& rng);

// Geweke (1992) convergence z-test comparing the first frac_a and last
// frac_b chain segments, with spectral zero-frequency variances from
// Bartlett-weighted autocovariances (bandwidth floor(sqrt(n_segment))).
GewekeResult geweke_test(const Eigen::VectorXd& chain, double frac_a = 0.1,
                         double frac_b = 0.5, double alpha = 0.05);

// Per-column application; chains stacked as columns.
GewekeResult geweke_test_all(const Eigen::MatrixXd& chains, double frac_a = 0.1,
                             double frac_b = 0.5, double alpha = 0.05);

// Entrywise means and central 90% intervals (empirical 5%/95% quantiles).
PosteriorSummary posterior_summary(const PosteriorDraws& draws);

// Spectral density at frequency zero (Bartlett kernel) and the implied
// numerical standard error of the chain mean.
double spectral_density_zero(const Eigen::VectorXd& segment);
double numerical_std_error(const Eigen::VectorXd& chain);

// Two-sided standard normal quantile used for the Geweke pass threshold.
double normal_quantile(double p);

// Chain export: draw index plus flattened theta and sigma columns.
void write_chains_csv(const PosteriorDraws& draws, const std::string& path);

}  // namespace lpsur

#endif  // LPSUR_BAYES_HPP
