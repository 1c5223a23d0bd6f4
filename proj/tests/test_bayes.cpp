#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "lpsur/bayes.hpp"
#include "lpsur/dgp.hpp"
#include "lpsur/estimators.hpp"
#include "lpsur/lp.hpp"
#include "lpsur/samplers.hpp"

using lpsur::GibbsConfig;
using lpsur::LpCoeffs;
using lpsur::LpDesign;
using lpsur::PosteriorDraws;
using lpsur::ResidCov;
using lpsur::RngState;
using lpsur::SpdMatrix;

namespace {

LpDesign random_design(int t_eff, int k, int n_eq, RngState& rng) {
  LpDesign design;
  design.H = n_eq - 1;
  design.L = 1;
  design.M = std::max(1, k - 1);
  design.T = t_eff + 1;
  design.X.resize(t_eff, k);
  design.Y.resize(t_eff, n_eq);
  for (int i = 0; i < t_eff; ++i) {
    for (int j = 0; j < k - 1; ++j) design.X(i, j) = rng.normal();
    design.X(i, k - 1) = 1.0;
    for (int j = 0; j < n_eq; ++j) design.Y(i, j) = rng.normal();
  }
  return design;
}

SpdMatrix random_spd(int dim, RngState& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
  }
  return SpdMatrix(Eigen::MatrixXd(a * a.transpose() / dim +
                                   0.5 * Eigen::MatrixXd::Identity(dim, dim)));
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Dense conditional mean m = P^-1 (Sigma^-1 x X^T) vec(Y), P = Sigma^-1 x X^T X.
Eigen::VectorXd dense_conditional_mean(const LpDesign& design, const SpdMatrix& sigma) {
  const Eigen::MatrixXd sigma_inv = sigma.inverse();
  const Eigen::MatrixXd p =
      kron(sigma_inv, Eigen::MatrixXd(design.X.transpose() * design.X));
  Eigen::VectorXd vec_y(design.Y.size());
  for (Eigen::Index j = 0; j < design.Y.cols(); ++j) {
    vec_y.segment(j * design.Y.rows(), design.Y.rows()) = design.Y.col(j);
  }
  const Eigen::MatrixXd rhs = kron(sigma_inv, Eigen::MatrixXd(design.X.transpose()));
  return p.ldlt().solve(rhs * vec_y);
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("theta conditional: dense Kronecker mean equals the OLS solution") {
  RngState rng(1, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const int n_eq = 2 + rep % 3;
    const LpDesign design = random_design(25 + rep, 4, n_eq, rng);
    const SpdMatrix sigma = random_spd(n_eq, rng);
    const Eigen::MatrixXd theta_ols = lpsur::ols_coefficients(design).theta;
    const Eigen::VectorXd m = dense_conditional_mean(design, sigma);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < theta_ols.cols(); ++j) {
      worst = std::max(
          worst,
          (m.segment(j * theta_ols.rows(), theta_ols.rows()) - theta_ols.col(j))
              .cwiseAbs()
              .maxCoeff());
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("theta conditional: empirical mean recovers OLS at fixed sigma") {
  RngState rng(2, 0);
  const LpDesign design = random_design(30, 3, 2, rng);
  const SpdMatrix sigma = random_spd(2, rng);
  const Eigen::MatrixXd theta_ols = lpsur::ols_coefficients(design).theta;

  const int n = 100000;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 2);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(3, 2);
  RngState draw_rng(2, 1);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd t = lpsur::draw_theta_conditional(sigma, design, draw_rng).theta;
    sum += t;
    sum_sq += t.cwiseProduct(t);
  }
  const Eigen::MatrixXd mean = sum / n;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double var = sum_sq(i, j) / n - mean(i, j) * mean(i, j);
      const double se = std::sqrt(var / n);
      CHECK(std::abs(mean(i, j) - theta_ols(i, j)) <= 3.0 * se);
    }
  }
}

TEST_CASE("theta conditional: draw path matches the dense N(m, P^-1) path") {
  RngState rng(3, 0);
  const int k = 3, n_eq = 2;
  const LpDesign design = random_design(12, k, n_eq, rng);
  const SpdMatrix sigma = random_spd(n_eq, rng);

  RngState rng_a(99, 4);
  const Eigen::MatrixXd draw = lpsur::draw_theta_conditional(sigma, design, rng_a).theta;

  // Replay the same normals through the dense Kronecker route.
  RngState rng_b(99, 4);
  Eigen::MatrixXd z(k, n_eq);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n_eq; ++j) z(i, j) = rng_b.normal();
  }
  Eigen::VectorXd vec_z(k * n_eq);
  for (int j = 0; j < n_eq; ++j) vec_z.segment(j * k, k) = z.col(j);

  const Eigen::MatrixXd xtx = design.X.transpose() * design.X;
  const Eigen::LLT<Eigen::MatrixXd> llt(xtx);
  const Eigen::MatrixXd u = llt.matrixU();
  const Eigen::MatrixXd lx =
      u.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd root = kron(sigma.chol_lower(), lx);

  // The dense root reproduces P^-1 = Sigma x (X^T X)^-1.
  const Eigen::MatrixXd p = kron(sigma.inverse(), xtx);
  CHECK((root * root.transpose() - Eigen::MatrixXd(p.inverse())).cwiseAbs().maxCoeff() <=
        1e-10);

  const Eigen::VectorXd vec_draw = dense_conditional_mean(design, sigma) + root * vec_z;
  double worst = 0.0;
  for (int j = 0; j < n_eq; ++j) {
    worst = std::max(worst,
                     (vec_draw.segment(j * k, k) - draw.col(j)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("theta conditional: vec covariance matches Sigma x (X^T X)^-1") {
  RngState rng(5, 0);
  const int k = 2, n_eq = 2;
  const LpDesign design = random_design(20, k, n_eq, rng);
  const SpdMatrix sigma = random_spd(n_eq, rng);
  const Eigen::MatrixXd target =
      kron(sigma.mat(), Eigen::MatrixXd((design.X.transpose() * design.X).inverse()));
  const Eigen::MatrixXd theta_ols = lpsur::ols_coefficients(design).theta;

  const int n = 100000;
  const int dim = k * n_eq;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(dim, dim);
  RngState draw_rng(5, 1);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd t = lpsur::draw_theta_conditional(sigma, design, draw_rng).theta;
    Eigen::VectorXd v(dim);
    for (int j = 0; j < n_eq; ++j) v.segment(j * k, k) = t.col(j) - theta_ols.col(j);
    const Eigen::MatrixXd outer = v * v.transpose();
    sum += outer;
    sum_sq += outer.cwiseProduct(outer);
  }
  const Eigen::MatrixXd emp = sum / n;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double var = sum_sq(i, j) / n - emp(i, j) * emp(i, j);
      const double se = std::sqrt(var / n);
      CHECK(std::abs(emp(i, j) - target(i, j)) <= 3.0 * se);
    }
  }
}

TEST_CASE("sigma conditional: inverse Wishart mean at fixed theta") {
  RngState rng(7, 0);
  const int n_eq = 2;
  const LpDesign design = random_design(30, 3, n_eq, rng);
  const LpCoeffs theta = lpsur::ols_coefficients(design);
  const Eigen::MatrixXd resid = design.Y - design.X * theta.theta;
  const Eigen::MatrixXd sse = resid.transpose() * resid;
  const double t_eff = design.t_eff();
  const Eigen::MatrixXd target = sse / (t_eff - n_eq - 1);

  const int n = 100000;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n_eq, n_eq);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n_eq, n_eq);
  RngState draw_rng(7, 1);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd s = lpsur::draw_sigma_conditional(theta, design, draw_rng).mat();
    sum += s;
    sum_sq += s.cwiseProduct(s);
  }
  const Eigen::MatrixXd mean = sum / n;
  for (int i = 0; i < n_eq; ++i) {
    for (int j = 0; j < n_eq; ++j) {
      const double var = sum_sq(i, j) / n - mean(i, j) * mean(i, j);
      const double se = std::sqrt(var / n);
      CHECK(std::abs(mean(i, j) - target(i, j)) <= 3.0 * se);
    }
  }
}

TEST_CASE("sigma conditional at H=0 reduces to the inverse gamma") {
  RngState rng(11, 0);
  const LpDesign design = random_design(40, 3, 1, rng);
  const LpCoeffs theta = lpsur::ols_coefficients(design);
  const Eigen::MatrixXd resid = design.Y - design.X * theta.theta;
  const double sse = (resid.transpose() * resid)(0, 0);
  const double t_eff = design.t_eff();

  const int n = 10000;
  std::vector<double> iw_draws(n), ig_draws(n);
  RngState rng_a(11, 1), rng_b(11, 2);
  for (int i = 0; i < n; ++i) {
    iw_draws[i] = lpsur::draw_sigma_conditional(theta, design, rng_a).mat()(0, 0);
    ig_draws[i] = lpsur::sample_inverse_gamma(t_eff / 2.0, sse / 2.0, rng_b);
  }
  const double d = ks_statistic(iw_draws, ig_draws);
  const double crit = 1.628 * std::sqrt(2.0 / n);  // alpha = 0.01
  CHECK(d < crit);
}

TEST_CASE("gibbs: determinism and bookkeeping") {
  RngState rng(13, 0);
  const LpDesign design = random_design(60, 4, 3, rng);
  GibbsConfig cfg;
  cfg.n_draws = 200;
  cfg.n_burn = 50;

  RngState a(13, 1), b(13, 1);
  const PosteriorDraws da = lpsur::run_gibbs(design, cfg, a);
  const PosteriorDraws db = lpsur::run_gibbs(design, cfg, b);
  REQUIRE(da.count() == 150);
  REQUIRE(db.count() == 150);
  for (int i = 0; i < da.count(); ++i) {
    CHECK((da.theta_draws[i] - db.theta_draws[i]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((da.sigma_draws[i] - db.sigma_draws[i]).cwiseAbs().maxCoeff() == 0.0);
  }

  GibbsConfig bad;
  bad.n_burn = bad.n_draws;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("gibbs: posterior mean of theta tracks OLS within 3 NSE") {
  lpsur::DgpConfig dgp;
  dgp.seed = 20;
  RngState prng(20, 0);
  const auto params = lpsur::gen_vma_params(dgp, prng);
  RngState srng(20, 1);
  const auto series = lpsur::simulate_vma(params, dgp, srng);
  const LpDesign design = lpsur::build_design(series, 2, dgp.L, dgp.H);
  const Eigen::MatrixXd theta_ols = lpsur::ols_coefficients(design).theta;

  GibbsConfig cfg;
  cfg.n_draws = 3000;
  cfg.n_burn = 500;
  RngState rng(20, 2);
  const PosteriorDraws draws = lpsur::run_gibbs(design, cfg, rng);
  const auto summary = lpsur::posterior_summary(draws);

  for (int l = 0; l < dgp.L; ++l) {
    Eigen::VectorXd chain(draws.count());
    for (int i = 0; i < draws.count(); ++i) chain[i] = draws.theta_draws[i](0, l);
    const double nse = lpsur::numerical_std_error(chain);
    CHECK(std::abs(summary.theta_mean(0, l) - theta_ols(0, l)) <= 3.0 * nse);
  }

  // All monitored chains pass the Geweke test on this seed.
  Eigen::MatrixXd chains(draws.count(), dgp.L + dgp.H + 1);
  for (int i = 0; i < draws.count(); ++i) {
    for (int l = 0; l < dgp.L; ++l) chains(i, l) = draws.theta_draws[i](0, l);
    for (int j = 0; j <= dgp.H; ++j) chains(i, dgp.L + j) = draws.sigma_draws[i](j, j);
  }
  const auto geweke = lpsur::geweke_test_all(chains);
  CHECK(geweke.all_pass());
}

TEST_CASE("geweke: constant chain and argument validation") {
  const Eigen::VectorXd constant = Eigen::VectorXd::Constant(500, 2.5);
  const auto result = lpsur::geweke_test(constant);
  CHECK(result.z_scores[0] == 0.0);
  CHECK(result.pass[0]);

  CHECK_THROWS_AS(lpsur::geweke_test(Eigen::VectorXd::Zero(50)), std::invalid_argument);
  CHECK_THROWS_AS(lpsur::geweke_test(constant, 0.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lpsur::geweke_test(constant, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("geweke: quick size and power sanity") {
  RngState rng(17, 0);
  int passes = 0;
  const int reps = 60;
  for (int r = 0; r < reps; ++r) {
    Eigen::VectorXd chain(2000);
    for (int i = 0; i < 2000; ++i) chain[i] = rng.normal();
    if (lpsur::geweke_test(chain).pass[0]) ++passes;
  }
  CHECK(passes >= 50);  // ~95% expected under the null

  int rejects = 0;
  for (int r = 0; r < 20; ++r) {
    Eigen::VectorXd chain(2000);
    for (int i = 0; i < 2000; ++i) {
      chain[i] = static_cast<double>(i) / 2000 + 0.1 * rng.normal();
    }
    if (!lpsur::geweke_test(chain).pass[0]) ++rejects;
  }
  CHECK(rejects == 20);
}

TEST_CASE("normal quantile: reference points") {
  CHECK(lpsur::normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-7));
  CHECK(lpsur::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lpsur::normal_quantile(0.05) == doctest::Approx(-1.644853627).epsilon(1e-7));
  CHECK(lpsur::normal_quantile(0.001) == doctest::Approx(-3.090232306).epsilon(1e-6));
}

TEST_CASE("posterior summary: single and constant draws") {
  PosteriorDraws draws;
  draws.config.n_draws = 2;
  draws.config.n_burn = 1;
  Eigen::MatrixXd theta(2, 1);
  theta << 1.0, -2.0;
  Eigen::MatrixXd sigma(1, 1);
  sigma << 3.0;
  draws.theta_draws.push_back(theta);
  draws.sigma_draws.push_back(sigma);
  const auto single = lpsur::posterior_summary(draws);
  CHECK(single.theta_mean(0, 0) == 1.0);
  CHECK(single.theta_q05(1, 0) == -2.0);
  CHECK(single.theta_q95(1, 0) == -2.0);
  CHECK(single.sigma_mean(0, 0) == 3.0);

  for (int i = 0; i < 9; ++i) {
    draws.theta_draws.push_back(theta);
    draws.sigma_draws.push_back(sigma);
  }
  const auto constant = lpsur::posterior_summary(draws);
  CHECK(constant.theta_mean(0, 0) == 1.0);
  CHECK(constant.sigma_q05(0, 0) == 3.0);
  CHECK(constant.sigma_q95(0, 0) == 3.0);

  PosteriorDraws empty;
  CHECK_THROWS_AS(lpsur::posterior_summary(empty), std::invalid_argument);
}
