#ifndef LPSUR_DGP_HPP
#define LPSUR_DGP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lpsur/rng.hpp"
#include "lpsur/samplers.hpp"

namespace lpsur {

struct DgpConfig {
  int M = 3;          // variable count
  int L = 5;          // VMA order
  int H = 7;          // max projection horizon
  int T = 200;        // sample length
  double d = 0.8;     // IRF shape parameter
  std::uint64_t seed = 0;

  void validate() const;
};

// VMA coefficient matrices and shock covariance. Variable 1 is the
// preidentified shock: the first row of every coefficient matrix is zero,
// and the shock covariance is blkdiag(omega_1^2, Omega*).
struct VmaParams {
  std::vector<Eigen::MatrixXd> gammas;  // L matrices, each M x M
  SpdMatrix omega;

  int var_count() const { return omega.dim(); }
  int order() const { return static_cast<int>(gammas.size()); }
  void validate() const;
};

// A simulated series. Row r of w is observation time t = r + 1; row r of
// eps is shock time t = r + 1 - L (L presample shocks precede the sample).
struct SeriesData {
  Eigen::MatrixXd w;    // (T+H) x M
  Eigen::MatrixXd eps;  // (T+H+L) x M, empty for imported series
  DgpConfig config;

  // max_t ||w_t - eps_t - sum_l Gamma_l eps_{t-l}||_inf; requires eps.
  double reconstruction_error(const VmaParams& params) const;
};

// Normalized impulse response weights, gamma_l = l exp(d(1-l)) / sum_k k exp(d(1-k)).
struct IrfTruth {
  Eigen::VectorXd values;  // length L, positive, sums to 1
};

IrfTruth gen_irf_weights(int L, double d);

// Random VMA parameters following the fixed recipe: scaled shared normal
// block for rows 2..M, uniform diagonal overwrite on the first matrix,
// impulse response weights in the (2,1) entries, zero first rows, and
// blkdiag(IG(1,1), IW(2, I)) shock covariance.
VmaParams gen_vma_params(const DgpConfig& cfg, RngState& rng);

// Simulate T+H observations of w_t = eps_t + sum_l Gamma_l eps_{t-l} with
// shocks from N(0, Omega). Exact: only L presample shocks are needed.
SeriesData simulate_vma(const VmaParams& params, const DgpConfig& cfg, RngState& rng);

// Series CSV (columns t, w_1..w_M) and params sidecar (JSON), both with
// exact decimal round-trip.
void write_series_csv(const SeriesData& series, const std::string& path);
SeriesData read_series_csv(const std::string& path, const DgpConfig& cfg);
void write_params_json(const VmaParams& params, const DgpConfig& cfg, const std::string& path);
VmaParams read_params_json(const std::string& path, DgpConfig* cfg_out = nullptr);

}  // namespace lpsur

#endif  // LPSUR_DGP_HPP
