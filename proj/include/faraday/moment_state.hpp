#pragma once

#include <Eigen/Dense>

#include <array>

namespace faraday {

// Gaussian moment state of the collective spin waves, restricted to the
// axially symmetric (l = 0) sector that the dynamics close on.
//
// Per radial mode p and longitudinal slice k the tracked one-body sums are
// the three level populations N_i^p(k) (i = up, down, T in the rotating
// x-basis), the odd coherence quadratures X_ud^p(k), X_dT^p(k), and the
// even quadrature X_uT^p(k). Second moments of the odd quadratures are kept
// as a full covariance matrix; populations and X_uT stay at mean-field
// level (X_uT never correlates with the measured sector: the projected
// pumping generator and the injection tables are parity block diagonal).
//
// X layout keeps one slice contiguous so per-slice drift blocks act on
// contiguous rows: idx(a, p, k) = (k * 2 + a) * n_p + p, a = 0 (ud), 1 (dT).
struct MomentState {
  int n_p = 0;
  int n_k = 0;
  double time = 0.0;                    // s
  std::array<Eigen::MatrixXd, 3> pops;  // each n_p x n_k
  Eigen::VectorXd x;                    // 2 * n_p * n_k, conditioned means
  Eigen::VectorXd x_ut;                 // n_p * n_k, up-T coherence means
  Eigen::MatrixXd cov;                  // symmetric, same indexing as x

  // Filter hand-off: Cov(X, F_z^00) and Var(F_z^00) evaluated after the
  // pumping drift of the current step, before its measurement update.
  // Written by deterministic_drift, consumed (and invalidated) by the
  // paired conditional_mean_step.
  Eigen::VectorXd step_cu;
  double step_var = -1.0;

  int dim() const { return 2 * n_p * n_k; }
  int idx(int a, int p, int k) const { return (k * 2 + a) * n_p + p; }
  int idx_ut(int p, int k) const { return k * n_p + p; }
};

}  // namespace faraday
