#pragma once

#include "faraday/geometry.hpp"
#include "faraday/moment_state.hpp"
#include "faraday/pumping.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace faraday {

// Ladder structure of f_z on the top three m_x levels of a spin-f manifold.
// v_up = sqrt((Delta f_z^2) in |m_x = f>),
// w_up = sqrt(2 (Delta f_z^2)_{f-1} - 2 (Delta f_z^2)_f),
// both from exact diagonalization of f_x. Closed forms: v_up = sqrt(f/2),
// w_up = sqrt(2f - 1).
struct SpinCoefficients {
  double f = 0.0;
  double v_up = 0.0;
  double w_up = 0.0;

  // Coefficients of f_z on the unit-normalized qutrit quadratures,
  // f_z = fz_ud() x_ud + fz_dt() x_dT + (terms leaving the qutrit).
  // x_ud carries a 1/sqrt(2) normalization, hence the sqrt(2) on v_up;
  // the same factor cancels in w_up. fz_ud() == Tr[x_ud f_z].
  double fz_ud() const;
  double fz_dt() const;
};

SpinCoefficients spin_coefficients(double f);

// One probe color: projected qutrit tables plus the ensemble-mean photon
// scattering rate (events per second) it drives at operating intensity.
struct ColorDrive {
  PumpingTables tables;
  double rate = 0.0;
};

// Per-step engine inputs, precontracted onto the (radial mode, slice)
// lattice of an EngineTables build. Shared read-only between trajectories.
//
// Conventions: state populations and quadratures are mode sums with weight
// m_p m_00 (units 1/area), so collective observables carry one factor of
// the mode area per weight: F_z^00 = area * sum_k (fz_ud X_ud^0(k) +
// fz_dt X_dT^0(k)), and the local pump rate gamma beta expands over the
// radial modes with coefficients area^2 ktab (drift) and area^2 gtab
// (injection).
struct EngineContext {
  int n_p = 0;
  int n_k = 0;
  double area = 0.0;         // pi w0^2 / 2
  double kappa = 0.0;        // measurement strength, 1/s
  double gamma_total = 0.0;  // summed scattering rate, 1/s
  double n1 = 0.0;           // sum_i beta_i   (collective effective number)
  double n2 = 0.0;           // sum_i beta_i^2
  SpinCoefficients coeffs;

  Eigen::VectorXd u;  // F_z^00 weights on the odd sector, dim()

  // Per slice k: pumping generator contracted across radial modes,
  // A (x) area^2 ktab(:,:,k). Odd sector (x_ud, x_dT) drives covariance
  // legs and conditioned means; even sector (n_u, n_d, n_T, x_uT) drives
  // the mean-field populations.
  std::vector<Eigen::MatrixXd> drift_odd;   // 2 n_p square
  std::vector<Eigen::MatrixXd> drift_even;  // 4 n_p square

  // Rate-summed one-body injection, odd pairs by source level.
  std::array<Eigen::Matrix2d, 3> noise_odd{};

  // inj[k * n_p + p''] = area^2 gtab(:,:,p'',k); the injection into slice
  // k is sum_l sum_p'' N_l^{p''}(k) inj[k n_p + p''] (x) noise_odd[l].
  std::vector<Eigen::MatrixXd> inj;

  int dim() const { return 2 * n_p * n_k; }
};

EngineContext make_engine_context(const EngineTables& tables,
                                  const std::vector<ColorDrive>& colors,
                                  double kappa_meas,
                                  const SpinCoefficients& coeffs);

// Fundamental-mode observables reconstructed from the state.
struct SpinwaveMoments {
  double fx = 0.0;
  double fz = 0.0;
  double var_fz = 0.0;
  Eigen::Vector3d pop{0.0, 0.0, 0.0};  // beta-weighted level totals
};

SpinwaveMoments spinwave_moments(const MomentState& s, const EngineContext& ctx);

// One Euler step of the deterministic moment flow: even-sector means
// (population transfer and the up-T coherence), covariance pumping decay on
// both legs, slice-local noise injection, and the measurement backaction.
// The backaction uses the exact rank-1 update
//   C -= kappa dt / (1 + kappa dt V) (C u)(C u)^T,
// which integrates the pure-measurement Riccati flow exactly over the step.
// Stores the post-drift (C u, V) pair on the state for the paired
// conditional_mean_step. Throws numerical_error with diagnostics when the
// step detects instability (negative variance, population growth, negative
// fundamental-mode population, or non-finite entries).
void deterministic_drift(MomentState& s, const EngineContext& ctx, double dt);

// Record-conditioned mean update paired with the same-interval drift call:
// pumping drift of the odd means plus the filter kick
//   X += sqrt(kappa) / (1 + kappa dt V) (C u) dW,
// with (C u, V) taken post-drift as stored by deterministic_drift. The
// record sample paired with dW must be formed from the pre-drift mean,
// dM = <F_z^00> dt + dW / sqrt(kappa).
void conditional_mean_step(MomentState& s, const EngineContext& ctx, double dW,
                           double dt);

// xi_m^2 = 2 f (N1^2 / N2) (Delta F_z^00)^2 / <F_x^00>^2. Throws
// numerical_error when the mean spin has vanished.
double metrological_squeezing(const SpinwaveMoments& m, double f, double n1,
                              double n2);
double metrological_squeezing(const MomentState& s, const EngineContext& ctx);

// Stability-bound step suggestion: 1 / (200 max(kappa Var F_z, gamma_total)).
double suggest_dt(const EngineContext& ctx, const MomentState& s);

struct EvolvePoint {
  double t = 0.0;
  double fx = 0.0;
  double fz = 0.0;
  double var_fz = 0.0;
  double xi_m_sq = 0.0;  // NaN once the mean spin is gone
  Eigen::Vector3d pop{0.0, 0.0, 0.0};
  double loss = 0.0;  // 1 - total population / initial total
};

// Deterministic propagation (dW = 0) to t_final with output every `stride`
// steps. On instability the run restarts from the initial state with dt
// halved, up to four times, before rethrowing.
std::vector<EvolvePoint> evolve_moments(MomentState& s, const EngineContext& ctx,
                                        double t_final, double dt,
                                        int stride = 1);

// Record-independent filter data for batched record simulation: the
// covariance side of the filter evolved once, logging the per-step gain
// pair and the pre-drift observables. fx/var_fz/t have n_steps + 1 entries
// (step edges), ks/v_post one column/entry per step.
struct CovariancePath {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> fx;
  std::vector<double> var_fz;
  Eigen::MatrixXd ks;       // dim x n_steps, post-drift C u
  Eigen::VectorXd v_post;   // n_steps
};

CovariancePath covariance_path(MomentState s, const EngineContext& ctx,
                               double t_final, double dt);

}  // namespace faraday
