#pragma once

#include <Eigen/Dense>
#include <array>

#include "faraday/atomic.hpp"

namespace faraday {

// Superoperator on the f=4 ground manifold, acting on vec(rho) with the
// row-major convention vec[9i + j] = rho(i, j).
using GroundSuperop = Eigen::MatrixXcd;  // 81 x 81

// Photon jump structure of one probe color at unit drive (Omega²/4 = 1).
// w[q] returns absorbed f=4 population back to f=4 with emission polarization
// q; emission into f=3 is untracked loss. h_loss = -(i/2)R with R the
// Hermitian absorption-rate operator, so the non-unitary generator is
// -i(h_loss ρ - ρ h_loss†) = -(Rρ + ρR)/2.
struct JumpOperators {
  std::array<Eigen::MatrixXcd, 3> w;  // emission q = -1, 0, +1
  Eigen::MatrixXcd h_loss;            // 9x9 anti-Hermitian
  double gamma_char = 0.0;  // m-averaged scattering rate at unit drive
};

JumpOperators jump_operators(const AtomicSpecies& s, double j_excited,
                             double delta);

// Optical-pumping generator D[ρ] = -i(Hρ - ρH†) + Γ Σ_q W_q ρ W_q†,
// restricted to f=4 and divided by gamma_char: time is counted in mean
// scattering events, so callers scale by scattering_rate(s, color, β).
GroundSuperop single_atom_pumping_map(const AtomicSpecies& s, double j_excited,
                                      double delta);

// Average over a Larmor cycle, exact Fourier selection: an element survives
// iff its f_z weights balance, (m_a - m_b) == (m_c - m_d).
GroundSuperop larmor_average(const GroundSuperop& map);

// Qutrit carved out of f=4 along the mean-spin direction: levels m_x = 4, 3, 2
// ("up", "down", "T") written in m_z coordinates, with n_i = |i><i| and
// x_ij, y_ij the symmetric/antisymmetric normalized coherences. The free
// phase of |down> is fixed so the f_z ladder weights √2<u|f_z|d> = 2 and
// √2<d|f_z|T> = √7 come out positive.
struct QutritBasis {
  Eigen::MatrixXd rotation;              // 9x9 orthogonal, col k = m_x = k-4
  std::array<Eigen::VectorXd, 3> level;  // up, down, T
  std::array<Eigen::MatrixXd, 3> n_op;
  std::array<Eigen::MatrixXd, 3> x_op;   // x_ud, x_dT, x_uT
  std::array<Eigen::MatrixXcd, 3> y_op;  // y_ud, y_dT, y_uT
  static const QutritBasis& standard();
};

// Trace tables of the Larmor-averaged map over the 9-operator qutrit basis,
// ordered (n_u, n_d, n_T, x_ud, x_dT, x_uT, y_ud, y_dT, y_uT). All entries
// are per mean scattering event.
struct PumpingTables {
  // heisenberg(c, c') = Tr[D†[op_c] op_c'] drives d<op_c>/dt;
  // schrodinger(c, c') = Tr[D[op_c] op_c'] is its transpose-dual.
  Eigen::Matrix<double, 9, 9> heisenberg;
  Eigen::Matrix<double, 9, 9> schrodinger;
  // One-body covariance injection N[x_a, x_b] traced against n_l; x-sector
  // pairs (ud, dT, uT) by level (up, down, T).
  std::array<std::array<std::array<double, 3>, 3>, 3> noise{};
  Eigen::Vector3d loss;  // rate out of the qutrit per level (f=3 + m_x ≤ 1)
  double max_imag = 0.0;

  Eigen::Matrix3d t_nn() const { return heisenberg.block<3, 3>(0, 0); }
  Eigen::Matrix3d t_xx() const { return heisenberg.block<3, 3>(3, 3); }
  Eigen::Matrix3d t_yy() const { return heisenberg.block<3, 3>(6, 6); }
  Eigen::Matrix3d t_xn_mean() const { return schrodinger.block<3, 3>(3, 0); }
  Eigen::Matrix3d t_xx_mean() const { return schrodinger.block<3, 3>(3, 3); }
};

// Hilbert-Schmidt traces of the averaged map against the qutrit operators.
// Aborts (numerical_error) if any table entry keeps an imaginary part above
// 1e-10: the moment engine runs real arithmetic and must not silently drop
// phases.
PumpingTables qutrit_projected_tables(const GroundSuperop& averaged,
                                      const QutritBasis& basis);

// Convenience: build, average, and project one color.
PumpingTables pumping_tables(const AtomicSpecies& s, double j_excited,
                             double delta);

}  // namespace faraday
