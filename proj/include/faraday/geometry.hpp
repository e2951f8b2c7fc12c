#pragma once

#include "faraday/moment_state.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace faraday {

// Gaussian atomic cloud, density eta(r) = eta0 exp(-2 r_perp^2/w_perp^2
// - 2 z^2/w_z^2) with e^-2 radii.
struct CloudGeometry {
  double eta0 = 0.0;    // peak density, 1/m^3
  double w_perp = 0.0;  // transverse e^-2 radius, m
  double w_z = 0.0;     // longitudinal e^-2 radius, m

  // Closed-form Gaussian integral of eta over all space.
  double total_atoms() const;
};

// Laguerre-Gauss mode basis of the probe beam plus the longitudinal slice
// grid used for coarse-grained spin waves. Mode index order:
// m = p * (2 l_max + 1) + (l + l_max).
struct ModeBasis {
  double w0 = 0.0;          // waist, m
  double wavelength = 0.0;  // m
  int p_max = 2;
  int l_max = 2;
  int k_slices = 12;
  double z_extent = 0.0;  // slices tile [-z_extent, +z_extent]
  int radial_order = 64;
  int angular_order = 128;

  // Slice grid spans three cloud radii so the density tail it drops is
  // below the slice-refinement tolerance.
  static ModeBasis standard(double w0, double wavelength, double cloud_wz);

  double rayleigh_range() const;
  double area() const;  // mode normalization area, pi w0^2 / 2
  double waist_at(double z) const;
  double gouy_phase(double z) const;
  double inv_curvature(double z) const;  // 1/R(z), zero at the waist
  int n_modes() const { return (p_max + 1) * (2 * l_max + 1); }
  int mode_index(int p, int l) const;
  double slice_width() const;
  double slice_center(int k) const;
};

// Full LG amplitude, normalized so that (1/area) integral |u_pl|^2 d2r = 1
// at every z and u_00 is real positive on axis at the waist (u_00(0,0,0)=1).
// Includes Gouy and wavefront-curvature phases.
std::complex<double> lg_mode_amplitude(const ModeBasis& basis, int p, int l,
                                       double r, double phi, double z);

// Radial magnitude of u_pl (the amplitude with curvature, Gouy, and angular
// phases stripped; signed through the Laguerre polynomial).
double lg_radial_magnitude(const ModeBasis& basis, int p, int l, double r,
                           double z);

// Spin-wave weight beta_pl(r) = u*_pl u_00. beta_00 = |u_00|^2 is the local
// relative intensity in [0, 1].
std::complex<double> spinwave_weight(const ModeBasis& basis, int p, int l,
                                     double r, double phi, double z);

// N_K = integral eta |u_00|^{2K} d3r for K in {1, 2, 3}.
double effective_atom_number(const CloudGeometry& cloud, const ModeBasis& basis,
                             int K);

// Scale eta0 so that N_1 equals the requested value (N_K is linear in eta0).
void set_peak_density_for_n1(CloudGeometry& cloud, const ModeBasis& basis,
                             double n1);

// Mode-projection overlaps at a fixed z plane:
//   c^{pl}_{p'l'}(z)        = (1/area) int d2r u_00^2 u*_pl u*_p'l'
//   g^{pl p'l'}_{p''l''}(z) = (1/area) int d2r u_00 u_p''l'' beta_pl beta_p'l'
// Angular selection (c: l + l' = 0, g: l'' = l + l') is enforced exactly;
// the surviving radial integrals use fixed-order Gauss-Laguerre.
std::complex<double> overlap_c(const ModeBasis& basis, int p, int l, int pp,
                               int lp, double z);
std::complex<double> overlap_g(const ModeBasis& basis, int p, int l, int pp,
                               int lp, int ppp, int lpp, double z);

// Precomputed tables consumed by the moment engine (l = 0 sector; rephased
// real radial modes) plus the full complex overlap tables for diagnostics.
//
// Index order (row-major, slice index fastest):
//   ktab[p][p'][k]       drift overlap   (1/area) int m_p m_p' m_00^2
//   gtab[p][p'][p''][k]  injection overlap (1/area) int m_p'' m_p m_p' m_00^3
//   b2[p][p'][k]         slice integral of eta m_p m_p' m_00^2
//   npop[p][k]           slice integral of eta m_p m_00
//   ctab[m][m'][k], gfull[m][m'][m''][k]  overlap_c / overlap_g at slice
//                                          centers, mode index order as above
struct EngineTables {
  int n_p = 0;
  int n_k = 0;
  int n_modes = 0;
  ModeBasis basis;
  CloudGeometry cloud;
  uint64_t config_hash = 0;

  std::vector<double> ktab;
  std::vector<double> gtab;
  std::vector<double> b2;
  std::vector<double> npop;
  std::vector<std::complex<double>> ctab;
  std::vector<std::complex<double>> gfull;

  double n1 = 0.0, n2 = 0.0, n3 = 0.0;  // effective atom numbers

  double kt(int p, int pp, int k) const {
    return ktab[(p * n_p + pp) * n_k + k];
  }
  double gt(int p, int pp, int ppp, int k) const {
    return gtab[((p * n_p + pp) * n_p + ppp) * n_k + k];
  }
  double b2_at(int p, int pp, int k) const {
    return b2[(p * n_p + pp) * n_k + k];
  }
  double npop_at(int p, int k) const { return npop[p * n_k + k]; }
  std::complex<double> c_at(int m, int mp, int k) const {
    return ctab[(m * n_modes + mp) * n_k + k];
  }
  std::complex<double> g_at(int m, int mp, int mpp, int k) const {
    return gfull[((m * n_modes + mp) * n_modes + mpp) * n_k + k];
  }
};

uint64_t table_config_hash(const CloudGeometry& cloud, const ModeBasis& basis);

EngineTables build_tables(const CloudGeometry& cloud, const ModeBasis& basis);

// Binary cache. Header: magic "FTBL", u32 version, u64 config hash, then the
// config scalars and the tables as little-endian 64-bit floats in the index
// order documented on EngineTables.
void save_tables(const EngineTables& tables, const std::string& path);
EngineTables load_tables(const std::string& path);

// Moments of the optically pumped fiducial state: every atom in the up
// level, coherence means zero, up-down coherence covariance B2/2 per the
// symmetrized one-atom second moment. `thermal` rescales that block by the
// thermal-to-coherent transverse variance ratio f(f+1)/3 / (f/2) = 10/3
// (f = 4), used for projection-noise comparisons only.
MomentState initial_moment_state(const EngineTables& tables,
                                 bool thermal = false);

}  // namespace faraday
