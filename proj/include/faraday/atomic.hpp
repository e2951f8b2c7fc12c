#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace faraday {

// One excited fine-structure manifold (D1 or D2). Frequencies in rad/s.
struct ExcitedLine {
  std::string name;
  double j_excited = 0.0;
  double wavelength = 0.0;  // m
  double omega = 0.0;       // transition angular frequency, rad/s
  double gamma = 0.0;       // natural linewidth, rad/s
  double a_hf = 0.0;        // magnetic-dipole hf constant, rad/s
  double b_hf = 0.0;        // electric-quadrupole hf constant, rad/s
  double sigma0 = 0.0;      // resonant cross section 3λ²/2π, m²
  double i_sat = 0.0;       // ħωΓ/(2σ0), W/m²

  // Hyperfine offsets ω(f') − ω(f'_max) ≤ 0, keyed by f'. The probe detuning
  // convention references the f_ground → f'_max transition.
  std::map<int, double> offsets;
  std::vector<int> fprimes;
};

struct AtomicSpecies {
  std::string name;
  double nuclear_spin = 0.0;
  int f_ground = 0;
  double ground_splitting = 0.0;  // rad/s
  std::vector<ExcitedLine> lines;
  uint64_t data_hash = 0;  // FNV-1a of the data file bytes

  static AtomicSpecies load(const std::string& path);
  static AtomicSpecies cesium();  // loads data/cs133.json from the build tree

  const ExcitedLine& line(double j_excited) const;
};

// Rank-decomposition coefficients of the ac-Stark operator on a ground
// hyperfine level: A = C0·1 + C1·f_z + C2·f_z² for the appropriate drive
// polarizations.
struct RankCoefficients {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

// Detuning of the probe from the f_ground → f' line, given the detuning from
// f_ground → f'_max (rad/s).
double detuning_to_level(const AtomicSpecies& s, double j_excited, int f_prime,
                         double delta);

// ⟨f' m+q| raising part of d_q |f m⟩ matrix, (2f'+1)×(2f+1), reduced matrix
// element normalized so the excited manifold's total branching is 1.
Eigen::MatrixXd dipole_raising_operator(const AtomicSpecies& s,
                                        double j_excited, int f_prime, int f,
                                        int q);

// Per-f' rank coefficients of the scalar/vector/tensor light shift.
RankCoefficients coefficients_CK(const AtomicSpecies& s, double j_excited,
                                 int f_prime);

// Detuning-weighted sum Σ_f' C_K(f')·Δ/Δ_f'. Throws (numerical guard) when
// any |Δ_f'| < 10Γ.
double effective_CK(const AtomicSpecies& s, double j_excited, int rank,
                    double delta);

// Relative line strengths s_{f'} (sum over f' equals 1 per line after the
// (2j'+1)/2 normalization) and the exact saturation-weighted lineshape factor
// Σ(Δ) = Σ_f' s_f' Δ²/Δ_f'² used by scattering rates.
std::map<int, double> line_strengths(const AtomicSpecies& s, double j_excited);
double lineshape_sigma(const AtomicSpecies& s, double j_excited, double delta);

// Spin matrices for angular momentum f in the m_z basis (dimension 2f+1).
Eigen::MatrixXd spin_fz(double f);
Eigen::MatrixXd spin_fx(double f);
Eigen::MatrixXcd spin_fy(double f);

}  // namespace faraday
