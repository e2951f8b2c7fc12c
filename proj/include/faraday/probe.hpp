#pragma once

#include <vector>

#include "faraday/atomic.hpp"

namespace faraday {

// One probe color: a focused Gaussian beam addressing one fine-structure
// line. delta is referenced to f_ground -> f'_max (rad/s), power in W,
// waist in m.
struct ProbeColor {
  double j_excited = 0.0;
  double delta = 0.0;
  double power = 0.0;
  double waist = 0.0;

  double photon_flux(const AtomicSpecies& s) const;    // photons/s
  double peak_intensity() const { return 2.0 * power / (pi_w0_sq()); }
  double pi_w0_sq() const;  // πw0², the polarimetry mode area
};

// Polarization rotation per unit F_z (rad): the rank-1 part of the dispersive
// phase, evaluated for the beam's mode area.
double faraday_angle(const AtomicSpecies& s, const ProbeColor& c);

// Coefficient of f_x² (rad/s) at intensity beta·I_peak. Rotating-frame use
// halves it and reads it on f_z².
double tensor_shift_strength(const AtomicSpecies& s, const ProbeColor& c,
                             double beta = 1.0);

// Photon scattering rate (1/s) at intensity beta·I_peak, with the exact
// per-line lineshape sum (no far-detuned approximation).
double scattering_rate(const AtomicSpecies& s, const ProbeColor& c,
                       double beta = 1.0);

// Shot-noise-referenced measurement strength of a single color integrated
// for time T on an ensemble with static variance var_fz.
double single_color_measurement_strength(const AtomicSpecies& s,
                                         const ProbeColor& c, double T,
                                         double var_fz);

// (r / r_max) for the two-color pair at the tensor-cancelling power ratio,
// relative to the ideal decoherence-free limit. Detunings must have opposite
// signs. Uses the far-detuned rate normalization so the landscape depends
// only on the detuning pair geometry.
double two_color_strength_ratio(const AtomicSpecies& s, double j1, double d1,
                                double j2, double d2);

// Power ratio P(j1)/P(j2) that nulls the net rank-2 light shift at fixed
// mode area. Throws when the two tensor coefficients have equal sign.
double cancellation_operating_point(const AtomicSpecies& s, double j1,
                                    double d1, double j2, double d2);

// kappa for the sum photocurrent of simultaneous colors:
// (Σ_j χ_j Ndot_j)² / Σ_j Ndot_j, units 1/(spin²·s).
double effective_measurement_rate(const AtomicSpecies& s,
                                  const std::vector<ProbeColor>& colors);

// Dense scan of two_color_strength_ratio over (d2, |d1/d2|) with a
// golden-section polish along each axis at the grid argmax.
struct StrengthScan {
  std::vector<double> d2_grid;     // rad/s, D2-line detunings (one sign)
  std::vector<double> ratio_grid;  // |d1/d2|
  std::vector<double> value;       // row-major [i_d2 * n_ratio + j]
  double best_d2 = 0.0, best_ratio = 0.0, best_value = 0.0;
  double best_power_ratio = 0.0;
};
StrengthScan scan_strength(const AtomicSpecies& s, double j1, double j2,
                           double d2_min, double d2_max, int n_d2,
                           double ratio_min, double ratio_max, int n_ratio);

// 1-D optimum of two_color_strength_ratio over the detuning-magnitude ratio
// at fixed d2 (golden section after a coarse bracket).
struct ProfileOptimum {
  double ratio = 0.0;
  double value = 0.0;
  double power_ratio = 0.0;  // cancellation P1/P2 at the optimum
};
ProfileOptimum strength_profile_optimum(const AtomicSpecies& s, double j1,
                                        double j2, double d2, double ratio_min,
                                        double ratio_max);

// Two-color design closed by (pump time anchor, cancellation): returns the
// pair with powers set so the total peak scattering rate is 1/pump_time and
// the rank-2 shifts cancel.
struct TwoColorDesign {
  ProbeColor d1, d2;
  double power_ratio = 0.0;     // P1/P2
  double kappa = 0.0;           // effective measurement rate
  double gamma1 = 0.0, gamma2 = 0.0;  // peak scattering rates, 1/s
  double tensor_residual = 0.0;  // net f_x² coefficient after cancellation
};
TwoColorDesign design_two_color(const AtomicSpecies& s, double d1, double d2,
                                double pump_time, double waist);

}  // namespace faraday
