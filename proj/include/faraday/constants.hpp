#pragma once

// SI values (CODATA 2018). All frequencies and rates in this codebase are
// angular (rad/s); detunings follow the same convention.

namespace faraday {

inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c_light = 299792458.0;   // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace faraday
