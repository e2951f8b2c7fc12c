#include "faraday/rng.hpp"

#include <cmath>

#include "faraday/errors.hpp"

namespace faraday {

namespace {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

constexpr uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key) {
  uint32_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
  uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c0, hi0, lo0);
    mulhilo(kM1, c2, hi1, lo1);
    uint32_t n0 = hi1 ^ c1 ^ k0;
    uint32_t n1 = lo1;
    uint32_t n2 = hi0 ^ c3 ^ k1;
    uint32_t n3 = lo0;
    c0 = n0; c1 = n1; c2 = n2; c3 = n3;
    k0 += kW0;
    k1 += kW1;
  }
  return {c0, c1, c2, c3};
}

double philox_uniform(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2,
                      uint32_t c3, int lane) {
  std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                 static_cast<uint32_t>(seed >> 32)};
  auto r = philox4x32({c0, c1, c2, c3}, key);
  uint64_t x = lane == 0
                   ? (static_cast<uint64_t>(r[0]) << 32) | r[1]
                   : (static_cast<uint64_t>(r[2]) << 32) | r[3];
  return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// AS241 algorithm PPND16 (Wichura 1988, Appl. Stat. 37).
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw numerical_error("inverse_normal_cdf: p outside (0,1)");
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-4) * r +
             1.24266094738807843860e-2) * r + 2.65321895265761230930e-1) * r +
           1.78482653991729133580e0) * r + 5.46378491116411436990e0) * r +
         6.65790464350110377720e0);
    const double den =
        ((((((1.42151175831644588870e-7 * r + 1.84631831751005468180e-5) * r +
             7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r +
           1.36929880922735805310e-1) * r + 5.99832206555887937690e-1) * r +
         1.0);
    val = num / den;
    // The deep tail (p < 6e-9) is the approximation's weakest stretch;
    // two Newton steps on Φ(z) - p via erfc pin it to machine precision.
    const double pp = q < 0.0 ? p : 1.0 - p;
    for (int it = 0; it < 2; ++it) {
      double cdf = 0.5 * std::erfc(val / std::sqrt(2.0));  // P(Z > val)
      double pdf = std::exp(-0.5 * val * val) / std::sqrt(2.0 * M_PI);
      val += (cdf - pp) / pdf;
    }
  }
  return q < 0.0 ? -val : val;
}

double philox_normal(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2,
                     uint32_t c3, int lane) {
  return inverse_normal_cdf(philox_uniform(seed, c0, c1, c2, c3, lane));
}

}  // namespace faraday
