#pragma once

#include <array>
#include <cstdint>

namespace faraday {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Streams are
// addressed, not advanced: any (seed, counter) pair can be evaluated
// independently, which keeps trajectory batches reproducible regardless of
// evaluation order or chunking.
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key);

// Uniform double in (0,1): top 53 bits of a composed 64-bit word, offset so 0
// is excluded (the inverse CDF below needs an open interval).
double philox_uniform(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2,
                      uint32_t c3, int lane);

// Wichura's AS241 PPND16 inverse normal CDF, |error| < 1e-15 over (0,1).
double inverse_normal_cdf(double p);

double philox_normal(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2,
                     uint32_t c3, int lane = 0);

// Counter word c3 namespaces independent random uses of one seed.
enum RngDomain : uint32_t {
  kDomainRecordNoise = 0,
  kDomainPositions = 1,
  kDomainOracle = 2,
  kDomainBootstrap = 3,
};

}  // namespace faraday
