#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace faraday {

// FNV-1a 64-bit. Used for config fingerprints and table-cache keys; not
// cryptographic.
inline uint64_t fnv1a64(const void* data, size_t n,
                        uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s,
                        uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

// Canonical text form so the hash is stable across platforms and readable in
// logs. %.17g round-trips doubles.
inline void hash_mix(uint64_t& h, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g;", v);
  h = fnv1a64(buf, std::char_traits<char>::length(buf), h);
}
inline void hash_mix(uint64_t& h, int64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld;", static_cast<long long>(v));
  h = fnv1a64(buf, std::char_traits<char>::length(buf), h);
}
inline void hash_mix(uint64_t& h, const std::string& s) {
  h = fnv1a64(s.data(), s.size(), h);
  h = fnv1a64(";", 1, h);
}

inline std::string hash_hex(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace faraday
