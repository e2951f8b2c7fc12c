#include "faraday/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace faraday {

namespace {

// Exact factorials up to 30! (< 2^108 but each value < 2^53 holds up to 18!;
// beyond that doubles are still exact *enough*: 30! has 32 significant bits
// dropped, giving ~1e-16 relative error, fine for these coefficients).
double fact(int n) {
  static const auto table = [] {
    std::array<double, 64> t{};
    t[0] = 1.0;
    for (int i = 1; i < 64; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return n >= 0 && n < 64 ? table[n] : 0.0;
}

bool is_int(double x) { return std::fabs(x - std::round(x)) < 1e-9; }
int iround(double x) { return static_cast<int>(std::round(x)); }

// Triangle coefficient Δ(a,b,c); returns 0 if the triple is not coupled.
double triangle(double a, double b, double c) {
  double p = a + b - c, q = a - b + c, r = -a + b + c, s = a + b + c + 1;
  if (!is_int(p) || p < 0 || q < 0 || r < 0) return 0.0;
  return fact(iround(p)) * fact(iround(q)) * fact(iround(r)) /
         fact(iround(s));
}

}  // namespace

double wigner3j(double j1, double j2, double j3, double m1, double m2,
                double m3) {
  if (std::fabs(m1 + m2 + m3) > 1e-9) return 0.0;
  if (std::fabs(m1) > j1 || std::fabs(m2) > j2 || std::fabs(m3) > j3)
    return 0.0;
  if (!is_int(j1 - m1) || !is_int(j2 - m2) || !is_int(j3 - m3)) return 0.0;
  double tri = triangle(j1, j2, j3);
  if (tri == 0.0) return 0.0;

  double norm = tri * fact(iround(j1 + m1)) * fact(iround(j1 - m1)) *
                fact(iround(j2 + m2)) * fact(iround(j2 - m2)) *
                fact(iround(j3 + m3)) * fact(iround(j3 - m3));
  int kmin = iround(std::max({0.0, j2 - j3 - m1, j1 - j3 + m2}));
  int kmax = iround(std::min({j1 + j2 - j3, j1 - m1, j2 + m2}));
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    double term = fact(k) * fact(iround(j1 + j2 - j3) - k) *
                  fact(iround(j1 - m1) - k) * fact(iround(j2 + m2) - k) *
                  fact(iround(j3 - j2 + m1) + k) *
                  fact(iround(j3 - j1 - m2) + k);
    sum += ((k % 2) ? -1.0 : 1.0) / term;
  }
  double phase = (iround(j1 - j2 - m3) % 2) ? -1.0 : 1.0;
  return phase * std::sqrt(norm) * sum;
}

double wigner6j(double j1, double j2, double j3, double j4, double j5,
                double j6) {
  double t1 = triangle(j1, j2, j3), t2 = triangle(j1, j5, j6),
         t3 = triangle(j4, j2, j6), t4 = triangle(j4, j5, j3);
  if (t1 == 0.0 || t2 == 0.0 || t3 == 0.0 || t4 == 0.0) return 0.0;

  double a1 = j1 + j2 + j3, a2 = j1 + j5 + j6, a3 = j4 + j2 + j6,
         a4 = j4 + j5 + j3;
  double b1 = j1 + j2 + j4 + j5, b2 = j2 + j3 + j5 + j6,
         b3 = j3 + j1 + j6 + j4;
  int tmin = iround(std::max({a1, a2, a3, a4}));
  int tmax = iround(std::min({b1, b2, b3}));
  double sum = 0.0;
  for (int t = tmin; t <= tmax; ++t) {
    double term = fact(t - iround(a1)) * fact(t - iround(a2)) *
                  fact(t - iround(a3)) * fact(t - iround(a4)) *
                  fact(iround(b1) - t) * fact(iround(b2) - t) *
                  fact(iround(b3) - t);
    sum += ((t % 2) ? -1.0 : 1.0) * fact(t + 1) / term;
  }
  return std::sqrt(t1 * t2 * t3 * t4) * sum;
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double j3,
                      double m3) {
  if (std::fabs(m1 + m2 - m3) > 1e-9) return 0.0;
  double phase = (iround(j1 - j2 + m3) % 2) ? -1.0 : 1.0;
  return phase * std::sqrt(2.0 * j3 + 1.0) *
         wigner3j(j1, j2, j3, m1, m2, -m3);
}

}  // namespace faraday
