#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "faraday/quadrature.hpp"
#include "faraday/rng.hpp"
#include "faraday/wigner.hpp"

using namespace faraday;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 reference vectors (10 rounds).
  auto r = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(r[0] == 0x6627e8d5u);
  CHECK(r[1] == 0xe169c58du);
  CHECK(r[2] == 0xbc57ac4cu);
  CHECK(r[3] == 0x9b00dbd8u);

  r = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                 {0xffffffffu, 0xffffffffu});
  CHECK(r[0] == 0x408f276du);
  CHECK(r[1] == 0x41c83b0eu);
  CHECK(r[2] == 0xa20bc7c6u);
  CHECK(r[3] == 0x6d5451fdu);

  r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                 {0xa4093822u, 0x299f31d0u});
  CHECK(r[0] == 0xd16cfe09u);
  CHECK(r[1] == 0x94fdccebu);
  CHECK(r[2] == 0x5001e420u);
  CHECK(r[3] == 0x24126ea1u);
}

TEST_CASE("uniform draws are open-interval and order-independent") {
  for (uint32_t i = 0; i < 1000; ++i) {
    double u = philox_uniform(12345, i, 0, 0, 0, 0);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  // Addressed draws commute: same counter, same value.
  double a = philox_uniform(7, 11, 22, 33, 44, 1);
  double b = philox_uniform(7, 11, 22, 33, 44, 1);
  CHECK(a == b);
  CHECK(philox_uniform(7, 11, 22, 33, 44, 0) != a);
}

TEST_CASE("inverse normal CDF against tabulated values") {
  // scipy.special.ndtri reference points.
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inverse_normal_cdf(0.025) ==
        doctest::Approx(-1.95996398454005).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.975) ==
        doctest::Approx(1.95996398454005).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.31) ==
        doctest::Approx(-0.495850347347453).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.6827) ==
        doctest::Approx(0.475262337515298).epsilon(1e-12));
  CHECK(inverse_normal_cdf(1e-6) ==
        doctest::Approx(-4.7534243088229).epsilon(1e-12));
  CHECK(inverse_normal_cdf(1e-12) ==
        doctest::Approx(-7.03448382530113).epsilon(1e-12));
  CHECK(inverse_normal_cdf(1.0 - 1e-9) ==
        doctest::Approx(5.99780701960164).epsilon(1e-12));
}

TEST_CASE("normal stream has correct first moments") {
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = philox_normal(99, static_cast<uint32_t>(i), 0, 0, 0);
    s1 += x;
    s2 += x * x;
  }
  double mean = s1 / n, var = s2 / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gauss-laguerre integrates x^k e^{-x} exactly") {
  auto q = gauss_laguerre(32);
  for (int k = 0; k <= 20; ++k) {
    double s = 0.0, exact = 1.0;
    for (int j = 1; j <= k; ++j) exact *= j;
    for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], k);
    CHECK(s == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("gauss-legendre integrates polynomials and a gaussian") {
  auto q = gauss_legendre(24, 0.0, 2.0);
  double s = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * q.x[i] * q.x[i];
  CHECK(s == doctest::Approx(8.0 / 3.0).epsilon(1e-13));

  // Wide enough that the truncated tails sit below the quadrature error.
  auto g = gauss_legendre(64, -8.5, 8.5);
  s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i)
    s += g.w[i] * std::exp(-0.5 * g.x[i] * g.x[i]);
  CHECK(s == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("wigner symbols: closed-form checks") {
  // 3j with all m = 0 and equal j: (j j 0) type identities.
  CHECK(wigner3j(1, 1, 0, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(wigner3j(2, 2, 0, 1, -1, 0) == doctest::Approx(-1.0 / std::sqrt(5.0)));
  // Triangle violation.
  CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);
  // 6j identity: {a b c; 0 c b} = (-1)^(a+b+c)/sqrt((2b+1)(2c+1)).
  for (double a : {1.0, 2.0}) {
    double b = 1.5, cj = 2.5;
    double expect = std::pow(-1.0, a + b + cj) /
                    std::sqrt((2 * b + 1) * (2 * cj + 1));
    CHECK(wigner6j(a, b, cj, 0, cj, b) == doctest::Approx(expect));
  }
  // Orthogonality of CG coefficients for f=4 ⊗ 1: each coupled state
  // |fp, m> is normalized, so the fp-summed square totals 3 when all of
  // fp = 3, 4, 5 reach this m.
  for (double m = -3; m <= 3; ++m) {
    for (double fp = 3; fp <= 5; ++fp) {
      double s = 0.0;
      for (int q = -1; q <= 1; ++q) {
        double c = clebsch_gordan(4, m - q, 1, q, fp, m);
        s += c * c;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
