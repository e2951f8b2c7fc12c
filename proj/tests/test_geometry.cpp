#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "faraday/constants.hpp"
#include "faraday/errors.hpp"
#include "faraday/geometry.hpp"
#include "faraday/quadrature.hpp"

using namespace faraday;
using cd = std::complex<double>;

namespace {

ModeBasis nominal_basis() {
  return ModeBasis::standard(16e-6, 852.34727582e-9, 1.5e-3);
}

CloudGeometry nominal_cloud() {
  CloudGeometry c;
  c.w_perp = 25e-6;
  c.w_z = 1.5e-3;
  set_peak_density_for_n1(c, nominal_basis(), 1.09e6);
  return c;
}

struct ModeRef {
  int p;
  int l;
  bool conj;
};

// Independent 2-D quadrature of (1/A) integral of a product of mode
// amplitudes (optionally conjugated), each multiplied by an injected global
// phase e^{i theta}. Uses only lg_mode_amplitude, not the radial
// factorization of the production tables.
cd product_integral_2d(const ModeBasis& b, double z,
                       const std::vector<ModeRef>& refs, double theta) {
  auto qr = gauss_laguerre(b.radial_order);
  const double w = b.waist_at(z);
  const double alpha = refs.size() / (w * w);
  const int na = b.angular_order;
  cd total = 0.0;
  for (size_t i = 0; i < qr.x.size(); ++i) {
    const double r = std::sqrt(qr.x[i] / alpha);
    // the e^{-t} in the rule cancels the amplitudes' own Gaussians
    const double wr = qr.w[i] * std::exp(qr.x[i]) / (2.0 * alpha);
    cd ang = 0.0;
    for (int j = 0; j < na; ++j) {
      const double phi = two_pi * j / na;
      cd prod = 1.0;
      for (const auto& m : refs) {
        cd u = lg_mode_amplitude(b, m.p, m.l, r, phi, z) *
               std::exp(cd(0.0, theta));
        prod *= m.conj ? std::conj(u) : u;
      }
      ang += prod;
    }
    total += wr * ang * (two_pi / na);
  }
  return total / b.area();
}

}  // namespace

TEST_CASE("cloud atom count closed form matches quadrature") {
  CloudGeometry c;
  c.eta0 = 3.7e17;
  c.w_perp = 25e-6;
  c.w_z = 1.5e-3;
  // radial: t = 2 r^2 / w_perp^2 against the Laguerre weight; z: wide
  // Gauss-Legendre panel.
  auto qr = gauss_laguerre(64);
  double radial = 0.0;
  for (size_t i = 0; i < qr.x.size(); ++i) radial += qr.w[i];
  radial *= pi * c.w_perp * c.w_perp / 2.0;
  auto qz = gauss_legendre(160, -8.0 * c.w_z, 8.0 * c.w_z);
  double zint = 0.0;
  for (size_t i = 0; i < qz.x.size(); ++i)
    zint += qz.w[i] * std::exp(-2.0 * qz.x[i] * qz.x[i] / (c.w_z * c.w_z));
  double by_quad = c.eta0 * radial * zint;
  CHECK(c.total_atoms() == doctest::Approx(by_quad).epsilon(1e-9));
}

TEST_CASE("mode amplitudes: normalization and axis behavior") {
  ModeBasis b = nominal_basis();
  CHECK(lg_mode_amplitude(b, 0, 0, 0.0, 0.3, 0.0).real() ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lg_mode_amplitude(b, 0, 0, 0.0, 0.3, 0.0).imag() == 0.0);
  for (int l : {1, 2, -1, -2}) {
    CHECK(std::abs(lg_mode_amplitude(b, 1, l, 0.0, 1.1, 0.4e-3)) == 0.0);
  }
  // unit norm of a p = l = 1 mode by full 2-D quadrature
  cd n11 = product_integral_2d(b, 0.7e-3, {{1, 1, true}, {1, 1, false}}, 0.0);
  CHECK(n11.real() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::fabs(n11.imag()) < 1e-10);
}

TEST_CASE("mode set is orthonormal at five z planes") {
  ModeBasis b = nominal_basis();
  const double zr = b.rayleigh_range();
  for (double z : {0.0, zr, -zr, 2.0 * zr, -2.0 * zr}) {
    for (int p = 0; p <= b.p_max; ++p)
      for (int l = -b.l_max; l <= b.l_max; ++l)
        for (int p2 = p; p2 <= b.p_max; ++p2)
          for (int l2 = -b.l_max; l2 <= b.l_max; ++l2) {
            if (p2 == p && l2 < l) continue;
            cd ip = product_integral_2d(
                b, z, {{p, l, true}, {p2, l2, false}}, 0.0);
            double expect = (p == p2 && l == l2) ? 1.0 : 0.0;
            CHECK(std::abs(ip - expect) < 1e-8);
          }
  }
}

TEST_CASE("spin-wave weights") {
  ModeBasis b = nominal_basis();
  CHECK(std::abs(spinwave_weight(b, 0, 0, 0.0, 0.0, 0.0) - 1.0) < 1e-14);
  CHECK(std::abs(spinwave_weight(b, 0, 0, b.w0, 0.9, 0.0) -
                 std::exp(-2.0)) < 1e-12);
  CHECK(std::abs(spinwave_weight(b, 2, 1, 0.0, 0.9, 0.2e-3)) == 0.0);
  // beta_00 is the relative intensity: real, in [0, 1], even off waist
  double bz = spinwave_weight(b, 0, 0, 1e-5, 0.1, 2e-3).real();
  CHECK(bz > 0.0);
  CHECK(bz < 1.0);
}

TEST_CASE("effective atom numbers: limits and ordering") {
  ModeBasis b = nominal_basis();
  CloudGeometry c = nominal_cloud();
  double n1 = effective_atom_number(c, b, 1);
  double n2 = effective_atom_number(c, b, 2);
  double n3 = effective_atom_number(c, b, 3);
  CHECK(n1 == doctest::Approx(1.09e6).epsilon(1e-10));
  CHECK(n1 > n2);
  CHECK(n2 > n3);
  CHECK(n3 > 0.0);

  // point cloud at the focus: every beta -> 1
  CloudGeometry tiny;
  tiny.eta0 = 1.0e18;
  tiny.w_perp = b.w0 / 200.0;
  tiny.w_z = b.rayleigh_range() / 200.0;
  for (int K = 1; K <= 3; ++K)
    CHECK(effective_atom_number(tiny, b, K) ==
          doctest::Approx(tiny.total_atoms()).epsilon(2e-4));

  // wide thin pancake at the waist: N2/N1 -> 1/2
  CloudGeometry flat;
  flat.eta0 = 1.0e15;
  flat.w_perp = 60.0 * b.w0;
  flat.w_z = b.rayleigh_range() / 100.0;
  double ratio = effective_atom_number(flat, b, 2) /
                 effective_atom_number(flat, b, 1);
  CHECK(ratio == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("projection overlaps: analytic values and selection") {
  ModeBasis b = nominal_basis();
  CHECK(overlap_c(b, 0, 0, 0, 0, 0.0).real() ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(overlap_c(b, 0, 0, 0, 0, 0.0).imag() == 0.0);
  // fundamental self-overlap tracks the beam expansion
  double zr = b.rayleigh_range();
  cd c0 = overlap_c(b, 0, 0, 0, 0, 0.0);
  cd czr = overlap_c(b, 0, 0, 0, 0, zr);
  CHECK((czr / c0).real() == doctest::Approx(0.5).epsilon(1e-10));
  // angular selection is exact zero, not merely small
  CHECK(overlap_c(b, 0, 1, 0, 1, 0.3e-3) == cd(0.0, 0.0));
  CHECK(overlap_g(b, 0, 1, 0, 1, 0, 1, 0.3e-3) == cd(0.0, 0.0));
  CHECK(overlap_g(b, 0, 0, 0, 0, 0, 0, 0.0).real() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("fundamental self-overlap is real, positive, decreasing in |z|") {
  ModeBasis b = nominal_basis();
  double prev_pos = 1e9, prev_neg = 0.0;
  for (int k = 0; k < b.k_slices; ++k) {
    cd v = overlap_c(b, 0, 0, 0, 0, b.slice_center(k));
    CHECK(v.imag() == 0.0);
    CHECK(v.real() > 0.0);
    if (b.slice_center(k) < 0.0)
      CHECK(v.real() > prev_neg);  // rising toward the waist
    prev_neg = b.slice_center(k) < 0.0 ? v.real() : prev_neg;
    if (b.slice_center(k) > 0.0) {
      CHECK(v.real() < prev_pos);
      prev_pos = v.real();
    }
  }
}

TEST_CASE("overlap values verified by independent 2-D quadrature, any phase") {
  ModeBasis b = nominal_basis();
  const double z = 0.8e-3;
  for (double theta : {0.0, 0.7}) {
    // c: two drive factors against two conjugated modes
    cd direct = product_integral_2d(
        b, z, {{0, 0, false}, {0, 0, false}, {1, 1, true}, {0, -1, true}},
        theta);
    cd table = overlap_c(b, 1, 1, 0, -1, z);
    CHECK(std::abs(direct - table) < 1e-8);
    // printed g carries the residual curvature phase; verbatim comparison
    cd direct_g =
        product_integral_2d(b, z,
                            {{0, 0, false},
                             {0, 0, false},
                             {0, 0, false},
                             {1, 2, false},
                             {1, 1, true},
                             {0, 1, true}},
                            0.0);
    cd table_g = overlap_g(b, 1, 1, 0, 1, 1, 2, z);
    CHECK(std::abs(direct_g - table_g) < 1e-8);
  }
}

TEST_CASE("engine tables: slice grid, sums, and cross-checks") {
  ModeBasis b = nominal_basis();
  CloudGeometry c = nominal_cloud();
  // slice grid tiles the extent without gaps
  CHECK(b.slice_center(0) - 0.5 * b.slice_width() ==
        doctest::Approx(-b.z_extent).epsilon(1e-12));
  CHECK(b.slice_center(b.k_slices - 1) + 0.5 * b.slice_width() ==
        doctest::Approx(b.z_extent).epsilon(1e-12));

  EngineTables t = build_tables(c, b);
  CHECK(t.n_p == 3);
  CHECK(t.n_k == 12);
  CHECK(t.n_modes == 15);

  // mode-population sums reproduce the effective atom numbers
  double sum_n1 = 0.0, sum_n2 = 0.0;
  for (int k = 0; k < t.n_k; ++k) {
    sum_n1 += t.npop_at(0, k);
    sum_n2 += t.b2_at(0, 0, k);
  }
  CHECK(sum_n1 == doctest::Approx(t.n1).epsilon(1e-6));
  CHECK(sum_n2 == doctest::Approx(t.n2).epsilon(1e-6));

  // doubling the slice count leaves the slice-summed totals unchanged
  ModeBasis b2x = b;
  b2x.k_slices = 24;
  EngineTables t2 = build_tables(c, b2x);
  double sum2 = 0.0;
  for (int k = 0; k < t2.n_k; ++k) sum2 += t2.npop_at(0, k);
  CHECK(sum2 == doctest::Approx(sum_n1).epsilon(1e-6));

  // drift overlap magnitude equals the complex projection table's
  for (int k = 0; k < t.n_k; ++k)
    for (int p = 0; p < t.n_p; ++p)
      for (int pq = 0; pq < t.n_p; ++pq) {
        cd cv = t.c_at(b.mode_index(p, 0), b.mode_index(pq, 0), k);
        CHECK(std::fabs(std::fabs(t.kt(p, pq, k)) - std::abs(cv)) < 1e-10);
      }

  // rephased complex contractions reproduce the real engine tables for any
  // injected global phase
  for (double theta : {0.0, 0.9}) {
    const int k = 3;
    const double zk = b.slice_center(k);
    const double psi = b.gouy_phase(zk);
    cd craw = product_integral_2d(
        b, zk, {{0, 0, false}, {0, 0, false}, {2, 0, true}, {1, 0, true}},
        theta);
    cd rephased = craw * std::exp(cd(0.0, (2.0 * 2 + 2.0 * 1) * psi));
    CHECK(std::abs(rephased - cd(t.kt(2, 1, k), 0.0)) < 1e-8);

    cd graw = product_integral_2d(b, zk,
                                  {{0, 0, false},
                                   {0, 0, false},
                                   {0, 0, true},
                                   {2, 0, false},
                                   {1, 0, true},
                                   {0, 0, true}},
                                  theta);
    cd grephased = graw * std::exp(cd(0.0, -(2.0 * 2 - 2.0 * 1 - 0.0) * psi));
    CHECK(std::abs(grephased - cd(t.gt(1, 0, 2, k), 0.0)) < 1e-8);
  }
}

TEST_CASE("tables are stable under quadrature-order doubling") {
  ModeBasis b = nominal_basis();
  CloudGeometry c = nominal_cloud();
  ModeBasis b2 = b;
  b2.radial_order = 128;
  const double z = 0.6e-3;
  for (int p = 0; p <= 2; ++p)
    for (int pq = 0; pq <= 2; ++pq) {
      CHECK(std::abs(overlap_c(b, p, 1, pq, -1, z) -
                     overlap_c(b2, p, 1, pq, -1, z)) < 1e-8);
      CHECK(std::abs(overlap_g(b, p, 1, pq, 1, 0, 2, z) -
                     overlap_g(b2, p, 1, pq, 1, 0, 2, z)) < 1e-8);
    }
}

TEST_CASE("initial moment state from tables") {
  ModeBasis b = nominal_basis();
  CloudGeometry c = nominal_cloud();
  EngineTables t = build_tables(c, b);
  MomentState s = initial_moment_state(t);
  CHECK(s.n_p == 3);
  CHECK(s.n_k == 12);
  CHECK(s.pops[0].row(0).sum() == doctest::Approx(t.n1).epsilon(1e-6));
  CHECK(s.pops[1].norm() == 0.0);
  CHECK(s.pops[2].norm() == 0.0);
  CHECK(s.x.norm() == 0.0);
  // covariance: only the ud block, block diagonal in slice
  CHECK(s.cov(s.idx(0, 0, 0), s.idx(0, 0, 1)) == 0.0);
  CHECK(s.cov.block(s.dim() / 2, 0, s.dim() / 2, s.dim()).norm() == 0.0);
  // fundamental-mode transverse spin variance: v^2 sum_k B2(0,0,k)/2 with
  // v = 2 equals N2 f / 2 at f = 4
  double var = 0.0;
  for (int k = 0; k < s.n_k; ++k)
    var += 4.0 * s.cov(s.idx(0, 0, k), s.idx(0, 0, k));
  CHECK(var == doctest::Approx(2.0 * t.n2).epsilon(1e-6));
  // thermal flag scales the spin variance by exactly 10/3
  MomentState st = initial_moment_state(t, true);
  CHECK(st.cov(st.idx(0, 1, 2), st.idx(0, 2, 2)) /
            s.cov(s.idx(0, 1, 2), s.idx(0, 2, 2)) ==
        doctest::Approx(10.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("table cache: roundtrip, corruption, hash guard") {
  ModeBasis b = nominal_basis();
  b.p_max = 1;
  b.l_max = 1;
  b.k_slices = 4;
  CloudGeometry c = nominal_cloud();
  EngineTables t = build_tables(c, b);
  const std::string path = "/tmp/faraday_tables_test.bin";
  save_tables(t, path);
  EngineTables r = load_tables(path);
  CHECK(r.config_hash == t.config_hash);
  CHECK(r.n_p == t.n_p);
  CHECK(r.ktab == t.ktab);
  CHECK(r.gtab == t.gtab);
  CHECK(r.b2 == t.b2);
  CHECK(r.npop == t.npop);
  CHECK(r.ctab == t.ctab);
  CHECK(r.gfull == t.gfull);
  CHECK(r.n2 == doctest::Approx(t.n2).epsilon(1e-15));

  // corrupted magic rejected
  {
    std::FILE* f = std::fopen(path.c_str(), "rb+");
    REQUIRE(f != nullptr);
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_tables(path), Error);
  CHECK_THROWS_AS(load_tables("/tmp/does_not_exist_faraday.bin"), Error);
  std::remove(path.c_str());
}
