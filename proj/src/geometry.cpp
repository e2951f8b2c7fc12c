#include "faraday/geometry.hpp"

#include "faraday/constants.hpp"
#include "faraday/errors.hpp"
#include "faraday/hash.hpp"
#include "faraday/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <vector>

namespace faraday {

namespace {

// Associated Laguerre L_p^a(x) by upward recurrence.
double laguerre_assoc(int p, int a, double x) {
  if (p == 0) return 1.0;
  double lm1 = 1.0, l0 = 1.0 + a - x;
  for (int k = 1; k < p; ++k) {
    double l1 = ((2.0 * k + 1.0 + a - x) * l0 - (k + a) * lm1) / (k + 1.0);
    lm1 = l0;
    l0 = l1;
  }
  return l0;
}

// sqrt(p! / (p+a)!)
double lg_norm_coeff(int p, int a) {
  double v = 1.0;
  for (int j = p + 1; j <= p + a; ++j) v *= j;
  return 1.0 / std::sqrt(v);
}

const QuadRule& radial_rule(int order) {
  static std::map<int, QuadRule> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_laguerre(order)).first;
  return it->second;
}

struct RadialFactor {
  int p;
  int al;  // |l|
};

// integral d2r of a product of LG radial magnitudes at plane z, optionally
// weighted by the cloud's transverse Gaussian and by exp(i phase_r2 r^2).
// The angular integral has already been done (exact selection), so the
// measure here is 2 pi r dr. Substituting t = alpha r^2 with alpha the total
// Gaussian exponent leaves a polynomial integrand: Gauss-Laguerre is exact.
std::complex<double> radial_product_integral(const ModeBasis& b, double z,
                                             const std::vector<RadialFactor>& fs,
                                             const CloudGeometry* cloud,
                                             double phase_r2) {
  const QuadRule& q = radial_rule(b.radial_order);
  const double w = b.waist_at(z);
  const double winv2 = 1.0 / (w * w);
  double alpha = static_cast<double>(fs.size()) * winv2;
  if (cloud) alpha += 2.0 / (cloud->w_perp * cloud->w_perp);
  int altot = 0;
  for (const auto& f : fs) altot += f.al;
  if (altot % 2 != 0)
    throw numerical_error("radial integral with odd angular power");
  double pref = std::pow(b.w0 / w, static_cast<double>(fs.size()));
  std::complex<double> sum = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) {
    const double r2 = q.x[i] / alpha;
    const double xw = 2.0 * r2 * winv2;  // Laguerre argument 2 r^2 / w^2
    double poly = std::pow(xw, altot / 2);
    for (const auto& f : fs)
      poly *= lg_norm_coeff(f.p, f.al) * laguerre_assoc(f.p, f.al, xw);
    if (phase_r2 != 0.0) {
      sum += q.w[i] * poly *
             std::exp(std::complex<double>(0.0, phase_r2 * r2));
    } else {
      sum += q.w[i] * poly;
    }
  }
  return pref * (pi / alpha) * sum;
}

// Gauss-Legendre z-quadrature of the cloud's longitudinal Gaussian times a
// transverse radial integral, over [za, zb].
template <typename F>
double z_integral(const CloudGeometry& cloud, double za, double zb, int order,
                  F&& transverse) {
  QuadRule q = gauss_legendre(order, za, zb);
  double s = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) {
    double z = q.x[i];
    double etaz =
        cloud.eta0 * std::exp(-2.0 * z * z / (cloud.w_z * cloud.w_z));
    s += q.w[i] * etaz * transverse(z);
  }
  return s;
}

}  // namespace

double CloudGeometry::total_atoms() const {
  return eta0 * std::pow(pi / 2.0, 1.5) * w_perp * w_perp * w_z;
}

ModeBasis ModeBasis::standard(double w0, double wavelength, double cloud_wz) {
  ModeBasis b;
  b.w0 = w0;
  b.wavelength = wavelength;
  b.z_extent = 3.0 * cloud_wz;
  return b;
}

double ModeBasis::rayleigh_range() const {
  return pi * w0 * w0 / wavelength;
}

double ModeBasis::area() const { return pi * w0 * w0 / 2.0; }

double ModeBasis::waist_at(double z) const {
  double zr = rayleigh_range();
  return w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
}

double ModeBasis::gouy_phase(double z) const {
  return std::atan(z / rayleigh_range());
}

double ModeBasis::inv_curvature(double z) const {
  double zr = rayleigh_range();
  return z / (z * z + zr * zr);
}

int ModeBasis::mode_index(int p, int l) const {
  if (p < 0 || p > p_max || l < -l_max || l > l_max)
    throw config_error("mode index out of basis range");
  return p * (2 * l_max + 1) + (l + l_max);
}

double ModeBasis::slice_width() const { return 2.0 * z_extent / k_slices; }

double ModeBasis::slice_center(int k) const {
  if (k < 0 || k >= k_slices) throw config_error("slice index out of range");
  return -z_extent + (k + 0.5) * slice_width();
}

double lg_radial_magnitude(const ModeBasis& basis, int p, int l, double r,
                           double z) {
  const int al = std::abs(l);
  const double w = basis.waist_at(z);
  const double xw = 2.0 * r * r / (w * w);
  return (basis.w0 / w) * lg_norm_coeff(p, al) *
         std::pow(std::sqrt(2.0) * r / w, al) * laguerre_assoc(p, al, xw) *
         std::exp(-r * r / (w * w));
}

std::complex<double> lg_mode_amplitude(const ModeBasis& basis, int p, int l,
                                       double r, double phi, double z) {
  const int al = std::abs(l);
  const double k = two_pi / basis.wavelength;
  const double phase = l * phi - 0.5 * k * r * r * basis.inv_curvature(z) +
                       (2 * p + al + 1) * basis.gouy_phase(z);
  return lg_radial_magnitude(basis, p, l, r, z) *
         std::exp(std::complex<double>(0.0, phase));
}

std::complex<double> spinwave_weight(const ModeBasis& basis, int p, int l,
                                     double r, double phi, double z) {
  return std::conj(lg_mode_amplitude(basis, p, l, r, phi, z)) *
         lg_mode_amplitude(basis, 0, 0, r, phi, z);
}

double effective_atom_number(const CloudGeometry& cloud, const ModeBasis& basis,
                             int K) {
  if (K < 1 || K > 3) throw config_error("effective atom number needs K in 1..3");
  std::vector<RadialFactor> fs(2 * K, RadialFactor{0, 0});
  // +-6 w_z covers the density to below 1e-9 relative.
  return z_integral(cloud, -6.0 * cloud.w_z, 6.0 * cloud.w_z, 96,
                    [&](double z) {
                      return radial_product_integral(basis, z, fs, &cloud, 0.0)
                          .real();
                    });
}

void set_peak_density_for_n1(CloudGeometry& cloud, const ModeBasis& basis,
                             double n1) {
  if (n1 <= 0.0) throw config_error("target N1 must be positive");
  CloudGeometry unit = cloud;
  unit.eta0 = 1.0;
  double base = effective_atom_number(unit, basis, 1);
  cloud.eta0 = n1 / base;
}

std::complex<double> overlap_c(const ModeBasis& basis, int p, int l, int pp,
                               int lp, double z) {
  if (l + lp != 0) return 0.0;  // angular selection, exact
  const int al = std::abs(l), alp = std::abs(lp);
  std::vector<RadialFactor> fs = {{p, al}, {pp, alp}, {0, 0}, {0, 0}};
  double radial =
      radial_product_integral(basis, z, fs, nullptr, 0.0).real() / basis.area();
  // Wavefront curvature cancels between the two conjugated and two plain
  // factors; only the Gouy mismatch survives.
  double gouy = -(2.0 * p + 2.0 * pp + al + alp) * basis.gouy_phase(z);
  return radial * std::exp(std::complex<double>(0.0, gouy));
}

std::complex<double> overlap_g(const ModeBasis& basis, int p, int l, int pp,
                               int lp, int ppp, int lpp, double z) {
  if (lpp != l + lp) return 0.0;  // angular selection, exact
  const int al = std::abs(l), alp = std::abs(lp), alpp = std::abs(lpp);
  std::vector<RadialFactor> fs = {{ppp, alpp}, {p, al},  {pp, alp},
                                  {0, 0},      {0, 0},   {0, 0}};
  // Four plain factors against two conjugated ones leave a residual
  // curvature phase exp(-i k r^2 / R) inside the integral.
  const double k = two_pi / basis.wavelength;
  std::complex<double> radial =
      radial_product_integral(basis, z, fs, nullptr,
                              -k * basis.inv_curvature(z)) /
      basis.area();
  double gouy = (2.0 + 2.0 * ppp + alpp - 2.0 * p - al - 2.0 * pp - alp) *
                basis.gouy_phase(z);
  return radial * std::exp(std::complex<double>(0.0, gouy));
}

uint64_t table_config_hash(const CloudGeometry& cloud, const ModeBasis& basis) {
  uint64_t h = fnv1a64("faraday-tables", 14);
  hash_mix(h, basis.w0);
  hash_mix(h, basis.wavelength);
  hash_mix(h, static_cast<int64_t>(basis.p_max));
  hash_mix(h, static_cast<int64_t>(basis.l_max));
  hash_mix(h, static_cast<int64_t>(basis.k_slices));
  hash_mix(h, basis.z_extent);
  hash_mix(h, static_cast<int64_t>(basis.radial_order));
  hash_mix(h, static_cast<int64_t>(basis.angular_order));
  hash_mix(h, cloud.eta0);
  hash_mix(h, cloud.w_perp);
  hash_mix(h, cloud.w_z);
  return h;
}

EngineTables build_tables(const CloudGeometry& cloud, const ModeBasis& basis) {
  EngineTables t;
  t.basis = basis;
  t.cloud = cloud;
  t.n_p = basis.p_max + 1;
  t.n_k = basis.k_slices;
  t.n_modes = basis.n_modes();
  t.config_hash = table_config_hash(cloud, basis);

  const int np = t.n_p, nk = t.n_k, nm = t.n_modes;
  t.ktab.assign(static_cast<size_t>(np) * np * nk, 0.0);
  t.gtab.assign(static_cast<size_t>(np) * np * np * nk, 0.0);
  t.b2.assign(static_cast<size_t>(np) * np * nk, 0.0);
  t.npop.assign(static_cast<size_t>(np) * nk, 0.0);
  t.ctab.assign(static_cast<size_t>(nm) * nm * nk, 0.0);
  t.gfull.assign(static_cast<size_t>(nm) * nm * nm * nk, 0.0);

  for (int k = 0; k < nk; ++k) {
    const double zk = basis.slice_center(k);
    const double za = zk - 0.5 * basis.slice_width();
    const double zb = zk + 0.5 * basis.slice_width();

    // Rephased real l = 0 sector at the slice center: drift and injection
    // overlaps of the moment engine.
    for (int p = 0; p < np; ++p) {
      for (int pq = 0; pq < np; ++pq) {
        std::vector<RadialFactor> f4 = {{p, 0}, {pq, 0}, {0, 0}, {0, 0}};
        t.ktab[(p * np + pq) * nk + k] =
            radial_product_integral(basis, zk, f4, nullptr, 0.0).real() /
            basis.area();
        for (int pr = 0; pr < np; ++pr) {
          std::vector<RadialFactor> f6 = {{p, 0},  {pq, 0}, {pr, 0},
                                          {0, 0},  {0, 0},  {0, 0}};
          t.gtab[((p * np + pq) * np + pr) * nk + k] =
              radial_product_integral(basis, zk, f6, nullptr, 0.0).real() /
              basis.area();
        }
        // Slice-integrated density-weighted pair overlap.
        std::vector<RadialFactor> fb = {{p, 0}, {pq, 0}, {0, 0}, {0, 0}};
        t.b2[(p * np + pq) * nk + k] =
            z_integral(cloud, za, zb, 16, [&](double z) {
              return radial_product_integral(basis, z, fb, &cloud, 0.0).real();
            });
      }
      std::vector<RadialFactor> fn = {{p, 0}, {0, 0}};
      t.npop[p * nk + k] = z_integral(cloud, za, zb, 16, [&](double z) {
        return radial_product_integral(basis, z, fn, &cloud, 0.0).real();
      });
    }

    // Full complex overlap tables at the slice center.
    for (int p = 0; p <= basis.p_max; ++p)
      for (int l = -basis.l_max; l <= basis.l_max; ++l) {
        int m = basis.mode_index(p, l);
        for (int p2 = 0; p2 <= basis.p_max; ++p2)
          for (int l2 = -basis.l_max; l2 <= basis.l_max; ++l2) {
            int m2 = basis.mode_index(p2, l2);
            t.ctab[(m * nm + m2) * nk + k] =
                overlap_c(basis, p, l, p2, l2, zk);
            for (int p3 = 0; p3 <= basis.p_max; ++p3)
              for (int l3 = -basis.l_max; l3 <= basis.l_max; ++l3) {
                int m3 = basis.mode_index(p3, l3);
                t.gfull[((m * nm + m2) * nm + m3) * nk + k] =
                    overlap_g(basis, p, l, p2, l2, p3, l3, zk);
              }
          }
      }
  }

  t.n1 = effective_atom_number(cloud, basis, 1);
  t.n2 = effective_atom_number(cloud, basis, 2);
  t.n3 = effective_atom_number(cloud, basis, 3);
  return t;
}

namespace {

constexpr char kTableMagic[4] = {'F', 'T', 'B', 'L'};
constexpr uint32_t kTableVersion = 1;

void write_raw(std::FILE* f, const void* p, size_t n, const std::string& path) {
  if (std::fwrite(p, 1, n, f) != n)
    throw io_error("short write to table cache " + path);
}

void read_raw(std::FILE* f, void* p, size_t n, const std::string& path) {
  if (std::fread(p, 1, n, f) != n)
    throw io_error("short read from table cache " + path);
}

void write_vec(std::FILE* f, const std::vector<double>& v,
               const std::string& path) {
  uint64_t n = v.size();
  write_raw(f, &n, sizeof n, path);
  write_raw(f, v.data(), n * sizeof(double), path);
}

void write_cvec(std::FILE* f, const std::vector<std::complex<double>>& v,
                const std::string& path) {
  uint64_t n = v.size();
  write_raw(f, &n, sizeof n, path);
  write_raw(f, v.data(), n * 2 * sizeof(double), path);
}

std::vector<double> read_vec(std::FILE* f, const std::string& path) {
  uint64_t n = 0;
  read_raw(f, &n, sizeof n, path);
  if (n > (1ull << 28)) throw io_error("table cache block too large: " + path);
  std::vector<double> v(n);
  read_raw(f, v.data(), n * sizeof(double), path);
  return v;
}

std::vector<std::complex<double>> read_cvec(std::FILE* f,
                                            const std::string& path) {
  uint64_t n = 0;
  read_raw(f, &n, sizeof n, path);
  if (n > (1ull << 27)) throw io_error("table cache block too large: " + path);
  std::vector<std::complex<double>> v(n);
  read_raw(f, v.data(), n * 2 * sizeof(double), path);
  return v;
}

}  // namespace

void save_tables(const EngineTables& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw io_error("cannot open table cache for writing: " + path);
  try {
    write_raw(f, kTableMagic, 4, path);
    write_raw(f, &kTableVersion, sizeof kTableVersion, path);
    write_raw(f, &t.config_hash, sizeof t.config_hash, path);
    int32_t ints[8] = {t.basis.p_max,       t.basis.l_max,
                       t.basis.k_slices,    t.basis.radial_order,
                       t.basis.angular_order, t.n_p,
                       t.n_k,               t.n_modes};
    write_raw(f, ints, sizeof ints, path);
    double reals[9] = {t.basis.w0, t.basis.wavelength, t.basis.z_extent,
                       t.cloud.eta0, t.cloud.w_perp, t.cloud.w_z,
                       t.n1, t.n2, t.n3};
    write_raw(f, reals, sizeof reals, path);
    write_vec(f, t.ktab, path);
    write_vec(f, t.gtab, path);
    write_vec(f, t.b2, path);
    write_vec(f, t.npop, path);
    write_cvec(f, t.ctab, path);
    write_cvec(f, t.gfull, path);
  } catch (...) {
    std::fclose(f);
    throw;
  }
  if (std::fclose(f) != 0) throw io_error("cannot finish table cache " + path);
}

EngineTables load_tables(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw io_error("cannot open table cache: " + path);
  EngineTables t;
  try {
    char magic[4];
    read_raw(f, magic, 4, path);
    if (std::memcmp(magic, kTableMagic, 4) != 0)
      throw io_error("bad table cache magic: " + path);
    uint32_t version = 0;
    read_raw(f, &version, sizeof version, path);
    if (version != kTableVersion)
      throw io_error("unsupported table cache version: " + path);
    read_raw(f, &t.config_hash, sizeof t.config_hash, path);
    int32_t ints[8];
    read_raw(f, ints, sizeof ints, path);
    t.basis.p_max = ints[0];
    t.basis.l_max = ints[1];
    t.basis.k_slices = ints[2];
    t.basis.radial_order = ints[3];
    t.basis.angular_order = ints[4];
    t.n_p = ints[5];
    t.n_k = ints[6];
    t.n_modes = ints[7];
    double reals[9];
    read_raw(f, reals, sizeof reals, path);
    t.basis.w0 = reals[0];
    t.basis.wavelength = reals[1];
    t.basis.z_extent = reals[2];
    t.cloud.eta0 = reals[3];
    t.cloud.w_perp = reals[4];
    t.cloud.w_z = reals[5];
    t.n1 = reals[6];
    t.n2 = reals[7];
    t.n3 = reals[8];
    t.ktab = read_vec(f, path);
    t.gtab = read_vec(f, path);
    t.b2 = read_vec(f, path);
    t.npop = read_vec(f, path);
    t.ctab = read_cvec(f, path);
    t.gfull = read_cvec(f, path);
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  size_t np = t.n_p, nk = t.n_k, nm = t.n_modes;
  if (t.ktab.size() != np * np * nk || t.gtab.size() != np * np * np * nk ||
      t.b2.size() != np * np * nk || t.npop.size() != np * nk ||
      t.ctab.size() != nm * nm * nk || t.gfull.size() != nm * nm * nm * nk)
    throw io_error("table cache block sizes inconsistent: " + path);
  if (t.config_hash != table_config_hash(t.cloud, t.basis))
    throw io_error("table cache hash does not match its config: " + path);
  return t;
}

MomentState initial_moment_state(const EngineTables& tables, bool thermal) {
  MomentState s;
  s.n_p = tables.n_p;
  s.n_k = tables.n_k;
  for (auto& m : s.pops) m = Eigen::MatrixXd::Zero(s.n_p, s.n_k);
  for (int p = 0; p < s.n_p; ++p)
    for (int k = 0; k < s.n_k; ++k) s.pops[0](p, k) = tables.npop_at(p, k);
  s.x = Eigen::VectorXd::Zero(s.dim());
  s.x_ut = Eigen::VectorXd::Zero(s.n_p * s.n_k);
  s.cov = Eigen::MatrixXd::Zero(s.dim(), s.dim());
  // Fiducial (all-up) one-atom second moment: <x_ud x_ud>_sym = 1/2, all
  // other coherence moments vanish. Slice sums are independent atoms, so
  // the covariance is block diagonal in k.
  const double scale = thermal ? 10.0 / 3.0 : 1.0;
  for (int k = 0; k < s.n_k; ++k)
    for (int p = 0; p < s.n_p; ++p)
      for (int pq = 0; pq < s.n_p; ++pq)
        s.cov(s.idx(0, p, k), s.idx(0, pq, k)) =
            0.5 * scale * tables.b2_at(p, pq, k);
  return s;
}

}  // namespace faraday
