#include "faraday/atomic.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "faraday/constants.hpp"
#include "faraday/errors.hpp"
#include "faraday/hash.hpp"
#include "faraday/wigner.hpp"

namespace faraday {

namespace {

// Hyperfine shift of |j f⟩: (A/2)K + B-term with the conventional
// quadrupole denominator 4I(2I-1)J(2J-1). K = f(f+1) - i(i+1) - j(j+1).
double hf_shift(double a_hf, double b_hf, double i, double j, double f) {
  double K = f * (f + 1.0) - i * (i + 1.0) - j * (j + 1.0);
  double shift = 0.5 * a_hf * K;
  if (b_hf != 0.0 && j > 0.5) {
    double num = 1.5 * K * (K + 1.0) - 2.0 * i * (i + 1.0) * j * (j + 1.0);
    double den = 4.0 * i * (2.0 * i - 1.0) * j * (2.0 * j - 1.0);
    shift += b_hf * num / den;
  }
  return shift;
}

}  // namespace

AtomicSpecies AtomicSpecies::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open atomic data file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const std::exception& e) {
    throw io_error("atomic data parse failure: " + std::string(e.what()));
  }

  AtomicSpecies s;
  s.name = j.at("species").get<std::string>();
  s.nuclear_spin = j.at("nuclear_spin").get<double>();
  s.f_ground = j.at("ground_f").get<int>();
  s.ground_splitting =
      two_pi * j.at("ground_hyperfine_splitting_hz").get<double>();
  s.data_hash = fnv1a64(bytes);

  for (const auto& lj : j.at("lines")) {
    ExcitedLine L;
    L.name = lj.at("name").get<std::string>();
    L.j_excited = lj.at("j_excited").get<double>();
    L.wavelength = lj.at("wavelength_nm").get<double>() * 1e-9;
    L.omega = two_pi * c_light / L.wavelength;
    L.gamma = two_pi * lj.at("gamma_2pi_mhz").get<double>() * 1e6;
    L.a_hf = two_pi * lj.at("ahf_2pi_mhz").get<double>() * 1e6;
    L.b_hf = two_pi * lj.at("bhf_2pi_mhz").get<double>() * 1e6;
    L.sigma0 = 3.0 * L.wavelength * L.wavelength / two_pi;
    L.i_sat = hbar * L.omega * L.gamma / (2.0 * L.sigma0);

    const double i = s.nuclear_spin, jp = L.j_excited;
    int fmin = static_cast<int>(std::round(std::fabs(jp - i)));
    int fmax = static_cast<int>(std::round(jp + i));
    double top = hf_shift(L.a_hf, L.b_hf, i, jp, fmax);
    for (int fp = fmin; fp <= fmax; ++fp) {
      L.fprimes.push_back(fp);
      L.offsets[fp] = hf_shift(L.a_hf, L.b_hf, i, jp, fp) - top;
    }
    s.lines.push_back(std::move(L));
  }
  return s;
}

AtomicSpecies AtomicSpecies::cesium() {
  return load(std::string(FARADAY_DATA_DIR) + "/cs133.json");
}

const ExcitedLine& AtomicSpecies::line(double j_excited) const {
  for (const auto& L : lines)
    if (std::fabs(L.j_excited - j_excited) < 1e-9) return L;
  throw config_error("no such excited line (j')");
}

double detuning_to_level(const AtomicSpecies& s, double j_excited, int f_prime,
                         double delta) {
  const ExcitedLine& L = s.line(j_excited);
  auto it = L.offsets.find(f_prime);
  if (it == L.offsets.end()) throw config_error("f' outside excited manifold");
  return delta - it->second;
}

Eigen::MatrixXd dipole_raising_operator(const AtomicSpecies& s,
                                        double j_excited, int f_prime, int f,
                                        int q) {
  const double i = s.nuclear_spin, jp = j_excited, jg = 0.5;
  const int dim_e = 2 * f_prime + 1, dim_g = 2 * f + 1;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(dim_e, dim_g);
  // Reduced element from recoupling |(jg i) f⟩ → |(jp i) f'⟩; normalized so
  // Σ_{q,f} Tr[D†D] = 2f'+1 (unit branching per excited state).
  int phase_exp = static_cast<int>(std::round(jp + i + f + 1));
  double w = ((phase_exp % 2) ? -1.0 : 1.0) *
             std::sqrt((2.0 * f + 1.0) * (2.0 * jp + 1.0)) *
             wigner6j(jp, f_prime, i, f, jg, 1.0);
  for (int mi = 0; mi < dim_g; ++mi) {
    int m = mi - f;
    int mp = m + q;
    if (mp < -f_prime || mp > f_prime) continue;
    D(mp + f_prime, mi) = w * clebsch_gordan(f, m, 1, q, f_prime, mp);
  }
  return D;
}

namespace {

// ac-Stark operator on the ground level for a given drive polarization.
Eigen::MatrixXd stark_operator(const AtomicSpecies& s, double j_excited,
                               int f_prime, int f, char pol) {
  if (pol == 'x') {
    Eigen::MatrixXd Dm = dipole_raising_operator(s, j_excited, f_prime, f, -1);
    Eigen::MatrixXd Dp = dipole_raising_operator(s, j_excited, f_prime, f, +1);
    Eigen::MatrixXd Dx = (Dm - Dp) / std::sqrt(2.0);
    return Dx.transpose() * Dx;
  }
  Eigen::MatrixXd Dq =
      dipole_raising_operator(s, j_excited, f_prime, f, pol == '+' ? +1 : -1);
  return Dq.transpose() * Dq;
}

}  // namespace

RankCoefficients coefficients_CK(const AtomicSpecies& s, double j_excited,
                                 int f_prime) {
  const int f = s.f_ground;
  const int n = 2 * f + 1;
  Eigen::MatrixXd Ax = stark_operator(s, j_excited, f_prime, f, 'x');

  // A_x is diagonal in m with only even powers of m; fit C0 + C2 m².
  double s2 = 0.0, s4 = 0.0, t1 = 0.0, t2 = 0.0;
  for (int mi = 0; mi < n; ++mi) {
    double m = mi - f;
    s2 += m * m;
    s4 += m * m * m * m;
    t1 += Ax(mi, mi);
    t2 += Ax(mi, mi) * m * m;
  }
  RankCoefficients ck;
  ck.c2 = (t2 - t1 * s2 / n) / (s4 - s2 * s2 / n);
  ck.c0 = (t1 - ck.c2 * s2) / n;

  // Vector part from the σ- drive; this sign convention makes the D1 sum
  // +1/(3f) and the D2 sum -1/(3f).
  Eigen::MatrixXd Am = stark_operator(s, j_excited, f_prime, f, '-');
  Eigen::MatrixXd fz = spin_fz(f);
  ck.c1 = (Am * fz).trace() / (fz * fz).trace();
  return ck;
}

double effective_CK(const AtomicSpecies& s, double j_excited, int rank,
                    double delta) {
  const ExcitedLine& L = s.line(j_excited);
  double sum = 0.0;
  for (int fp : L.fprimes) {
    double d = detuning_to_level(s, j_excited, fp, delta);
    if (std::fabs(d) < 10.0 * L.gamma)
      throw numerical_error("probe within 10 linewidths of the " + L.name +
                            " f'=" + std::to_string(fp) + " line");
    RankCoefficients ck = coefficients_CK(s, j_excited, fp);
    double c = rank == 0 ? ck.c0 : rank == 1 ? ck.c1 : ck.c2;
    sum += c * delta / d;
  }
  return sum;
}

std::map<int, double> line_strengths(const AtomicSpecies& s,
                                     double j_excited) {
  const ExcitedLine& L = s.line(j_excited);
  std::map<int, double> out;
  double total = 0.0;
  for (int fp : L.fprimes) {
    double t = stark_operator(s, j_excited, fp, s.f_ground, 'x').trace();
    out[fp] = t;
    total += t;
  }
  for (auto& kv : out) kv.second /= total;
  return out;
}

double lineshape_sigma(const AtomicSpecies& s, double j_excited,
                       double delta) {
  const ExcitedLine& L = s.line(j_excited);
  auto strengths = line_strengths(s, j_excited);
  double sum = 0.0;
  for (int fp : L.fprimes) {
    double d = detuning_to_level(s, j_excited, fp, delta);
    if (std::fabs(d) < 10.0 * L.gamma)
      throw numerical_error("probe within 10 linewidths of the " + L.name +
                            " f'=" + std::to_string(fp) + " line");
    sum += strengths[fp] * (delta * delta) / (d * d);
  }
  return sum;
}

Eigen::MatrixXd spin_fz(double f) {
  int n = static_cast<int>(std::round(2.0 * f)) + 1;
  Eigen::MatrixXd fz = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) fz(i, i) = i - f;
  return fz;
}

Eigen::MatrixXd spin_fx(double f) {
  int n = static_cast<int>(std::round(2.0 * f)) + 1;
  Eigen::MatrixXd fx = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    double m = i - f;
    double amp = 0.5 * std::sqrt(f * (f + 1.0) - m * (m + 1.0));
    fx(i + 1, i) = amp;
    fx(i, i + 1) = amp;
  }
  return fx;
}

Eigen::MatrixXcd spin_fy(double f) {
  int n = static_cast<int>(std::round(2.0 * f)) + 1;
  Eigen::MatrixXcd fy = Eigen::MatrixXcd::Zero(n, n);
  const std::complex<double> ihalf(0.0, 0.5);
  for (int i = 0; i + 1 < n; ++i) {
    double m = i - f;
    double amp = std::sqrt(f * (f + 1.0) - m * (m + 1.0));
    fy(i + 1, i) = -ihalf * amp;  // (f+ - f-)/2i, raising part
    fy(i, i + 1) = ihalf * amp;
  }
  return fy;
}

}  // namespace faraday
