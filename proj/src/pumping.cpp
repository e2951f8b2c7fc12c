#include "faraday/pumping.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "faraday/constants.hpp"
#include "faraday/errors.hpp"

namespace faraday {

namespace {

constexpr int kDim = 9;  // f=4 sublevels
using cd = std::complex<double>;

int vidx(int i, int j) { return kDim * i + j; }

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v) {
  Eigen::MatrixXcd m(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m(i, j) = v(vidx(i, j));
  return m;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  Eigen::VectorXcd v(kDim * kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) v(vidx(i, j)) = m(i, j);
  return v;
}

// x-polarized absorption f=4 -> f': (D_{-1} - D_{+1})/√2, the same drive
// convention the rank coefficients use.
Eigen::MatrixXd raise_x(const AtomicSpecies& s, double j_excited, int fp) {
  Eigen::MatrixXd dm = dipole_raising_operator(s, j_excited, fp, 4, -1);
  Eigen::MatrixXd dp = dipole_raising_operator(s, j_excited, fp, 4, +1);
  return (dm - dp) / std::sqrt(2.0);
}

// exp(A) for a small real matrix by scaling-and-squaring Taylor; A here is
// (π/2) times the antisymmetric generator of rotations about y.
Eigen::MatrixXd real_matrix_exp(const Eigen::MatrixXd& a) {
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.125) {
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd as = a / std::pow(2.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 14; ++k) {
    term = (term * as) / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

}  // namespace

JumpOperators jump_operators(const AtomicSpecies& s, double j_excited,
                             double delta) {
  const ExcitedLine& line = s.line(j_excited);
  JumpOperators out;
  Eigen::MatrixXcd rate = Eigen::MatrixXcd::Zero(kDim, kDim);
  for (int q = -1; q <= 1; ++q)
    out.w[q + 1] = Eigen::MatrixXcd::Zero(kDim, kDim);

  for (int fp : line.fprimes) {
    if (std::abs(fp - 4) > 1) continue;
    // complex line sum: the iΓ/2 keeps absorption and feeding consistent
    cd amp = 1.0 / (cd(detuning_to_level(s, j_excited, fp, delta),
                       0.5 * line.gamma));
    Eigen::MatrixXd rx = raise_x(s, j_excited, fp);
    for (int q = -1; q <= 1; ++q) {
      Eigen::MatrixXd lower =
          dipole_raising_operator(s, j_excited, fp, 4, q).transpose();
      out.w[q + 1] += amp * (lower * rx).cast<cd>();
    }
    rate += line.gamma * std::norm(amp) * (rx.transpose() * rx).cast<cd>();
  }
  out.h_loss = cd(0.0, -0.5) * rate;
  out.gamma_char =
      (line.gamma / (delta * delta)) * lineshape_sigma(s, j_excited, delta);
  return out;
}

GroundSuperop single_atom_pumping_map(const AtomicSpecies& s, double j_excited,
                                      double delta) {
  JumpOperators jo = jump_operators(s, j_excited, delta);
  const double gamma = s.line(j_excited).gamma;
  Eigen::MatrixXcd rate = cd(0.0, 2.0) * jo.h_loss;  // recover R = 2i·h_loss

  GroundSuperop sop = GroundSuperop::Zero(kDim * kDim, kDim * kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) {
        // -(Rρ + ρR)/2 acting on element (i,j)
        sop(vidx(i, j), vidx(k, j)) -= 0.5 * rate(i, k);
        sop(vidx(i, j), vidx(i, k)) -= 0.5 * rate(k, j);
      }
  for (const Eigen::MatrixXcd& w : jo.w)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j)
        for (int k = 0; k < kDim; ++k)
          for (int l = 0; l < kDim; ++l)
            sop(vidx(i, j), vidx(k, l)) += gamma * w(i, k) * std::conj(w(j, l));
  return sop / jo.gamma_char;
}

GroundSuperop larmor_average(const GroundSuperop& map) {
  GroundSuperop out = map;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d)
          if ((a - b) != (c - d)) out(vidx(a, b), vidx(c, d)) = 0.0;
  return out;
}

const QutritBasis& QutritBasis::standard() {
  static const QutritBasis basis = [] {
    QutritBasis b;
    // generator of rotations about y: f_y = i K with K real antisymmetric,
    // so exp(-i(π/2) f_y) = exp((π/2) K)
    Eigen::MatrixXcd fy = spin_fy(4.0);
    Eigen::MatrixXd k = (cd(0.0, -1.0) * fy).real();
    b.rotation = real_matrix_exp((pi / 2.0) * k);

    Eigen::MatrixXd fz = spin_fz(4.0);
    if (std::sqrt(2.0) * b.rotation.col(8).dot(fz * b.rotation.col(7)) < 0.0)
      b.rotation.col(7) *= -1.0;

    for (int i = 0; i < 3; ++i) b.level[i] = b.rotation.col(8 - i);
    const int pair_a[3] = {0, 1, 0};  // ud, dT, uT
    const int pair_b[3] = {1, 2, 2};
    for (int i = 0; i < 3; ++i) {
      b.n_op[i] = b.level[i] * b.level[i].transpose();
      const Eigen::VectorXd& u = b.level[pair_a[i]];
      const Eigen::VectorXd& v = b.level[pair_b[i]];
      b.x_op[i] =
          (u * v.transpose() + v * u.transpose()) / std::sqrt(2.0);
      b.y_op[i] = cd(0.0, 1.0) / std::sqrt(2.0) *
                  (v * u.transpose() - u * v.transpose()).cast<cd>();
    }
    return b;
  }();
  return basis;
}

PumpingTables qutrit_projected_tables(const GroundSuperop& averaged,
                                      const QutritBasis& basis) {
  std::vector<Eigen::MatrixXcd> ops;
  for (int i = 0; i < 3; ++i) ops.push_back(basis.n_op[i].cast<cd>());
  for (int i = 0; i < 3; ++i) ops.push_back(basis.x_op[i].cast<cd>());
  for (int i = 0; i < 3; ++i) ops.push_back(basis.y_op[i]);

  PumpingTables t;
  GroundSuperop heis = averaged.adjoint();
  std::vector<Eigen::MatrixXcd> heis_img(9), schr_img(9);
  for (int c = 0; c < 9; ++c) {
    heis_img[c] = unvec(heis * vec(ops[c]));
    schr_img[c] = unvec(averaged * vec(ops[c]));
  }
  int worst_c = 0, worst_cp = 0;
  for (int c = 0; c < 9; ++c)
    for (int cp = 0; cp < 9; ++cp) {
      cd zh = (heis_img[c] * ops[cp]).trace();
      cd zs = (schr_img[c] * ops[cp]).trace();
      t.heisenberg(c, cp) = zh.real();
      t.schrodinger(c, cp) = zs.real();
      double im = std::max(std::abs(zh.imag()), std::abs(zs.imag()));
      if (im > t.max_imag) {
        t.max_imag = im;
        worst_c = c;
        worst_cp = cp;
      }
    }

  // two-body injection on the x sector
  for (int a = 0; a < 3; ++a)
    for (int bq = 0; bq < 3; ++bq) {
      const Eigen::MatrixXcd& A = ops[3 + a];
      const Eigen::MatrixXcd& B = ops[3 + bq];
      Eigen::MatrixXcd anti = 0.5 * (A * B + B * A);
      Eigen::MatrixXcd img = unvec(heis * vec(anti));
      const Eigen::MatrixXcd& da = heis_img[3 + a];
      const Eigen::MatrixXcd& db = heis_img[3 + bq];
      Eigen::MatrixXcd nop =
          img - 0.5 * (da * B + B * da) - 0.5 * (A * db + db * A);
      for (int l = 0; l < 3; ++l) {
        cd z = basis.level[l].cast<cd>().dot(nop * basis.level[l].cast<cd>());
        t.noise[a][bq][l] = z.real();
        t.max_imag = std::max(t.max_imag, std::abs(z.imag()));
      }
    }

  for (int i = 0; i < 3; ++i)
    t.loss(i) = -t.schrodinger.row(i).head<3>().sum();

  if (t.max_imag > 1e-10) {
    std::ostringstream msg;
    msg << "qutrit tables kept an imaginary residual " << t.max_imag
        << " at operator pair (" << worst_c << ", " << worst_cp
        << "); the map is not rotation-averaged or the basis is inconsistent";
    throw numerical_error(msg.str());
  }
  return t;
}

PumpingTables pumping_tables(const AtomicSpecies& s, double j_excited,
                             double delta) {
  return qutrit_projected_tables(
      larmor_average(single_atom_pumping_map(s, j_excited, delta)),
      QutritBasis::standard());
}

}  // namespace faraday
