#include "faraday/dynamics.hpp"

#include "faraday/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace faraday {

namespace {

void check_state(const MomentState& s, const EngineContext& ctx,
                 const char* where) {
  if (s.n_p != ctx.n_p || s.n_k != ctx.n_k || s.x.size() != ctx.dim() ||
      s.cov.rows() != ctx.dim()) {
    std::ostringstream os;
    os << where << ": state (" << s.n_p << "," << s.n_k
       << ") does not match engine context (" << ctx.n_p << "," << ctx.n_k
       << ")";
    throw config_error(os.str());
  }
}

// Kronecker product A (x) K with A small and dense, row blocks a-major.
Eigen::MatrixXd kron_with(const Eigen::MatrixXd& a, const Eigen::MatrixXd& k) {
  const int na = static_cast<int>(a.rows());
  const int nk = static_cast<int>(k.rows());
  Eigen::MatrixXd out(na * nk, na * nk);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) out.block(i * nk, j * nk, nk, nk) = a(i, j) * k;
  return out;
}

}  // namespace

double SpinCoefficients::fz_ud() const { return std::sqrt(2.0) * v_up; }
double SpinCoefficients::fz_dt() const { return w_up; }

SpinCoefficients spin_coefficients(double f) {
  if (!(f >= 0.5)) throw config_error("spin_coefficients: need f >= 1/2");
  const double twof = 2.0 * f;
  if (std::abs(twof - std::llround(twof)) > 1e-9)
    throw config_error("spin_coefficients: 2f must be an integer");
  const int dim = static_cast<int>(std::llround(twof)) + 1;

  Eigen::VectorXd fz(dim);
  for (int i = 0; i < dim; ++i) fz(i) = f - i;
  Eigen::MatrixXd fx = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    const double m = f - (i + 1);  // coupling m <-> m + 1
    const double amp = 0.5 * std::sqrt(f * (f + 1.0) - m * (m + 1.0));
    fx(i, i + 1) = amp;
    fx(i + 1, i) = amp;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fx);
  auto fz_variance = [&](int col) {
    Eigen::VectorXd v = es.eigenvectors().col(col);
    const double m1 = v.cwiseProduct(fz).dot(v);
    const double m2 = v.cwiseProduct(fz.cwiseProduct(fz)).dot(v);
    return m2 - m1 * m1;
  };
  // eigenvalues ascend: top column is m_x = f, the one before m_x = f - 1
  SpinCoefficients c;
  c.f = f;
  const double var_top = fz_variance(dim - 1);
  const double var_next = fz_variance(dim - 2);
  c.v_up = std::sqrt(var_top);
  c.w_up = std::sqrt(std::max(0.0, 2.0 * var_next - 2.0 * var_top));
  return c;
}

EngineContext make_engine_context(const EngineTables& tables,
                                  const std::vector<ColorDrive>& colors,
                                  double kappa_meas,
                                  const SpinCoefficients& coeffs) {
  if (tables.n_p <= 0 || tables.n_k <= 0)
    throw config_error("engine context: empty overlap tables");
  if (!(kappa_meas >= 0.0))
    throw config_error("engine context: kappa must be non-negative");

  EngineContext ctx;
  ctx.n_p = tables.n_p;
  ctx.n_k = tables.n_k;
  ctx.area = tables.basis.area();
  ctx.kappa = kappa_meas;
  ctx.coeffs = coeffs;
  ctx.n1 = ctx.area * tables.n1;
  ctx.n2 = ctx.area * ctx.area * tables.n2;

  // Rate-summed per-atom generators. Tracked even ops (n_u, n_d, n_T, x_uT)
  // sit at heisenberg indices {0, 1, 2, 5}; the odd quadratures (x_ud,
  // x_dT) are the top 2x2 of the x block. Parity keeps the two sectors
  // decoupled, and the y sector never reaches the measured moments.
  Eigen::MatrixXd a_odd = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd a_even = Eigen::MatrixXd::Zero(4, 4);
  static constexpr int kEvenOps[4] = {0, 1, 2, 5};
  for (auto& m : ctx.noise_odd) m.setZero();
  for (const auto& c : colors) {
    if (!(c.rate >= 0.0))
      throw config_error("engine context: negative scattering rate");
    ctx.gamma_total += c.rate;
    a_odd += c.rate * c.tables.heisenberg.block<2, 2>(3, 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        a_even(i, j) += c.rate * c.tables.heisenberg(kEvenOps[i], kEvenOps[j]);
    for (int l = 0; l < 3; ++l)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          ctx.noise_odd[l](a, b) += c.rate * c.tables.noise[a][b][l];
  }

  const double a2 = ctx.area * ctx.area;
  ctx.drift_odd.resize(ctx.n_k);
  ctx.drift_even.resize(ctx.n_k);
  ctx.inj.resize(static_cast<size_t>(ctx.n_k) * ctx.n_p);
  Eigen::MatrixXd km(ctx.n_p, ctx.n_p);
  for (int k = 0; k < ctx.n_k; ++k) {
    for (int p = 0; p < ctx.n_p; ++p)
      for (int pq = 0; pq < ctx.n_p; ++pq) km(p, pq) = a2 * tables.kt(p, pq, k);
    ctx.drift_odd[k] = kron_with(a_odd, km);
    ctx.drift_even[k] = kron_with(a_even, km);
    for (int ppp = 0; ppp < ctx.n_p; ++ppp) {
      Eigen::MatrixXd g(ctx.n_p, ctx.n_p);
      for (int p = 0; p < ctx.n_p; ++p)
        for (int pq = 0; pq < ctx.n_p; ++pq)
          g(p, pq) = a2 * tables.gt(p, pq, ppp, k);
      ctx.inj[static_cast<size_t>(k) * ctx.n_p + ppp] = std::move(g);
    }
  }

  ctx.u = Eigen::VectorXd::Zero(ctx.dim());
  for (int k = 0; k < ctx.n_k; ++k) {
    ctx.u((k * 2 + 0) * ctx.n_p) = ctx.area * coeffs.fz_ud();
    ctx.u((k * 2 + 1) * ctx.n_p) = ctx.area * coeffs.fz_dt();
  }
  return ctx;
}

SpinwaveMoments spinwave_moments(const MomentState& s, const EngineContext& ctx) {
  check_state(s, ctx, "spinwave_moments");
  SpinwaveMoments m;
  for (int i = 0; i < 3; ++i) m.pop(i) = ctx.area * s.pops[i].row(0).sum();
  const double f = ctx.coeffs.f;
  m.fx = f * m.pop(0) + (f - 1.0) * m.pop(1) + (f - 2.0) * m.pop(2);
  m.fz = ctx.u.dot(s.x);
  m.var_fz = ctx.u.dot(s.cov * ctx.u);
  return m;
}

void deterministic_drift(MomentState& s, const EngineContext& ctx, double dt) {
  check_state(s, ctx, "deterministic_drift");
  if (!(dt > 0.0)) throw config_error("deterministic_drift: dt must be > 0");
  const int np = ctx.n_p;
  const int nk = ctx.n_k;
  const int dim = ctx.dim();

  const double tot0 =
      (s.pops[0].row(0) + s.pops[1].row(0) + s.pops[2].row(0)).sum();

  if (ctx.gamma_total > 0.0) {
    // Even-sector means: population transfer plus the up-T coherence that
    // populations feed (and that feeds back on them).
    Eigen::VectorXd m(4 * np);
    for (int k = 0; k < nk; ++k) {
      for (int i = 0; i < 3; ++i) m.segment(i * np, np) = s.pops[i].col(k);
      m.segment(3 * np, np) = s.x_ut.segment(k * np, np);
      Eigen::VectorXd dm = ctx.drift_even[k] * m;
      for (int i = 0; i < 3; ++i) s.pops[i].col(k) += dt * dm.segment(i * np, np);
      s.x_ut.segment(k * np, np) += dt * dm.segment(3 * np, np);
    }

    // Covariance pumping decay on both legs: C += dt (D C + C D^T) with D
    // block diagonal over slices.
    Eigen::MatrixXd legs(dim, dim);
    for (int k = 0; k < nk; ++k)
      legs.middleRows(2 * np * k, 2 * np).noalias() =
          ctx.drift_odd[k] * s.cov.middleRows(2 * np * k, 2 * np);
    s.cov += dt * (legs + legs.transpose());

    // Slice-local injection sourced by the freshly drifted populations.
    Eigen::MatrixXd r(np, np);
    for (int k = 0; k < nk; ++k) {
      for (int l = 0; l < 3; ++l) {
        r.setZero();
        for (int ppp = 0; ppp < np; ++ppp)
          r += s.pops[l](ppp, k) * ctx.inj[static_cast<size_t>(k) * np + ppp];
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            s.cov.block((2 * k + a) * np, (2 * k + b) * np, np, np) +=
                (dt * ctx.noise_odd[l](a, b)) * r;
      }
    }
  }

  // Measurement backaction, exact over the step for the rank-1 flow.
  Eigen::VectorXd cu = s.cov * ctx.u;
  const double v = ctx.u.dot(cu);
  if (ctx.kappa > 0.0 && v > 0.0) {
    const double c = ctx.kappa * dt / (1.0 + ctx.kappa * dt * v);
    s.cov.noalias() -= c * (cu * cu.transpose());
  }
  s.step_cu = std::move(cu);
  s.step_var = v;
  s.time += dt;

  // Instability triggers. Fundamental-mode populations are positively
  // weighted sums, so a macroscopic negative value can only come from a
  // step-size blowup; same for the covariance diagonal and total growth.
  const double tot1 =
      (s.pops[0].row(0) + s.pops[1].row(0) + s.pops[2].row(0)).sum();
  double pop_min = 0.0;
  for (int i = 0; i < 3; ++i)
    pop_min = std::min(pop_min, s.pops[i].row(0).minCoeff());
  const double diag_min = s.cov.diagonal().minCoeff();
  const double diag_scale = std::max(1e-300, s.cov.diagonal().maxCoeff());
  std::ostringstream bad;
  if (!s.cov.allFinite() || !std::isfinite(tot1) || !std::isfinite(v))
    bad << "non-finite moments";
  else if (v < -1e-9 * diag_scale)
    bad << "Var(F_z) = " << v << " < 0";
  else if (diag_min < -1e-9 * diag_scale)
    bad << "covariance diagonal " << diag_min << " < 0";
  else if (tot1 > tot0 * (1.0 + 1e-9) + 1e-12)
    bad << "population grew " << tot0 << " -> " << tot1;
  else if (pop_min < -1e-9 * std::max(1e-300, tot0))
    bad << "fundamental-mode population " << pop_min << " < 0";
  if (bad.tellp() > 0) {
    std::ostringstream os;
    os << "deterministic_drift unstable at t = " << s.time << " s, dt = " << dt
       << " s: " << bad.str();
    throw numerical_error(os.str());
  }
}

void conditional_mean_step(MomentState& s, const EngineContext& ctx, double dW,
                           double dt) {
  check_state(s, ctx, "conditional_mean_step");
  if (!(dt > 0.0)) throw config_error("conditional_mean_step: dt must be > 0");
  if (s.step_var < 0.0 || s.step_cu.size() != ctx.dim())
    throw config_error(
        "conditional_mean_step must pair with a deterministic_drift of the "
        "same interval");

  const int np = ctx.n_p;
  if (ctx.gamma_total > 0.0) {
    for (int k = 0; k < ctx.n_k; ++k) {
      Eigen::VectorXd xb = s.x.segment(2 * np * k, 2 * np);
      s.x.segment(2 * np * k, 2 * np) += dt * (ctx.drift_odd[k] * xb);
    }
  }
  if (ctx.kappa > 0.0 && dW != 0.0) {
    const double g =
        std::sqrt(ctx.kappa) / (1.0 + ctx.kappa * dt * s.step_var);
    s.x += (g * dW) * s.step_cu;
  }
  s.step_var = -1.0;
}

double metrological_squeezing(const SpinwaveMoments& m, double f, double n1,
                              double n2) {
  if (!(m.fx > 0.0)) {
    std::ostringstream os;
    os << "metrological squeezing undefined: <F_x> = " << m.fx;
    throw numerical_error(os.str());
  }
  return 2.0 * f * (n1 * n1 / n2) * m.var_fz / (m.fx * m.fx);
}

double metrological_squeezing(const MomentState& s, const EngineContext& ctx) {
  return metrological_squeezing(spinwave_moments(s, ctx), ctx.coeffs.f, ctx.n1,
                                ctx.n2);
}

double suggest_dt(const EngineContext& ctx, const MomentState& s) {
  const double meas = ctx.kappa * spinwave_moments(s, ctx).var_fz;
  const double rate = std::max(meas, ctx.gamma_total);
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / (200.0 * rate);
}

std::vector<EvolvePoint> evolve_moments(MomentState& s, const EngineContext& ctx,
                                        double t_final, double dt, int stride) {
  check_state(s, ctx, "evolve_moments");
  if (!(t_final > 0.0) || !(dt > 0.0) || stride < 1)
    throw config_error("evolve_moments: need t_final > 0, dt > 0, stride >= 1");

  const MomentState saved = s;
  const double pop0 = spinwave_moments(s, ctx).pop.sum();
  for (int attempt = 0;; ++attempt) {
    try {
      s = saved;
      std::vector<EvolvePoint> path;
      const int n = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
      const double h = t_final / n;
      auto record = [&]() {
        const SpinwaveMoments m = spinwave_moments(s, ctx);
        EvolvePoint pt;
        pt.t = s.time;
        pt.fx = m.fx;
        pt.fz = m.fz;
        pt.var_fz = m.var_fz;
        pt.xi_m_sq = m.fx > 0.0
                         ? metrological_squeezing(m, ctx.coeffs.f, ctx.n1, ctx.n2)
                         : std::numeric_limits<double>::quiet_NaN();
        pt.pop = m.pop;
        pt.loss = pop0 > 0.0 ? 1.0 - m.pop.sum() / pop0 : 0.0;
        path.push_back(pt);
        return pt;
      };
      record();
      for (int i = 0; i < n; ++i) {
        deterministic_drift(s, ctx, h);
        conditional_mean_step(s, ctx, 0.0, h);
        if ((i + 1) % stride == 0 || i + 1 == n) record();
      }
      return path;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numerical || attempt >= 4) throw;
      dt *= 0.5;
    }
  }
}

CovariancePath covariance_path(MomentState s, const EngineContext& ctx,
                               double t_final, double dt) {
  check_state(s, ctx, "covariance_path");
  if (!(t_final > 0.0) || !(dt > 0.0))
    throw config_error("covariance_path: need t_final > 0, dt > 0");
  const int n = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final / n;

  CovariancePath cp;
  cp.dt = h;
  cp.t.resize(n + 1);
  cp.fx.resize(n + 1);
  cp.var_fz.resize(n + 1);
  cp.ks.resize(ctx.dim(), n);
  cp.v_post.resize(n);
  for (int i = 0; i < n; ++i) {
    const SpinwaveMoments m = spinwave_moments(s, ctx);
    cp.t[i] = s.time;
    cp.fx[i] = m.fx;
    cp.var_fz[i] = m.var_fz;
    deterministic_drift(s, ctx, h);
    cp.ks.col(i) = s.step_cu;
    cp.v_post(i) = s.step_var;
    conditional_mean_step(s, ctx, 0.0, h);
  }
  const SpinwaveMoments m = spinwave_moments(s, ctx);
  cp.t[n] = s.time;
  cp.fx[n] = m.fx;
  cp.var_fz[n] = m.var_fz;
  return cp;
}

}  // namespace faraday
