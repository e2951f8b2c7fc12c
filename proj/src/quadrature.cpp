#include "faraday/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace faraday {

namespace {

// L_n(x) and L_{n+1}(x) by upward recurrence.
void laguerre_pair(int n, double x, double* ln, double* lnp1) {
  double p0 = 1.0, p1 = 1.0 - x;
  for (int k = 1; k <= n; ++k) {
    double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  *ln = p0;
  *lnp1 = p1;
}

}  // namespace

// Golub-Welsch: Laguerre recurrence coefficients give a symmetric tridiagonal
// Jacobi matrix; eigenvalues are nodes. Weights via the classical formula
// x / ((n+1) L_{n+1}(x))^2 rather than squared eigenvector components, which
// lose all relative accuracy for the exponentially small tail weights.
QuadRule gauss_laguerre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) {
      J(i, i + 1) = i + 1.0;
      J(i + 1, i) = i + 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double ln, lnp1;
    for (int it = 0; it < 3; ++it) {  // Newton polish on L_n(x) = 0
      laguerre_pair(n, x, &ln, &lnp1);
      // L_n'(x) = n (L_n(x) - L_{n-1}(x)) / x with L_{n-1} recovered from
      // the recurrence: (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}.
      double lnm1 = ((2.0 * n + 1.0 - x) * ln - (n + 1.0) * lnp1) / n;
      double deriv = n * (ln - lnm1) / x;
      double dx = ln / deriv;
      x -= dx;
      if (std::fabs(dx) < 1e-16 * x) break;
    }
    laguerre_pair(n, x, &ln, &lnp1);
    double d = (n + 1.0) * lnp1;
    q.x[i] = x;
    q.w[i] = x / (d * d);  // total weight ∫ e^{-x} dx = 1
  }
  return q;
}

QuadRule gauss_legendre(int n) {
  QuadRule q;
  q.x.resize(n);
  q.w.resize(n);
  // Newton iteration from Chebyshev initial guesses.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    q.x[i] = -x;
    q.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    q.w[i] = w;
    q.w[n - 1 - i] = w;
  }
  return q;
}

QuadRule gauss_legendre(int n, double a, double b) {
  QuadRule q = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.x[i] = mid + half * q.x[i];
    q.w[i] *= half;
  }
  return q;
}

}  // namespace faraday
