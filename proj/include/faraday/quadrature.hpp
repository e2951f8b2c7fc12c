#pragma once

#include <vector>

namespace faraday {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes/weights for ∫_0^∞ f(x) e^{-x} dx ≈ Σ w_i f(x_i)  (weight folded in).
QuadRule gauss_laguerre(int n);

// Nodes/weights for ∫_{-1}^{1} f(x) dx ≈ Σ w_i f(x_i).
QuadRule gauss_legendre(int n);

// Affine map of a Legendre rule onto [a, b].
QuadRule gauss_legendre(int n, double a, double b);

}  // namespace faraday
