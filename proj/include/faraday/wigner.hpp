#pragma once

namespace faraday {

// Angular-momentum coupling coefficients via Racah's closed forms.
// Factorial arguments stay below 30! here, which is exactly representable in
// double, so no log-gamma tricks are needed.
double wigner3j(double j1, double j2, double j3, double m1, double m2,
                double m3);
double wigner6j(double j1, double j2, double j3, double j4, double j5,
                double j6);
double clebsch_gordan(double j1, double m1, double j2, double m2, double j3,
                      double m3);

}  // namespace faraday
