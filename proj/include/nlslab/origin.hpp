#pragma once

namespace nlslab {

// Origin correction for the reduced operator -d^2/dr^2 + a_eff/r^2 on the half-integer grid.
// The first node gets an extra potential kappa/h^2, with kappa chosen so that the lowest
// discrete Dirichlet eigenvalue on [0,1] equals the Bessel value j_{nu,1}^2,
// nu = sqrt(a_eff + 1/4). kappa depends only on a_eff (scale invariance), and kappa(0) = 0.
inline constexpr int kOriginCalibrationNodes = 512;

double origin_kappa(double a_eff);                    // cached
double origin_kappa_uncached(double a_eff, int n_cal);
double lowest_dirichlet_eigenvalue(double a_eff, int n, double kappa);
double bessel_target(double a_eff);                   // j_{nu,1}^2

} // namespace nlslab
