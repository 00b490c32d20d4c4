#pragma once

#include <complex>

#include <Eigen/Dense>

namespace holofisher {

/// phi(x) = sum_n x^n / (n! (n+1)!), the entire solution of
/// x phi'' + 2 phi' - phi = 0 with phi(0) = 1.
/// terms = 0 picks the truncation automatically (tail below 1e-18 relative);
/// an explicit truncation must be >= 10.
double phi(double x, int terms = 0);
std::complex<double> phi(std::complex<double> x, int terms = 0);

/// Term-wise derivatives of the series, for annihilation checks.
std::complex<double> phi_deriv(std::complex<double> x, int order, int terms = 0);

/// Normalizing constant of the Fisher model on SU(2) in its standard
/// representation: c(theta) = phi(det theta).
std::complex<double> su2_normalizer(const Eigen::Matrix2cd& theta);

}  // namespace holofisher
