#include "holofisher/su2.hpp"

#include <cmath>

#include "holofisher/types.hpp"

namespace holofisher {
namespace {

constexpr int kAutoCap = 400;

// phi and its term-wise derivatives share one driver: the k-th term of
// phi^(m) is x^k * (k+m)! / (k! (k+m)! (k+m+1)!) ... handled by running the
// base recurrence term_{n+1} = term_n * x / ((n+1)(n+2)) on the shifted
// coefficients.
template <class T>
T phi_series(T x, int order, int terms) {
  // term_n of phi = x^n / (n! (n+1)!); differentiating `order` times leaves
  // sum_n x^n * (n+order)! / (n! * n! ... ) -- regenerate directly.
  // coeff_n = 1 / (n! (n+1)!) for the base series; the m-th derivative has
  // coeff'_n = coeff_{n+m} * (n+m)!/n!.
  const bool auto_trunc = terms <= 0;
  if (!auto_trunc && terms < 10) throw Error("phi: truncation must be >= 10");
  const int cap = auto_trunc ? kAutoCap : terms;
  // c_{n} = 1/((n+m)! (n+m+1)!) * (n+m)!/n! = 1/(n! (n+m+1)!)
  double log_c0 = 0.0;
  for (int j = 1; j <= order + 1; ++j) log_c0 -= std::log(static_cast<double>(j));
  T term = static_cast<T>(std::exp(log_c0));  // n = 0 term: 1/(m+1)!
  T sum = term;
  for (int n = 1; n < cap; ++n) {
    term *= x / static_cast<double>(n * (n + order + 1));
    sum += term;
    if (auto_trunc && std::abs(term) <= 1e-18 * std::abs(sum) && n >= 8) break;
  }
  return sum;
}

}  // namespace

double phi(double x, int terms) { return phi_series<double>(x, 0, terms); }

std::complex<double> phi(std::complex<double> x, int terms) {
  return phi_series<std::complex<double>>(x, 0, terms);
}

std::complex<double> phi_deriv(std::complex<double> x, int order, int terms) {
  if (order < 0) throw Error("phi_deriv: order must be >= 0");
  return phi_series<std::complex<double>>(x, order, terms);
}

std::complex<double> su2_normalizer(const Eigen::Matrix2cd& theta) {
  return phi(theta.determinant());
}

}  // namespace holofisher
