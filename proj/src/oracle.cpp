#include "holofisher/oracle.hpp"

#include <cmath>
#include <vector>

#include "holofisher/kernels.hpp"
#include "holofisher/pfaffian.hpp"

namespace holofisher {
namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
// Symmetrized: the negative half mirrors the positive half bit-exactly.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));  // largest roots first
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P_n'(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean-up step for the weight with the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[n - 1 - k] = x;
    nodes[k] = -x;
    weights[k] = weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

struct Tables {
  std::vector<double> ca, sa;  // alpha
  std::vector<double> cg, sg;  // gamma
  std::vector<double> u, wu;   // Gauss-Legendre in cos(beta)
};

Tables build_tables(const QuadratureGrid& grid) {
  Tables t;
  t.ca.resize(grid.n_alpha);
  t.sa.resize(grid.n_alpha);
  for (int i = 0; i < grid.n_alpha; ++i) {
    const double a = 2.0 * M_PI * i / grid.n_alpha;
    t.ca[i] = std::cos(a);
    t.sa[i] = std::sin(a);
  }
  t.cg.resize(grid.n_gamma);
  t.sg.resize(grid.n_gamma);
  for (int i = 0; i < grid.n_gamma; ++i) {
    const double g = 2.0 * M_PI * i / grid.n_gamma;
    t.cg[i] = std::cos(g);
    t.sg[i] = std::sin(g);
  }
  gauss_legendre(grid.n_u, t.u, t.wu);
  return t;
}

// With Y = Rz(alpha) Rx(beta) Rz(gamma):
//   y11 = ca*cg - sa*cb*sg,  y22 = ca*cb*cg - sa*sg,  y33 = cb.
// Only cb = u enters, so the u-integrand is polynomial and Gauss-Legendre
// converges spectrally.
kernels::Row make_row(const Vec3& x, double ca, double sa, double cb, double shift) {
  kernels::Row row;
  row.y11c = ca;
  row.y11s = -sa * cb;
  row.y22c = ca * cb;
  row.y22s = -sa;
  row.y33 = cb;
  row.ecos = x(0) * row.y11c + x(1) * row.y22c;
  row.esin = x(0) * row.y11s + x(1) * row.y22s;
  row.e0 = x(2) * cb - shift;
  return row;
}

struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void check_overflow(const Vec3& x) {
  if (!x.allFinite()) throw Error("oracle: non-finite point");
  if (x.cwiseAbs().sum() > 700.0)
    throw Error("oracle: exponent overflow, use log-scale oracle");
}

}  // namespace

QuadratureGrid QuadratureGrid::for_point(const Vec3& x) {
  if (!x.allFinite()) throw Error("quadrature grid: non-finite point");
  const double m = x.cwiseAbs().maxCoeff();
  if (m > 1e5)
    throw Error("quadrature grid: node counts scale with |x|, infeasible here; "
                "use the gauge pipeline");
  const int k = static_cast<int>(std::ceil(m));
  QuadratureGrid g;
  g.n_alpha = g.n_gamma = std::max(24, 8 + 4 * k);
  g.n_u = std::max(16, 8 + 2 * k);
  return g;
}

void QuadratureGrid::validate() const {
  if (n_alpha < 4 || n_u < 4 || n_gamma < 4)
    throw Error("quadrature grid: all node counts must be >= 4");
}

double max_exponent(const Vec3& x) {
  // Quaternion coordinates diagonalize x1 y11 + x2 y22 + x3 y33; the maximum
  // over SO(3) is the largest of the four even-sign combinations.
  const double a = x(0) + x(1) + x(2);
  const double b = x(0) - x(1) - x(2);
  const double c = -x(0) + x(1) - x(2);
  const double d = -x(0) - x(1) + x(2);
  return std::max(std::max(a, b), std::max(c, d));
}

double ctilde_deriv(const Vec3& x, const DerivOrder& order, const QuadratureGrid& grid) {
  grid.validate();
  if (order.a1 < 0 || order.a2 < 0 || order.a3 < 0 || order.total() > 4)
    throw Error("ctilde_deriv: derivative order out of range");
  check_overflow(x);
  const Tables t = build_tables(grid);
  const kernels::Backend& be = kernels::active_backend();
  const double scale = 1.0 / (2.0 * grid.n_alpha * grid.n_gamma);
  Kahan acc;
  for (int ia = 0; ia < grid.n_alpha; ++ia)
    for (int iu = 0; iu < grid.n_u; ++iu) {
      const kernels::Row row = make_row(x, t.ca[ia], t.sa[ia], t.u[iu], 0.0);
      acc.add(t.wu[iu] * be.moment(row, t.cg.data(), t.sg.data(), t.cg.size(),
                                   order.a1, order.a2, order.a3));
    }
  return acc.sum * scale;
}

double ctilde_deriv(const Vec3& x, const DerivOrder& order) {
  return ctilde_deriv(x, order, QuadratureGrid::for_point(x));
}

CVector C_quad_shifted(const Vec3& x, const QuadratureGrid& grid, double shift) {
  grid.validate();
  if (!x.allFinite()) throw Error("oracle: non-finite point");
  if (x.cwiseAbs().sum() - shift > 700.0)
    throw Error("oracle: exponent overflow, use log-scale oracle");
  const Tables t = build_tables(grid);
  const kernels::Backend& be = kernels::active_backend();
  const double scale = 1.0 / (2.0 * grid.n_alpha * grid.n_gamma);
  Kahan acc[4];
  for (int ia = 0; ia < grid.n_alpha; ++ia)
    for (int iu = 0; iu < grid.n_u; ++iu) {
      const kernels::Row row = make_row(x, t.ca[ia], t.sa[ia], t.u[iu], shift);
      double part[4] = {0.0, 0.0, 0.0, 0.0};
      be.accum_cvec(row, t.cg.data(), t.sg.data(), t.cg.size(), part);
      for (int k = 0; k < 4; ++k) acc[k].add(t.wu[iu] * part[k]);
    }
  return CVector(acc[0].sum * scale, acc[1].sum * scale, acc[2].sum * scale,
                 acc[3].sum * scale);
}

CVector C_quad(const Vec3& x, const QuadratureGrid& grid) {
  check_overflow(x);
  return C_quad_shifted(x, grid, 0.0);
}

CVector C_quad(const Vec3& x) { return C_quad(x, QuadratureGrid::for_point(x)); }

double log_ctilde(const Vec3& x, const QuadratureGrid& grid) {
  // Shift by the exact maximum exponent: integrand <= 1 pointwise and never
  // underflows to an all-zero sum. (Shifting by sum|x_i| as an upper bound
  // would lose the entire integrand past |x_i| ~ 350.)
  if (!x.allFinite()) throw Error("oracle: non-finite point");
  const double shift = max_exponent(x);
  const CVector c = C_quad_shifted(x, grid, shift);
  return shift + std::log(c(0));
}

double log_ctilde(const Vec3& x) { return log_ctilde(x, QuadratureGrid::for_point(x)); }

std::array<double, 6> annihilator_residual(const Vec3& x, const QuadratureGrid& grid) {
  // The rational coefficients of H_i have poles on the singular locus.
  if (!(sing_distance(x) > 0.05))
    throw Error("annihilator_residual: too close to the singular locus");

  const double c = ctilde_deriv(x, {0, 0, 0}, grid);
  const double c1 = ctilde_deriv(x, {1, 0, 0}, grid);
  const double c2 = ctilde_deriv(x, {0, 1, 0}, grid);
  const double c3 = ctilde_deriv(x, {0, 0, 1}, grid);
  const double c11 = ctilde_deriv(x, {2, 0, 0}, grid);
  const double c22 = ctilde_deriv(x, {0, 2, 0}, grid);
  const double c33 = ctilde_deriv(x, {0, 0, 2}, grid);
  const double c12 = ctilde_deriv(x, {1, 1, 0}, grid);
  const double c13 = ctilde_deriv(x, {1, 0, 1}, grid);
  const double c23 = ctilde_deriv(x, {0, 1, 1}, grid);

  const double x1 = x(0), x2 = x(1), x3 = x(2);
  const double d12 = x1 * x1 - x2 * x2;
  const double d13 = x1 * x1 - x3 * x3;
  const double d23 = x2 * x2 - x3 * x3;

  std::array<double, 6> r;
  // H_i = d_i^2 - 1 + sum_{j != i} (x_i d_i - x_j d_j)/(x_i^2 - x_j^2)
  r[0] = c11 - c + (x1 * c1 - x2 * c2) / d12 + (x1 * c1 - x3 * c3) / d13;
  r[1] = c22 - c + (x2 * c2 - x1 * c1) / -d12 + (x2 * c2 - x3 * c3) / d23;
  r[2] = c33 - c + (x3 * c3 - x1 * c1) / -d13 + (x3 * c3 - x2 * c2) / -d23;
  // L_ij = (x_i^2 - x_j^2) d_i d_j - (x_j d_i - x_i d_j) - (x_i^2 - x_j^2) d_k
  r[3] = d12 * c12 - (x2 * c1 - x1 * c2) - d12 * c3;
  r[4] = d13 * c13 - (x3 * c1 - x1 * c3) - d13 * c2;
  r[5] = d23 * c23 - (x3 * c2 - x2 * c3) - d23 * c1;
  return r;
}

std::array<double, 6> annihilator_residual(const Vec3& x) {
  return annihilator_residual(x, QuadratureGrid::for_point(x));
}

}  // namespace holofisher
