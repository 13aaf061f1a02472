#pragma once
// Uniform-grid quadrature, finite differences, interpolation and small fits.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "shearlab/common.hpp"

namespace shearlab {

using cplx = std::complex<double>;

// Uniform grid x_j = a + j h, j = 0..n-1, h = (b-a)/(n-1).
struct Grid {
  double a = 0.0, b = 1.0;
  int n = 0;
  double h = 0.0;
  Grid() = default;
  Grid(double a_, double b_, int n_) : a(a_), b(b_), n(n_), h((b_ - a_) / (n_ - 1)) {
    require(n_ >= 2, ErrorCode::BadConfig, "grid needs at least 2 nodes");
  }
  double x(int j) const { return a + h * j; }
  std::vector<double> nodes() const {
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = x(j);
    return v;
  }
};

// Fornberg weights: m-th derivative at x0 from arbitrary nodes.
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m);

// Composite Simpson weights for \int_{x_{i0}}^{x_{i1}} on a uniform grid
// (3/8 patch when the interval count is odd). Returned vector has i1-i0+1 entries.
std::vector<double> simpson_weights(int i0, int i1, double h);

// Trapezoid weights over the full grid.
std::vector<double> trapezoid_weights(int n, double h);

// Cumulative integration from an anchor node with Euler-Maclaurin end
// corrections (order 8 for smooth integrands). F[m] = \int_{x_a}^{x_m} f.
class CumulativeIntegrator {
 public:
  CumulativeIntegrator(int n, double h);
  std::vector<double> integrate(const std::vector<double>& f, int anchor) const;

 private:
  int n_;
  double h_;
  // node -> (start index, 7 weights) for f', f''', f^(5)
  std::vector<int> start_;
  std::vector<std::array<double, 7>> w1_, w3_, w5_;
  std::vector<double> deriv(const std::vector<double>& f,
                            const std::vector<std::array<double, 7>>& w) const;
};

// Local polynomial interpolation (degree deg, deg+1 nearest nodes).
double lagrange_eval(const Grid& g, const std::vector<double>& f, double x, int deg = 5);
cplx lagrange_eval(const Grid& g, const std::vector<cplx>& f, double x, int deg = 5);

// Monotone cubic (Fritsch-Carlson) interpolant for strictly monotone data.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double eval(double x) const;
  double deriv(double x) const;
  // inverse query by bisection + Newton; requires monotone data
  double inverse(double y) const;
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;
  int locate(double x) const;
};

// Gauss-Legendre rule on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tridiagonal solve (Thomas). Diagonals: sub a[1..n-1], diag b[0..n-1], super c[0..n-2].
void solve_tridiag(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, std::vector<cplx>& rhs);
void solve_tridiag(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, std::vector<double>& rhs);

struct LinFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinFit linfit(const std::vector<double>& x, const std::vector<double>& y);

// 4th-order first/second derivatives on a uniform grid (one-sided near edges).
std::vector<double> deriv1_4(const std::vector<double>& f, double h);
std::vector<double> deriv2_4(const std::vector<double>& f, double h);
std::vector<cplx> deriv1_4(const std::vector<cplx>& f, double h);
std::vector<cplx> deriv2_4(const std::vector<cplx>& f, double h);

double max_abs(const std::vector<double>& v);
double max_abs(const std::vector<cplx>& v);

}  // namespace shearlab
