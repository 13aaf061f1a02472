#pragma once
// FFTW wrappers: in-place complex FFTs, sampled continuous Fourier transforms
// of compactly supported data, spectral derivatives via even reflection.

#include <vector>

#include "shearlab/numerics.hpp"

namespace shearlab {

// In-place unnormalized DFT, sign = -1 forward / +1 backward.
void fft(std::vector<cplx>& v, int sign);
// In-place 2D DFT on row-major n0 x n1 data.
void fft2(std::vector<cplx>& v, int n0, int n1, int sign);

// Continuous Fourier transform \int f(x) e^{-i xi x} dx of grid samples,
// zero-extended to twice the domain. Lattice xi_j = pi j / L, |j| <= jmax.
struct FtLattice {
  double dxi = 0.0;
  int jmax = 0;
  std::vector<cplx> val;  // index j + jmax, j = -jmax..jmax
  double xi(int idx) const { return dxi * (idx - jmax); }
};
FtLattice continuous_ft(const Grid& g, const std::vector<cplx>& f, int jmax);
FtLattice continuous_ft(const Grid& g, const std::vector<double>& f, int jmax);

// 2D version for kernels K(x1,x2): values at (xi1_j, xi2_l), row-major.
struct FtLattice2 {
  double dxi = 0.0;
  int jmax = 0;
  std::vector<cplx> val;  // (j+jmax)*(2*jmax+1) + (l+jmax)
  double xi(int idx) const { return dxi * (idx - jmax); }
  const cplx& at(int j, int l) const { return val[(j + jmax) * (2 * jmax + 1) + (l + jmax)]; }
};
FtLattice2 continuous_ft2(const Grid& g, const std::vector<double>& K, int jmax);

// m-th spectral derivative via even reflection; assumes the derivatives of f
// vanish at both endpoints (bumps, plateaued cutoffs).
std::vector<double> spectral_deriv_even(const Grid& g, const std::vector<double>& f, int m);

// Hermitian row transforms for pseudo-spectral products.
// modes[k], k = 0..nk-1 (nk = nx/2+1) with phys(x) = sum_k modes_k e^{ikx} (+ c.c. for k>0).
void row_c2r(const cplx* modes, int nk, double* phys, int nx);
void row_r2c(const double* phys, int nx, cplx* modes, int nk);

}  // namespace shearlab
