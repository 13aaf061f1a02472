#pragma once

#include <vector>

#include "shearlab/cutoffs.hpp"
#include "shearlab/fourier.hpp"
#include "shearlab/numerics.hpp"
#include "shearlab/profile.hpp"

namespace shearlab {

// Dirichlet Green's function of (d_yy - k^2) on [0,1], evaluated in the
// overflow-free scaled form, so any k is safe.
double green_value(int k, double y1, double y2);

struct GreenKernel {
  int k = 0;
  int n = 0;
  std::vector<double> values;  // row-major n x n
  double at(int i, int j) const { return values[size_t(i) * size_t(n) + size_t(j)]; }
};

GreenKernel greens_matrix(int k, const Grid& g);

// (d_yy - k^2) psi = omega with psi(0) = psi(1) = 0; Numerov tridiagonal
// solve, 4th order. apply_poisson_mode is its exact discrete forward map.
std::vector<cplx> solve_poisson_mode(const std::vector<cplx>& omega, int k, const Grid& g);
std::vector<double> solve_poisson_mode(const std::vector<double>& omega, int k, const Grid& g);
std::vector<cplx> apply_poisson_mode(const std::vector<cplx>& psi, int k, const Grid& g);

// Independent route: quadrature of the Green kernel, Simpson on each side
// of the kink. Cross-checks the banded solve.
std::vector<cplx> apply_green(const GreenKernel& G, const std::vector<cplx>& omega,
                              const Grid& g);

struct SpectralKernel {
  int k = 0;
  FtLattice2 values;     // kernel transform on the frequency lattice, /(2 pi)
  LinFit diag_decay;     // log of antidiagonal rms vs |xi1+xi2|^{s0}, slope < 0
  double envelope_C = 0.0;      // sup of |G| * (1 + k^2 + min(xi1^2, xi2^2))
  double envelope_resid = 0.0;  // rms log10 residual of the envelope fit
  LinFit envelope_fit;          // log10|G| vs log10(1+k^2+xi^2) on the xi1=-xi2 line
};

// Transform of chi(v1) * G_k(y(v1), y(v2)) * (dy/dv)(v2) * chi(v2) sampled
// on a uniform v lattice, normalized by 1/(2 pi); upsilon_variant selects
// the smoother cutoff pair.
SpectralKernel spectral_kernel(int k, const CutoffSet& cut, const ShearProfile& p,
                               const InverseMap& inv, int band, bool upsilon_variant = false);

// Sheared-frame elliptic solve: for fields sampled at v_j = u(y_j), solves
// (-k^2 + (u')^2 (d_v - itk)^2 + u'' (d_v - itk)) psi = chi2 * omega with
// Dirichlet ends, by exact pullback to the flat y problem.
std::vector<cplx> apply_inverse_delta_u(const std::vector<cplx>& omega, int k, double t,
                                        const ShearProfile& p, const CutoffSet& cut);
// Exact discrete forward map of the same operator (without the chi2 factor).
std::vector<cplx> apply_delta_u(const std::vector<cplx>& psi, int k, double t,
                                const ShearProfile& p);

// Coefficients of the nonlinear-frame Laplacian as a perturbation of the
// sheared one; h1/h2 measure how far the frame is from the background.
struct EllipticCoeffs {
  std::vector<double> h1;      // (u')^2 - (pa_y v)^2 at nodes
  std::vector<double> h2;      // u'' - pa_yy v at nodes
  std::vector<double> pa_yv;   // frame derivative samples
  std::vector<double> pa_yyv;
  std::vector<double> upsilon;  // Upsilon(u(y_j))
};

// Validates the support invariant: h1, h2 vanish outside the Upsilon plateau.
EllipticCoeffs make_elliptic_coeffs(const ShearProfile& p, const CutoffSet& cut,
                                    const std::vector<double>& pa_yv,
                                    const std::vector<double>& pa_yyv);

struct DeltaTResult {
  std::vector<cplx> psi;
  int iterations = 0;
  double residual = 0.0;  // relative, against the discrete forward operator
};

// Fixed-point solve of the perturbed problem; NoContraction when updates
// stop shrinking geometrically (frame too far from background).
DeltaTResult apply_inverse_delta_t(const std::vector<cplx>& Omega, const EllipticCoeffs& co,
                                   int k, double t, const ShearProfile& p, const CutoffSet& cut,
                                   double tol = 1e-10);
std::vector<cplx> apply_delta_t(const std::vector<cplx>& psi, const EllipticCoeffs& co, int k,
                                double t, const ShearProfile& p);

}  // namespace shearlab
