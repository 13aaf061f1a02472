#pragma once
// Rayleigh operator discretization, linear stability scan, and the Volterra
// solve for the homogeneous solution phi1 seeding the wave operator.

#include <vector>

#include "shearlab/profile.hpp"

namespace shearlab {

// Dense real discretization of u Id - u'' Delta_k^{-1} on interior nodes.
struct RayleighMatrix {
  int k = 0;
  int n = 0;  // interior node count (grid n - 2)
  std::vector<double> mat;  // row-major n x n
  double at(int i, int j) const { return mat[static_cast<std::size_t>(i) * n + j]; }
};

RayleighMatrix assemble_rayleigh(int k, const ShearProfile& p);

struct StabilityReport {
  int k = 0;
  std::vector<cplx> eigenvalues;  // spectrum at the working resolution
  std::vector<bool> flags;        // per eigenvalue: off the segment [u(0),u(1)]
  int n_flagged = 0;              // flags that persist under grid refinement
  double wronskian_min = 0.0;     // min over y_c of W1^2 + (pi rho u''/u'^2)^2
  bool stable = false;            // no persistent flags and wronskian_min above floor
};

// Positivity floor for wronskian_min; near-onset profiles dip orders of
// magnitude below it while their eigenvalue pair is still unresolvable.
inline constexpr double kWronskianFloor = 1e-2;

// Spectrum plus the Wronskian-positivity signal for one mode.
StabilityReport stability_scan_mode(int k, const ShearProfile& p);
// All modes k = 1..k_max.
std::vector<StabilityReport> stability_scan(int k_max, const ShearProfile& p);

struct HomogeneousSolution {
  int k = 0;
  int jc = 0;        // node index of the critical point
  double y_c = 0.0;
  std::vector<double> phi1;  // phi1(k, y, y_c), equals 1 at y_c
  std::vector<double> phi;   // (u - u(y_c)) phi1
  double residual = 0.0;     // relative sup-norm Volterra residual
  int iterations = 0;
  bool dense_fallback = false;
};

// Solves (Id - k^2 T) phi1 = 1 with T the iterated Volterra kernel whose
// inner integrand vanishes quadratically at y_c. Picard iteration with a
// dense Nystrom fallback when the iteration stalls.
HomogeneousSolution solve_phi1(int k, int jc, const ShearProfile& p, double tol = 1e-10);

// Channel weight rho(y_c) = (u(y_c) - u(0)) (u(1) - u(y_c)).
double rho_weight(const ShearProfile& p, int jc);

// Regularized W1 = u'(y_c) rho(y_c) p.v. int_0^1 phi^{-2} dy, evaluated as a
// boundary term plus a pole-subtracted principal value plus a regular
// integral of (phi1^{-2} - 1) / (u - u(y_c))^2.
double pv_weight(const HomogeneousSolution& hom, const ShearProfile& p);

// W1^2 + (pi rho u''/u'^2)^2, the denominator whose positivity the stability
// scan requires.
double wronskian_denom(double w1, const ShearProfile& p, int jc);

}  // namespace shearlab
