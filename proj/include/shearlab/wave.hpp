#pragma once
// Wave operator attached to a stable monotone shear profile: nodal
// coefficient data, static and sheared-frame applications, identity
// verification, and Fourier-side kernel diagnostics.

#include <cstdint>
#include <string>
#include <vector>

#include "shearlab/cutoffs.hpp"
#include "shearlab/fourier.hpp"
#include "shearlab/profile.hpp"
#include "shearlab/rayleigh.hpp"

namespace shearlab {

// Nodal data for one mode k. The kernel e(k,y',y) is assembled through the
// log-regular decomposition
//   e = -1/u'(y) + (u^{-1})''(u(y)) * phi * log|u(y') - u(y)| + smooth rest,
// so the diagonal is finite: e(k,y,y) = -1/u'(y) exactly, and e vanishes at
// y' = 0 and y' = 1.
//
// The sheared-frame images coincide with these samples at the pulled-back
// nodes v_j = u(y_j): D1(k,v[j]) = d1[j], D2(k,v[j]) = d2[j],
// E(k,v[i],v[j]) = E_at(i,j).
struct WaveData {
  int k = 0;
  int n = 0;
  double h = 0.0;
  std::uint64_t profile_hash = 0;
  std::vector<double> v;        // u at nodes
  std::vector<double> d1, d2;   // normalized local / nonlocal coefficients
  std::vector<double> W1;       // regularized p.v. weight
  std::vector<double> rho;      // (u - u(0)) (u(1) - u)
  std::vector<double> e;        // e[i*n+j] = e(k, y_i, y_j); j is the pole node
  std::vector<double> phi1m;    // phi1m[i*n+j] = phi1(k, y_i, y_j)
  std::vector<double> phire0, phire1;  // Phi^re_{j,1}(k, u_i, c_j), smooth parts
  std::vector<double> pv_comp;  // p.v. int dy' / (u(y') - u(y_j))
  std::vector<double> log_mom;  // int log|u(y') - u(y_j)| dy'

  double E_at(int i, int j) const { return e[std::size_t(i) * n + j]; }
  double D1_at(int j) const { return d1[j]; }
  double D2_at(int j) const { return d2[j]; }
};

// Solves the homogeneous problem at every admissible node and assembles the
// decomposition pieces. SingularNode when the Wronskian-type denominator
// dips below 1e-8 somewhere (profile unstable or nearly so there).
WaveData build_wave_data(int k, const ShearProfile& p);

// Static-frame applications on the y grid. The field must vanish outside
// supp chi2 (SupportViolation). Quadrature follows the kernel split: smooth
// part and half-line part by Simpson, log part by moment subtraction, pole
// part by a difference quotient against the diagonal value.
std::vector<cplx> apply_wave(const WaveData& d, const ShearProfile& p,
                             const std::vector<cplx>& omega);
std::vector<cplx> apply_wave_dual(const WaveData& d, const ShearProfile& p,
                                  const std::vector<cplx>& omega);
std::vector<cplx> apply_wave_inverse(const WaveData& d, const ShearProfile& p,
                                     const std::vector<cplx>& omega);
std::vector<double> apply_wave(const WaveData& d, const ShearProfile& p,
                               const std::vector<double>& omega);
std::vector<double> apply_wave_dual(const WaveData& d, const ShearProfile& p,
                                    const std::vector<double>& omega);
std::vector<double> apply_wave_inverse(const WaveData& d, const ShearProfile& p,
                                       const std::vector<double>& omega);

// Sheared-frame applications for fields sampled at v_j = u(y_j). The kernel
// carries the phase e^{-i (v1 - v) t k} (reversed for the inverse); the dual
// additionally carries the Jacobian at the output node, making it the
// v-variable dual of the inverse.
std::vector<cplx> apply_wave_moving(const WaveData& d, const ShearProfile& p, double t,
                                    const std::vector<cplx>& F);
std::vector<cplx> apply_wave_dual_moving(const WaveData& d, const ShearProfile& p, double t,
                                         const std::vector<cplx>& F);
std::vector<cplx> apply_wave_inverse_moving(const WaveData& d, const ShearProfile& p, double t,
                                            const std::vector<cplx>& F);

struct IntertwineReport {
  int k = 0;
  int trials = 0;
  double residual = 0.0;  // max over trials of ||D(R w) - u D(w)||_2 / ||w||_2
  std::vector<double> per_trial;
};

// Checks the intertwining relation D(R w) = u D(w), R = u Id - u'' inv(Delta_k),
// on plateau-supported trial fields (window times low trigonometric modes).
IntertwineReport verify_intertwine(const WaveData& d, const ShearProfile& p, int trials);

// Largest singular value of the discretized operator in the quadrature-
// weighted L2 inner product (dense assembly + power iteration).
double wave_operator_norm(const WaveData& d, const ShearProfile& p, bool inverse = false);

// Reference route for e(k, y_i, y_jc): direct fine quadrature of
// phi * int phi^{-2} on a refined grid, interpolating phi1. Valid off the
// diagonal only; the decomposition is the production path.
double e_reference_quadrature(const ShearProfile& p, const HomogeneousSolution& hom,
                              int i, int refine = 64);

struct WaveKernels {
  double t = 0.0;
  int k = 0;
  FtLattice2 D_mat, D1_mat, Dinv_mat, Dcom_mat;
  LinFit decay;           // log rms of |D| per offset vs |xi1 - xi2|^{s0}
  double lambda_D = 0.0;  // fitted decay rate, -decay.slope
  double com_env_out = 0.0;  // sup (1 + |xi_out - k t|^2) |Dcom|
  double com_env_in = 0.0;   // sup (1 + |xi_in  - k t|^2) |Dcom|
};

// Fourier kernels on the lattice xi_j = pi j / (u(1)-u(0)), |j| <= band,
// column by column: apply the operator to the chi2-windowed Fourier basis
// and transform the output; entries carry the same 1/(2 pi) normalization
// as the Green's-function transform. The forward and inverse kernels take
// the window on the input only; the dual and commutator kernels window both
// sides.
WaveKernels wave_kernel_fourier(const WaveData& d, const ShearProfile& p,
                                const CutoffSet& cut, double t, int band);

struct CommutatorReport {
  double t = 0.0;
  int k = 0;
  FtLattice2 kernel;  // chi2 (D - D^1) chi2 on the lattice
  double sup_abs = 0.0;
  double env_out = 0.0;  // sup (1 + |xi_out - k t|^2) |kernel|
  double env_in = 0.0;   // sup (1 + |xi_in  - k t|^2) |kernel|
};

CommutatorReport commutator_kernel(const WaveData& d, const ShearProfile& p,
                                   const CutoffSet& cut, double t, int band);

// Snapshot container (little-endian doubles, magic + version + k + grid
// hash), so simulation restarts skip reassembly.
void save_wave_data(const std::string& path, const WaveData& d);
WaveData load_wave_data(const std::string& path);

}  // namespace shearlab
