#pragma once
// Channel Euler solver for shear perturbations and the moving-frame
// diagnostics built on top of it: the nonlinear coordinate change, the good
// unknown, damping norms, scattering pullbacks, Lagrangian support
// tracking, and the weighted energy budget.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shearlab/cutoffs.hpp"
#include "shearlab/multiplier.hpp"
#include "shearlab/numerics.hpp"
#include "shearlab/profile.hpp"
#include "shearlab/wave.hpp"

namespace shearlab {

// Perturbation vorticity in mixed representation: omega(x, y_j) =
// sum_{k=0}^{nk-1} row_k(j) e^{ikx} (+ conjugate for k > 0), row-major
// omega[k * y.n + j]. Rows above the 2/3 dealiasing cutoff stay zero.
// mean_ux always matches omega (the k = 0 stream solve), so the running
// Phi trapezoid never re-reads history.
struct SimState {
  double t = 0.0;
  double eps = 0.0;
  int nx = 0;
  int nk = 0;  // nx / 2 + 1
  Grid y;
  std::vector<cplx> omega;
  std::vector<double> Phi;      // int_0^t <U^x> dtau per node
  std::vector<double> mean_ux;  // <U^x>(y) at time t
  double dt = 0.0;              // current step; halved on CflViolation
  std::uint64_t steps = 0;
  int halvings = 0;
  double ic_lo = 0.0, ic_hi = 0.0;  // initial vertical support band
  GevreyFit ic_fit;                 // Fourier decay fit of the initial bump
  std::uint64_t profile_hash = 0;

  int kcut() const { return nx / 3; }
  const cplx* row(int k) const { return omega.data() + std::size_t(k) * std::size_t(y.n); }
  cplx* row(int k) { return omega.data() + std::size_t(k) * std::size_t(y.n); }
  double mass() const;  // box integral of omega (k = 0 row, trapezoid, times 2 pi)
  double l2() const;    // L2 norm of omega over the box
};

struct IcSpec {
  int kx = 1;          // x harmonic of the initial bump
  double y_lo = 0.4;   // vertical support, inside [3 theta0, 1 - 3 theta0]
  double y_hi = 0.6;
  double s = 0.75;     // target Gevrey index of the bump edges
  std::uint64_t seed = 1234;  // phase seed; 0 pins the cosine phase at zero
};

// eps * cos(kx x + phase) * bump(y). The x mean vanishes by construction;
// support and amplitude caps are validated (SupportViolation, BadConfig).
SimState init_state(const ShearProfile& p, const IcSpec& ic, double eps, int nx);

// Wraps an explicit mode field (tests, restarts): checks sizes, the
// dealiasing mask, wall clearance (zero outside [theta0/2, 1 - theta0/2]),
// and zero box mean (HypothesisViolation).
SimState wrap_state(const ShearProfile& p, int nx, double eps, const std::vector<cplx>& rows);

// Stream function per mode: (d_yy - k^2) psi_k = omega_k, psi_k(0) =
// psi_k(1) = 0. Row-major like SimState::omega.
std::vector<cplx> stream_rows(const SimState& st);

// Step bound c * min(dx / max|u + U^x|, dy / max|U^y|); the linear variant
// uses the background shear alone.
double initial_dt(const SimState& st, const ShearProfile& p, double cfl, bool linear);

// One RK4 step of omega_t + u d_x omega - u'' d_x psi + U . grad omega = 0,
// psi re-solved every stage, products dealiased by the 2/3 rule in x, y
// derivatives by energy-conserving centered differences (skew-symmetric
// average of advective and divergence forms). Throws CflViolation before
// touching the state when dt violates the advective bound at the current
// velocity; BlowupGuard when the step grows the L2 norm more than tenfold.
void step_nonlinear(SimState& st, const ShearProfile& p, double dt, double cfl);

// Linear dynamics only (U . grad omega dropped); CFL checks the background
// shear, not the perturbation velocity.
void step_linearized(SimState& st, const ShearProfile& p, double dt, double cfl);

struct RunParams {
  double t_end = 100.0;
  double cfl = 0.4;
  bool linear = false;
  int max_halvings = 12;
};

// base * 2^j for j >= 0, clipped to (0, t_end], with t_end appended when the
// geometric ladder does not land on it.
std::vector<double> checkpoint_times(double base, double t_end);

// Lagrangian tracking of particles seeded along the top and bottom edges of
// the initial support band. Advanced once per accepted field step by RK4
// with the velocity linear in t inside the step.
class SupportTracker {
 public:
  SupportTracker() = default;
  SupportTracker(const SimState& st, const ShearProfile& p, double y_lo, double y_hi,
                 int per_edge = 16);
  void after_step(const SimState& st);  // st already advanced to t + dt
  double max_excursion() const { return excursion_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& yy() const { return y_; }

 private:
  struct Snapshot {  // velocity field data at one time
    double t = 0.0;
    std::vector<cplx> psi, dpsi;
  };
  const ShearProfile* p_ = nullptr;
  int nx_ = 0, nk_ = 0;
  Grid grid_;
  std::vector<double> x_, y_, y0_;
  Snapshot prev_;
  double excursion_ = 0.0;

  void velocity(const Snapshot& a, const Snapshot& b, double t, double x, double y,
                double* ux, double* uy) const;
  static Snapshot snapshot(const SimState& st);
};

// Advances to every stop time in order (stops already behind st.t are
// skipped) and invokes the hook there; the final step before a stop is
// shortened to land exactly. CflViolation halves st.dt and retries until
// max_halvings, then propagates. The tracker, when given, is advanced once
// per accepted step.
void run_to(SimState& st, const ShearProfile& p, const RunParams& rp,
            const std::vector<double>& stops, const std::function<void(const SimState&)>& hook,
            SupportTracker* tracker = nullptr);

// Moving-frame fields at one instant. The y-indexed arrays live on the
// channel nodes; h and h_bar hold the frame fields at v_of_y[j], i.e. the
// pullback to the node index. The coefficient differences (nonlinear-frame
// composition minus the shear-only one) live on the uniform v lattice.
struct CoordinateFrame {
  double t = 0.0;
  std::vector<double> v_of_y, pa_t_v, pa_y_v, pa_yy_v;
  std::vector<double> h, h_bar;
  Grid v;  // uniform lattice spanning [u(0), u(1)]
  std::vector<double> chi_diff, du_diff, ddu_diff;
  double consistency = 0.0;  // plateau residual of h_bar = (-P0 Omega - h)/t
  double min_dv = 0.0;       // min over nodes of pa_y_v

  // y(t, v): inverse of the frame map, monotone because min_dv > 0.
  double y_of_v(const Grid& ygrid, double vv) const;
};

// Requires t >= 1 (the frame carries 1/t factors). FrameDegenerate when the
// Jacobian drops below c0 / 2. The consistency identity is evaluated only
// on nodes whose difference stencil stays inside the chi1 plateau; in the
// glue region the identity genuinely fails by chi1' <U^x>/t.
CoordinateFrame update_frame(const SimState& st, const ShearProfile& p, const CutoffSet& cut);

// Wave operators for k = 1 .. k_M - 1 on the profile grid.
std::vector<WaveData> build_wave_bank(const ShearProfile& p, int k_M);

// Mode field of the good unknown, sampled at v_of_y like the frame. Rows
// with k = 0 or k >= k_M are the plain pullback of omega; rows with
// 0 < k < k_M are wave-transformed. The pullback phase e^{i k (t u + Phi)}
// cancels the Orr oscillation, so every row is slowly varying in v.
struct GoodUnknown {
  double t = 0.0;
  int k_M = 1;
  int nk = 0;
  std::vector<cplx> f;      // transformed rows
  std::vector<cplx> pull;   // plain pullback rows (the Omega comparison field)
};

// MissingArtifacts when the bank does not cover 0 < k < k_M on this grid.
GoodUnknown good_unknown(const SimState& st, const CoordinateFrame& fr, const ShearProfile& p,
                         const std::vector<WaveData>& bank, int k_M);

// Inverts the transform and strips the pullback phase; returns omega-style
// rows for the round-trip check.
std::vector<cplx> good_unknown_inverse(const GoodUnknown& g, const SimState& st,
                                       const ShearProfile& p, const std::vector<WaveData>& bank);

struct DampingSeries {
  std::vector<double> t;
  std::vector<double> norm_uy;        // ||U^y||_2 over the box
  std::vector<double> norm_ux_fluct;  // ||U^x - <U^x>||_2
  std::vector<double> phi_max;        // max_y |Phi|
  std::vector<std::vector<double>> mean_ux;  // per sample, on the nodes
  // filled by damping_finalize:
  std::vector<double> u_inf;          // -d_y of the wall-clamped antiderivative
  std::vector<double> norm_ux_gap;    // ||<U^x>(t_i) - u_inf||_2
  double u_inf_cross_gap = 0.0;       // L2 gap against the last sampled mean flow
};

void damping_sample(DampingSeries& ds, const SimState& st);

// u_inf from the k = 0 row of the scattering candidate via the Poisson
// solve. The cross gap against the final <U^x> pins the sign convention.
void damping_finalize(DampingSeries& ds, const std::vector<cplx>& f_inf_row0, const Grid& y);

struct ScatterProfile {
  std::vector<double> t;        // checkpoint times used
  std::vector<cplx> f_inf;      // plain pullback rows at the last time
  std::vector<cplx> F_inf;      // wave-composed pullback rows
  std::vector<double> gap_plain;  // ||pull(t_{i+1}) - pull(t_i)||_2
  std::vector<double> gap_wave;
};

// Needs >= 3 snapshots (MissingArtifacts). Pullback per mode is the phase
// e^{i k (t u(y) + Phi(t,y))}; the wave-composed variant applies the static
// bank before the phase.
ScatterProfile scattering_profile(const std::vector<SimState>& snaps, const ShearProfile& p,
                                  const std::vector<WaveData>& bank, int k_M);

// Eulerian support band: smallest node interval containing every |omega| >
// threshold, reported as y values (lo > hi means the field is below the
// threshold everywhere).
struct SupportBand {
  double lo = 1.0, hi = 0.0;
};
SupportBand eulerian_support(const SimState& st, double threshold = 1e-12);

// Largest |eta| the weighted quadratures may trust: where the fitted
// Gevrey envelope of the data meets rel_floor times its amplitude. Beyond
// it the anticipatory weight 1/w amplifies round-off into garbage.
double trusted_eta(const GevreyFit& fit, double rel_floor = 1e-16);

struct EnergyRecord {
  double t = 0.0;
  double E = 0.0;    // E_f + E_v + E_d
  double E_f = 0.0;  // (1/2) ||A f||^2
  double E_v = 0.0;
  double E_d = 0.0;
  double norm_Af = 0.0;
  double norm_AOmega = 0.0;  // same multiplier on the untransformed pullback
  CkReport ck;               // instantaneous budget terms on the same lattice
};

// Weighted energies on the eta lattice |eta| <= eta_max (spacing set by the
// channel image width). All norms share the plain lattice-sum convention,
// so absolute scales carry the weight deficit of the initial data and only
// ratios between times or runs are meaningful.
EnergyRecord energy_report(const SimState& st, const CoordinateFrame& fr, const GoodUnknown& g,
                           const ShearProfile& p, WeightCache& wc, double eta_max);

// Self-describing binary checkpoints (kind tag, profile hash, named
// payloads). Loading validates the hash against the profile (SpecHashMismatch).
void save_checkpoint(const SimState& st, const std::string& path);
SimState load_checkpoint(const std::string& path, const ShearProfile& p);

}  // namespace shearlab
