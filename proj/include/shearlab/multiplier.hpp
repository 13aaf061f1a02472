#pragma once
// Time-dependent Fourier multiplier machinery: critical times of the Orr
// mechanism, the resonance weights w_NR / w_R / w_k, the norm multipliers
// J, A and their resonant variants, the shrinking Gevrey radius lambda(t),
// and the Cauchy-Kovalevskaya budget terms fed by the simulator.

#include <cmath>
#include <map>
#include <vector>

#include "shearlab/common.hpp"
#include "shearlab/numerics.hpp"

namespace shearlab {

struct MultiplierConfig {
  double s = 0.75;            // Gevrey index, in (1/2, 1)
  double sigma = 5.5;         // Sobolev correction, > 5
  double mu = 1.0;            // resonance exponent weight
  double c_kappa = 1.0;       // recursion exponent constant
  double lambda0 = 0.4;       // initial Gevrey radius
  double lambda_prime = 0.2;  // final Gevrey radius
  double delta_lambda = -1.0;  // radius decay rate; negative means derive the floor-safe default
  double q_tilde = 0.0;        // decay-weight exponent; 0 means derive s/8 + 7/16
  int k_M = 8;                // wave-operator mode cutoff
  double K_v = 1.0;           // frame-energy bookkeeping constant
  double K_D = 1.0;           // decay bookkeeping constant

  double q() const { return q_tilde > 0.0 ? q_tilde : s / 8.0 + 7.0 / 16.0; }
  double dlam() const;  // resolved delta_lambda
  // Throws BadConfig on parameter-range violations, FloorViolated when the
  // configured decay would push lambda below (lambda0 + lambda_prime)/2.
  void validate() const;
};

// Gevrey radius: constant 3/4 lambda0 + 1/4 lambda' up to t = 1, then the
// closed-form solution of d(lambda)/dt = -delta (1 + lambda) / (1+t)^{2q}.
// The shifted weight 1+t keeps the time integral elementary, so the floor
// check is exact arithmetic rather than quadrature.
double lambda_of_t(const MultiplierConfig& cfg, double t);
double dlambda_dt(const MultiplierConfig& cfg, double t);  // <= 0, zero for t <= 1
double lambda_limit(const MultiplierConfig& cfg);          // exact t -> infinity value

struct CriticalTimes {
  double eta = 0.0;       // |eta|
  int E = 0;              // integer part of sqrt(|eta|)
  double t0 = 0.0;        // 2|eta|
  std::vector<double> tk;  // tk[k-1] = t_{k,eta} for k = 1..E, strictly decreasing
  double t(int k) const { return k == 0 ? t0 : tk[static_cast<std::size_t>(k) - 1]; }
};

// Exact arithmetic of t_{k,eta} = |eta/k| - |eta| / (2|k|(|k|+1)); tk empty
// when sqrt(|eta|) < 1.
CriticalTimes critical_times(double eta);

enum class IntervalSide { kLeft, kRight };

struct IntervalHit {
  bool critical = false;  // t inside I_{k,eta}
  bool resonant = false;  // t additionally inside the restricted window
  IntervalSide side = IntervalSide::kLeft;
};

// Membership of t in the critical interval [t_{|k|,eta}, t_{|k|-1,eta}] of
// mode k; empty whenever eta*k < 0 or |k| > E(sqrt|eta|). The resonant flag
// adds the sqrt|eta| <= t_{k,eta} restriction. Side is relative to |eta/k|.
IntervalHit interval_membership(int k, double eta, double t);

// Closed-form weight family for one frequency magnitude. Anchors of the
// backward recursion are stored in log form; every evaluation is exact
// per-branch arithmetic, never table interpolation.
struct WeightTable {
  double eta = 0.0;      // >= 0
  double c_kappa = 1.0;
  CriticalTimes tc;
  std::vector<double> ln_anchor;  // ln w_NR(t_k) for k = 0..E; ln_anchor[0] = 0
  std::vector<double> ln_peak;    // ln w_NR(eta/k) for k = 1..E

  double b(int k) const;  // right-branch slope, b_{1,eta} = (eta-1)/eta
  double a(int k) const;  // left-branch slope

  double w_NR(double t) const { return std::exp(ln_w_NR(t)); }
  double w_R(double t) const { return std::exp(ln_w_R(t)); }
  // w_k for mode k against this |eta|: resonant branch only on the mode's own
  // restricted window, frozen below t_E, one above 2 eta. k <= 0 never
  // resonates (mirror convention: callers pass k = 0 when eta*k < 0).
  double w_mode(int k, double t) const { return std::exp(ln_w_mode(k, t)); }
  double ln_w_NR(double t) const;
  double ln_w_R(double t) const;  // clamped to [t_E, 2 eta] outside the sweep
  double ln_w_mode(int k, double t) const;
  // Analytic per-branch logarithmic derivatives; zero off the sweep.
  double dtw_over_w_NR(double t) const;
  double dtw_over_w_R(double t) const;
  double dtw_over_w_mode(int k, double t) const;

 private:
  // Containing interval index k (1..E) for t inside [t_E, 2 eta).
  int locate(double t) const;
  friend WeightTable build_weight_table(double eta, const MultiplierConfig& cfg);
};

// Backward sweep k = 1..E(sqrt eta) through the right then left half of each
// critical interval, anchored at w_NR = 1 for t >= 2 eta. Degenerate
// |eta| <= 1 yields the all-ones table.
WeightTable build_weight_table(double eta, const MultiplierConfig& cfg);

// Per-|eta| table cache; tables are immutable once built.
class WeightCache {
 public:
  explicit WeightCache(const MultiplierConfig& cfg) : cfg_(cfg) {}
  const WeightTable& table(double abs_eta);
  const MultiplierConfig& config() const { return cfg_; }

 private:
  MultiplierConfig cfg_;
  std::map<double, WeightTable> tables_;
};

// Evaluators for the norm multipliers on the (k, eta) lattice. The l1 norm
// |k,eta| = |k| + |eta| feeds the Gevrey exponent; <k,eta> is the Japanese
// bracket. Negative eta mirrors through (k, eta) -> (-k, -eta).
struct MultiplierEval {
  WeightCache* cache = nullptr;

  double w(int k, double eta, double t) const;
  double J(int k, double eta, double t) const;        // e^{mu sqrt|eta|}/w_k + e^{mu sqrt|k|}
  double J_tilde(int k, double eta, double t) const;  // e^{mu sqrt|eta|}/w_k
  double A(int k, double eta, double t) const;
  double A_tilde(int k, double eta, double t) const;
  double J_R(double eta, double t) const;             // three-branch resonant multiplier
  // Value is k-independent; the argument mirrors the lattice signature.
  double A_R(int k, double eta, double t) const;
  double dtw_over_w(int k, double eta, double t) const;

  // Log-scale evaluators. 1/w alone can reach e^600 at eta ~ 1e4, so budget
  // quadratures combine logs before a single exp.
  double ln_w(int k, double eta, double t) const;
  double ln_A(int k, double eta, double t) const;
  double ln_A_tilde(int k, double eta, double t) const;
  double ln_A_R(double eta, double t) const;
};

MultiplierEval multiplier_eval(WeightCache& cache);

struct ModeLattice {
  std::vector<int> ks;       // z-modes, ascending
  std::vector<double> etas;  // v-frequencies, uniform spacing
  double deta = 0.0;         // quadrature weight of the eta sum
  std::size_t index(std::size_t ik, std::size_t ie) const { return ik * etas.size() + ie; }
};

// Hatted v-profile fields the simulator supplies for the coordinate-indexed
// terms; all on the lattice's eta axis.
struct CkAux {
  std::vector<cplx> hbar;    // forcing profile of the frame ODE
  std::vector<cplx> dtv;     // frame velocity
  std::vector<cplx> coeff1;  // (u' o u^{-1})^2 - (pa_y v)^2
  std::vector<cplx> coeff2;  // (u'' o u^{-1}) - pa_yy v
};

struct CkReport {
  double ck_lambda = 0.0;
  double ck_w = 0.0;
  double ck_v1_lambda = 0.0;
  double ck_v1_w = 0.0;
  double ck_v2_lambda = 0.0;
  double ck_v2_w = 0.0;
  double cck1_lambda = 0.0;
  double cck1_w = 0.0;
  double cck2_lambda = 0.0;
  double cck2_w = 0.0;
};

// Quadrature of the ten budget displays at time t. f_hat is row-major
// [mode][eta]; aux may be null when only the f-indexed terms are wanted.
// Throws LatticeMismatch on size disagreements.
CkReport ck_terms(const std::vector<cplx>& f_hat, const ModeLattice& lat, double t,
                  MultiplierEval& ev, const CkAux* aux);

// dst += dt * src, fieldwise; the running integrals of the report.
void accumulate_ck(CkReport& dst, const CkReport& src, double dt);

// Fitted exponent of log(growth ratio) vs log eta, growth ratio =
// w_NR(2 eta)/w_NR(t_E); the e^{mu sqrt|eta|} normalization predicts 1/2.
struct GrowthFit {
  double exponent = 0.0;
  double r2 = 0.0;
};
GrowthFit weight_growth_fit(const std::vector<double>& etas, const MultiplierConfig& cfg);

}  // namespace shearlab
