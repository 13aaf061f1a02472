#include "shearlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace shearlab {

namespace {

// Integer part of sqrt(eta) with exact integer fix-up around perfect squares.
int int_sqrt(double eta) {
  if (eta < 1.0) return 0;
  int e = static_cast<int>(std::floor(std::sqrt(eta)));
  while (static_cast<double>(e + 1) * (e + 1) <= eta) ++e;
  while (e > 0 && static_cast<double>(e) * e > eta) --e;
  return e;
}

double log_sum_exp(double la, double lb) {
  if (la < lb) std::swap(la, lb);
  return la + std::log1p(std::exp(lb - la));
}

}  // namespace

double MultiplierConfig::dlam() const {
  if (delta_lambda >= 0.0) return delta_lambda;
  // Floor-safe default. With Q the exact time integral of (1+t)^{-2q} over
  // (1, inf), the choice delta = (lambda0 - lambda')/(4 (1+lambda0) Q) gives
  // 1 + lambda(inf) = (1+lambda(1)) exp(-delta Q) > (1+lambda(1))(1 - delta Q)
  // and the linear bound already lands exactly on the floor, so the limit
  // clears it strictly. Halving the denominator to 2 would not: the defaults
  // would limit to 0.257 against a floor of 0.3.
  const double qq = q();
  const double Q = std::pow(2.0, 1.0 - 2.0 * qq) / (2.0 * qq - 1.0);
  return (lambda0 - lambda_prime) / (4.0 * (1.0 + lambda0) * Q);
}

void MultiplierConfig::validate() const {
  require(s > 0.5 && s < 1.0, ErrorCode::BadConfig, "gevrey index s must lie in (1/2, 1)");
  require(sigma > 5.0, ErrorCode::BadConfig, "sobolev correction sigma must exceed 5");
  require(mu > 0.0, ErrorCode::BadConfig, "resonance weight mu must be positive");
  require(c_kappa > 0.0, ErrorCode::BadConfig, "recursion constant c_kappa must be positive");
  require(lambda_prime > 0.0 && lambda0 > lambda_prime, ErrorCode::BadConfig,
          "need 0 < lambda_prime < lambda0");
  const double qq = q();
  require(qq > 0.5 && qq <= s / 8.0 + 7.0 / 16.0 + 1e-12, ErrorCode::BadConfig,
          "q_tilde must lie in (1/2, s/8 + 7/16]");
  require(k_M >= 1, ErrorCode::BadConfig, "mode cutoff k_M must be >= 1");
  require(K_v > 0.0 && K_D > 0.0, ErrorCode::BadConfig, "bookkeeping constants must be positive");
  const double floor = 0.5 * (lambda0 + lambda_prime);
  require(lambda_limit(*this) >= floor - 1e-12 * (1.0 + lambda0), ErrorCode::FloorViolated,
          "lambda(t) would cross (lambda0 + lambda_prime)/2; lower delta_lambda");
}

// j(t) = integral over (1, t) of (1+tau)^{-2q}, j(inf) = Q below.
static double lambda_j(double qq, double t) {
  return (std::pow(2.0, 1.0 - 2.0 * qq) - std::pow(1.0 + t, 1.0 - 2.0 * qq)) / (2.0 * qq - 1.0);
}

double lambda_of_t(const MultiplierConfig& cfg, double t) {
  const double lam1 = 0.75 * cfg.lambda0 + 0.25 * cfg.lambda_prime;
  const double d = cfg.dlam();
  if (t <= 1.0 || d == 0.0) return lam1;
  return (1.0 + lam1) * std::exp(-d * lambda_j(cfg.q(), t)) - 1.0;
}

double dlambda_dt(const MultiplierConfig& cfg, double t) {
  if (t <= 1.0) return 0.0;
  return -cfg.dlam() * (1.0 + lambda_of_t(cfg, t)) / std::pow(1.0 + t, 2.0 * cfg.q());
}

double lambda_limit(const MultiplierConfig& cfg) {
  const double lam1 = 0.75 * cfg.lambda0 + 0.25 * cfg.lambda_prime;
  const double qq = cfg.q();
  const double Q = std::pow(2.0, 1.0 - 2.0 * qq) / (2.0 * qq - 1.0);
  return (1.0 + lam1) * std::exp(-cfg.dlam() * Q) - 1.0;
}

CriticalTimes critical_times(double eta) {
  CriticalTimes tc;
  tc.eta = std::fabs(eta);
  tc.t0 = 2.0 * tc.eta;
  tc.E = int_sqrt(tc.eta);
  tc.tk.reserve(static_cast<std::size_t>(tc.E));
  for (int k = 1; k <= tc.E; ++k)
    tc.tk.push_back(tc.eta / k - tc.eta / (2.0 * k * (k + 1)));
  return tc;
}

IntervalHit interval_membership(int k, double eta, double t) {
  IntervalHit hit;
  if (eta < 0.0) {
    eta = -eta;
    k = -k;
  }
  if (k < 1) return hit;
  const CriticalTimes tc = critical_times(eta);
  if (k > tc.E) return hit;
  const double lo = tc.t(k), hi = tc.t(k - 1);
  if (t < lo || t > hi) return hit;
  hit.critical = true;
  hit.resonant = std::sqrt(eta) <= lo;
  hit.side = t >= eta / k ? IntervalSide::kRight : IntervalSide::kLeft;
  return hit;
}

double WeightTable::b(int k) const {
  if (k == 1) return 1.0 - 1.0 / eta;
  return 2.0 * (k - 1) / k * (1.0 - static_cast<double>(k) * k / eta);
}

double WeightTable::a(int k) const {
  return 2.0 * (k + 1) / k * (1.0 - static_cast<double>(k) * k / eta);
}

int WeightTable::locate(double t) const {
  // tk is strictly decreasing; first entry <= t marks the containing interval.
  auto it = std::lower_bound(tc.tk.begin(), tc.tk.end(), t, std::greater<double>());
  if (it == tc.tk.end()) return tc.E;
  return static_cast<int>(it - tc.tk.begin()) + 1;
}

double WeightTable::ln_w_NR(double t) const {
  if (eta <= 1.0 || tc.E < 1) return 0.0;
  if (t >= tc.t0) return 0.0;
  if (t <= tc.t(tc.E)) return ln_anchor[static_cast<std::size_t>(tc.E)];
  const int k = locate(t);
  const double peak = eta / k;
  if (t >= peak)
    return c_kappa * std::log(static_cast<double>(k) * k / eta * (1.0 + b(k) * (t - peak))) +
           ln_anchor[static_cast<std::size_t>(k) - 1];
  return -(1.0 + c_kappa) * std::log1p(a(k) * (peak - t)) + ln_peak[static_cast<std::size_t>(k) - 1];
}

double WeightTable::ln_w_R(double t) const {
  if (eta <= 1.0 || tc.E < 1) return 0.0;
  const double tcl = std::clamp(t, tc.t(tc.E), tc.t0);
  const int k = locate(tcl);
  const double peak = eta / k;
  const double d = std::fabs(tcl - peak);
  const double slope = tcl >= peak ? b(k) : a(k);
  return std::log(static_cast<double>(k) * k / eta * (1.0 + slope * d)) + ln_w_NR(tcl);
}

double WeightTable::ln_w_mode(int k, double t) const {
  if (eta <= 1.0 || tc.E < 1) return 0.0;
  if (t >= tc.t0) return 0.0;
  if (t < tc.t(tc.E)) return ln_anchor[static_cast<std::size_t>(tc.E)];
  if (k >= 1 && k <= tc.E) {
    const double lo = tc.t(k);
    if (std::sqrt(eta) <= lo && t >= lo && t <= tc.t(k - 1)) return ln_w_R(t);
  }
  return ln_w_NR(t);
}

double WeightTable::dtw_over_w_NR(double t) const {
  if (eta <= 1.0 || tc.E < 1) return 0.0;
  if (t >= tc.t0 || t <= tc.t(tc.E)) return 0.0;
  const int k = locate(t);
  const double peak = eta / k;
  if (t >= peak) {
    const double bk = b(k);
    return c_kappa * bk / (1.0 + bk * (t - peak));
  }
  const double ak = a(k);
  return (1.0 + c_kappa) * ak / (1.0 + ak * (peak - t));
}

double WeightTable::dtw_over_w_R(double t) const {
  if (eta <= 1.0 || tc.E < 1) return 0.0;
  if (t >= tc.t0 || t <= tc.t(tc.E)) return 0.0;
  const int k = locate(t);
  const double peak = eta / k;
  if (t >= peak) {
    const double bk = b(k);
    return (1.0 + c_kappa) * bk / (1.0 + bk * (t - peak));
  }
  const double ak = a(k);
  return c_kappa * ak / (1.0 + ak * (peak - t));
}

double WeightTable::dtw_over_w_mode(int k, double t) const {
  if (eta <= 1.0 || tc.E < 1) return 0.0;
  if (t >= tc.t0 || t <= tc.t(tc.E)) return 0.0;
  if (k >= 1 && k <= tc.E) {
    const double lo = tc.t(k);
    if (std::sqrt(eta) <= lo && t >= lo && t <= tc.t(k - 1)) return dtw_over_w_R(t);
  }
  return dtw_over_w_NR(t);
}

WeightTable build_weight_table(double eta, const MultiplierConfig& cfg) {
  WeightTable w;
  w.eta = std::fabs(eta);
  w.c_kappa = cfg.c_kappa;
  w.tc = critical_times(w.eta);
  w.ln_anchor.assign(static_cast<std::size_t>(w.tc.E) + 1, 0.0);
  if (w.eta <= 1.0 || w.tc.E < 1) return w;
  w.ln_peak.assign(static_cast<std::size_t>(w.tc.E), 0.0);
  // Backward sweep: each interval multiplies the anchor by (k^2/eta)^{c} on
  // its right half and (k^2/eta)^{1+c} on its left half, both exact at the
  // interval endpoints by the choice of b and a.
  for (int k = 1; k <= w.tc.E; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    const double lnr = std::log(static_cast<double>(k) * k / w.eta);
    w.ln_peak[i - 1] = cfg.c_kappa * lnr + w.ln_anchor[i - 1];
    w.ln_anchor[i] = (1.0 + cfg.c_kappa) * lnr + w.ln_peak[i - 1];
  }
  return w;
}

const WeightTable& WeightCache::table(double abs_eta) {
  abs_eta = std::fabs(abs_eta);
  auto it = tables_.find(abs_eta);
  if (it == tables_.end())
    it = tables_.emplace(abs_eta, build_weight_table(abs_eta, cfg_)).first;
  return it->second;
}

double MultiplierEval::ln_w(int k, double eta, double t) const {
  const int mode = eta >= 0.0 ? k : -k;
  return cache->table(eta).ln_w_mode(mode, t);
}

double MultiplierEval::w(int k, double eta, double t) const { return std::exp(ln_w(k, eta, t)); }

double MultiplierEval::dtw_over_w(int k, double eta, double t) const {
  const int mode = eta >= 0.0 ? k : -k;
  return cache->table(eta).dtw_over_w_mode(mode, t);
}

double MultiplierEval::J_tilde(int k, double eta, double t) const {
  const double mu = cache->config().mu;
  return std::exp(mu * std::sqrt(std::fabs(eta)) - ln_w(k, eta, t));
}

double MultiplierEval::J(int k, double eta, double t) const {
  const double mu = cache->config().mu;
  return J_tilde(k, eta, t) + std::exp(mu * std::sqrt(std::fabs(k)));
}

double MultiplierEval::ln_A_tilde(int k, double eta, double t) const {
  const MultiplierConfig& c = cache->config();
  const double l1 = std::fabs(k) + std::fabs(eta);
  const double br2 = 1.0 + static_cast<double>(k) * k + eta * eta;
  return lambda_of_t(c, t) * std::pow(l1, c.s) + 0.5 * c.sigma * std::log(br2) +
         c.mu * std::sqrt(std::fabs(eta)) - ln_w(k, eta, t);
}

double MultiplierEval::ln_A(int k, double eta, double t) const {
  const MultiplierConfig& c = cache->config();
  const double l1 = std::fabs(k) + std::fabs(eta);
  const double br2 = 1.0 + static_cast<double>(k) * k + eta * eta;
  const double lnJ = log_sum_exp(c.mu * std::sqrt(std::fabs(eta)) - ln_w(k, eta, t),
                                 c.mu * std::sqrt(std::fabs(k)));
  return lambda_of_t(c, t) * std::pow(l1, c.s) + 0.5 * c.sigma * std::log(br2) + lnJ;
}

double MultiplierEval::A(int k, double eta, double t) const { return std::exp(ln_A(k, eta, t)); }

double MultiplierEval::A_tilde(int k, double eta, double t) const {
  return std::exp(ln_A_tilde(k, eta, t));
}

double MultiplierEval::J_R(double eta, double t) const {
  const double mu = cache->config().mu;
  return std::exp(mu * std::sqrt(std::fabs(eta)) - cache->table(eta).ln_w_R(t));
}

double MultiplierEval::ln_A_R(double eta, double t) const {
  const MultiplierConfig& c = cache->config();
  const double ae = std::fabs(eta);
  return lambda_of_t(c, t) * std::pow(ae, c.s) + 0.5 * c.sigma * std::log1p(eta * eta) +
         c.mu * std::sqrt(ae) - cache->table(eta).ln_w_R(t);
}

double MultiplierEval::A_R(int, double eta, double t) const { return std::exp(ln_A_R(eta, t)); }

MultiplierEval multiplier_eval(WeightCache& cache) {
  MultiplierEval ev;
  ev.cache = &cache;
  return ev;
}

CkReport ck_terms(const std::vector<cplx>& f_hat, const ModeLattice& lat, double t,
                  MultiplierEval& ev, const CkAux* aux) {
  const std::size_t nk = lat.ks.size(), ne = lat.etas.size();
  require(f_hat.size() == nk * ne, ErrorCode::LatticeMismatch,
          "mode field size does not match the (k, eta) lattice");
  require(ne == 0 || lat.deta > 0.0, ErrorCode::LatticeMismatch,
          "eta quadrature weight must be positive");
  if (aux != nullptr) {
    const bool ok = aux->hbar.size() == ne && aux->dtv.size() == ne &&
                    aux->coeff1.size() == ne && aux->coeff2.size() == ne;
    require(ok, ErrorCode::LatticeMismatch, "auxiliary v-fields do not match the eta lattice");
  }

  const MultiplierConfig& cfg = ev.cache->config();
  CkReport r;
  const double mld = -dlambda_dt(cfg, t);  // >= 0

  for (std::size_t ik = 0; ik < nk; ++ik) {
    const int k = lat.ks[ik];
    for (std::size_t ie = 0; ie < ne; ++ie) {
      const double eta = lat.etas[ie];
      const double m2 = std::norm(f_hat[lat.index(ik, ie)]);
      if (m2 == 0.0) continue;
      const double lnA = ev.ln_A(k, eta, t);
      const double l1 = std::fabs(k) + std::fabs(eta);
      r.ck_lambda += mld * std::pow(l1, cfg.s) * std::exp(2.0 * lnA + std::log(m2)) * lat.deta;
      const double dw = ev.dtw_over_w(k, eta, t);
      if (dw > 0.0)
        r.ck_w += dw * std::exp(lnA + ev.ln_A_tilde(k, eta, t) + std::log(m2)) * lat.deta;
    }
  }

  if (aux != nullptr) {
    // v-profile terms carry the k = 0 weights and the shifted norm A/<dv>^s;
    // prefactor <t>^{2+2s} with the standard bracket.
    const double pt = std::pow(1.0 + t * t, 1.0 + cfg.s);
    for (std::size_t ie = 0; ie < ne; ++ie) {
      const double eta = lat.etas[ie];
      const double ae = std::fabs(eta);
      const double lnA0s = ev.ln_A(0, eta, t) - 0.5 * cfg.s * std::log1p(eta * eta);
      const double dw0 = ev.dtw_over_w(0, eta, t);
      const double e2s = std::pow(ae, 2.0 * cfg.s);
      const double mh = std::norm(aux->hbar[ie]), mv = std::norm(aux->dtv[ie]);
      if (mh > 0.0) {
        r.ck_v2_w += pt * dw0 * std::exp(2.0 * lnA0s + std::log(mh)) * lat.deta;
        r.ck_v2_lambda += pt * mld * e2s * std::exp(2.0 * lnA0s + std::log(mh)) * lat.deta;
      }
      if (mv > 0.0) {
        r.ck_v1_w += pt * dw0 * std::exp(2.0 * lnA0s + std::log(mv)) * lat.deta;
        r.ck_v1_lambda += pt * mld * e2s * std::exp(2.0 * lnA0s + std::log(mv)) * lat.deta;
      }
      const double lnAR = ev.ln_A_R(eta, t);
      const double dwR = ev.cache->table(eta).dtw_over_w_R(t);
      const double es = std::pow(ae, cfg.s);
      const double m1 = std::norm(aux->coeff1[ie]), m2c = std::norm(aux->coeff2[ie]);
      if (m1 > 0.0) {
        r.cck1_lambda += mld * es * std::exp(2.0 * lnAR + std::log(m1)) * lat.deta;
        r.cck1_w += dwR * std::exp(2.0 * lnAR + std::log(m1)) * lat.deta;
      }
      if (m2c > 0.0) {
        const double lnAR1 = lnAR - 0.5 * std::log1p(eta * eta);
        r.cck2_lambda += mld * es * std::exp(2.0 * lnAR1 + std::log(m2c)) * lat.deta;
        r.cck2_w += dwR * std::exp(2.0 * lnAR1 + std::log(m2c)) * lat.deta;
      }
    }
  }
  return r;
}

void accumulate_ck(CkReport& dst, const CkReport& src, double dt) {
  dst.ck_lambda += dt * src.ck_lambda;
  dst.ck_w += dt * src.ck_w;
  dst.ck_v1_lambda += dt * src.ck_v1_lambda;
  dst.ck_v1_w += dt * src.ck_v1_w;
  dst.ck_v2_lambda += dt * src.ck_v2_lambda;
  dst.ck_v2_w += dt * src.ck_v2_w;
  dst.cck1_lambda += dt * src.cck1_lambda;
  dst.cck1_w += dt * src.cck1_w;
  dst.cck2_lambda += dt * src.cck2_lambda;
  dst.cck2_w += dt * src.cck2_w;
}

GrowthFit weight_growth_fit(const std::vector<double>& etas, const MultiplierConfig& cfg) {
  // ln of the total sweep ratio w_NR(2 eta)/w_NR(t_E) is -ln_anchor[E];
  // regress its log against log eta.
  std::vector<double> xs, ys;
  for (double eta : etas) {
    const WeightTable w = build_weight_table(eta, cfg);
    if (w.tc.E < 1 || w.eta <= 1.0) continue;
    const double lr = -w.ln_anchor[static_cast<std::size_t>(w.tc.E)];
    if (lr <= 0.0) continue;
    xs.push_back(std::log(w.eta));
    ys.push_back(std::log(lr));
  }
  GrowthFit fit;
  const std::size_t n = xs.size();
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double dn = n * sxx - sx * sx;
  if (dn == 0.0) return fit;
  fit.exponent = (n * sxy - sx * sy) / dn;
  const double ssr = syy - sy * sy / n - fit.exponent * (sxy - sx * sy / n);
  const double sst = syy - sy * sy / n;
  fit.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  return fit;
}

}  // namespace shearlab
