#include "shearlab/cutoffs.hpp"

#include <algorithm>
#include <cmath>

#include "shearlab/fourier.hpp"

namespace shearlab {

namespace {

double glue(double x, double a) {
  if (x <= 0.0) return 0.0;
  return std::exp(-std::pow(x, -a));
}
double glue_d1(double x, double a) {
  if (x <= 0.0) return 0.0;
  return a * std::pow(x, -a - 1.0) * glue(x, a);
}
double glue_d2(double x, double a) {
  if (x <= 0.0) return 0.0;
  return a * glue(x, a) * std::pow(x, -a - 2.0) * (a * std::pow(x, -a) - a - 1.0);
}

// rising step r(x): 0 for x<=0, 1 for x>=1
double step(double x, double a) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double g = glue(x, a), gb = glue(1.0 - x, a);
  return g / (g + gb);
}
double step_d1(double x, double a) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double g = glue(x, a), gb = glue(1.0 - x, a);
  const double gp = glue_d1(x, a), gbp = glue_d1(1.0 - x, a);
  const double D = g + gb;
  return (gp * gb + g * gbp) / (D * D);
}
double step_d2(double x, double a) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double g = glue(x, a), gb = glue(1.0 - x, a);
  const double gp = glue_d1(x, a), gbp = glue_d1(1.0 - x, a);
  const double gpp = glue_d2(x, a), gbpp = glue_d2(1.0 - x, a);
  const double D = g + gb, Dp = gp - gbp;
  const double N = gp * gb + g * gbp;
  const double Np = gpp * gb - g * gbpp;
  return Np / (D * D) - 2.0 * N * Dp / (D * D * D);
}

}  // namespace

double PlateauWindow::eval(double x) const {
  return step((x - l0) / (l1 - l0), a) * step((r0 - x) / (r0 - r1), a);
}
double PlateauWindow::d1(double x) const {
  const double wl = l1 - l0, wr = r0 - r1;
  const double s1 = step((x - l0) / wl, a), s2 = step((r0 - x) / wr, a);
  const double d1l = step_d1((x - l0) / wl, a) / wl;
  const double d1r = -step_d1((r0 - x) / wr, a) / wr;
  return d1l * s2 + s1 * d1r;
}
double PlateauWindow::d2(double x) const {
  const double wl = l1 - l0, wr = r0 - r1;
  const double s1 = step((x - l0) / wl, a), s2 = step((r0 - x) / wr, a);
  const double d1l = step_d1((x - l0) / wl, a) / wl;
  const double d1r = -step_d1((r0 - x) / wr, a) / wr;
  const double d2l = step_d2((x - l0) / wl, a) / (wl * wl);
  const double d2r = step_d2((r0 - x) / wr, a) / (wr * wr);
  return d2l * s2 + 2.0 * d1l * d1r + s1 * d2r;
}

CutoffSet build_cutoffs(const ShearProfile& p) {
  CutoffSet c;
  const double t0 = p.desc.theta0;
  c.theta0 = t0;
  // Gevrey order 2/(s0+1) = 1 + 1/a
  const double order = 2.0 / (p.desc.s0 + 1.0);
  require(order > 1.0, ErrorCode::BadDescriptor, "cutoff Gevrey order must exceed 1");
  c.glue_a = 1.0 / (order - 1.0);
  c.chi1 = {t0, 2.0 * t0, 1.0 - 2.0 * t0, 1.0 - t0, c.glue_a};
  c.chi2 = {0.5 * t0, t0, 1.0 - t0, 1.0 - 0.5 * t0, c.glue_a};
  c.upsilon = {p.u_at(0.5 * t0), p.u_at(t0), p.u_at(1.0 - t0), p.u_at(1.0 - 0.5 * t0),
               c.glue_a};
  return c;
}

SeminormReport gevrey_seminorm(const Grid& g, const std::vector<double>& f, double M,
                               double s, int m_max) {
  require(M > 0 && s > 0, ErrorCode::BadConfig, "gevrey_seminorm: M, s must be positive");
  require(m_max >= 0 && m_max <= 8, ErrorCode::BadConfig,
          "gevrey_seminorm: derivative order capped at 8");
  SeminormReport rep;
  rep.deriv_sup.resize(m_max + 1);
  double best = -1.0;
  double lgamma_fac = 0.0;  // log(m!)
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) lgamma_fac += std::log(static_cast<double>(m));
    const std::vector<double> dm = (m == 0) ? f : spectral_deriv_even(g, f, m);
    const double sup = max_abs(dm);
    require(sup < 1e100, ErrorCode::DerivativeBlowup,
            "gevrey_seminorm: derivative magnitude exceeds guard");
    rep.deriv_sup[m] = sup;
    // Gamma_s(m) M^m = (m!)^{1/s} (m+1)^{-2} M^m
    const double log_den = lgamma_fac / s - 2.0 * std::log(m + 1.0) + m * std::log(M);
    const double val = (sup > 0) ? std::exp(std::log(sup) - log_den) : 0.0;
    if (val > best) {
      best = val;
      rep.argmax_m = m;
    }
  }
  rep.value = best;
  return rep;
}

GevreyFit fourier_gevrey_fit(const Grid& g, const std::vector<double>& f, double xi_min,
                             double floor_rel) {
  const int jmax = (g.n - 1) / 2;
  const FtLattice ft = continuous_ft(g, f, jmax);
  double amax = 0.0;
  for (const auto& v : ft.val) amax = std::max(amax, std::abs(v));
  require(amax > 0, ErrorCode::InsufficientDecay, "fourier_gevrey_fit: zero input");
  std::vector<double> xs, ys;
  for (int idx = jmax; idx < 2 * jmax + 1; ++idx) {  // xi >= 0 branch
    const double xi = ft.xi(idx);
    const double av = std::abs(ft.val[idx]);
    if (xi < xi_min) continue;
    if (av < floor_rel * amax) break;  // stop at the noise floor
    xs.push_back(xi);
    ys.push_back(std::log(av));
  }
  require(xs.size() >= 8, ErrorCode::InsufficientDecay,
          "fourier_gevrey_fit: too few resolved lattice points above the floor");

  auto sse_for = [&](double s, double* mu, double* logL) {
    // linear LS in (logL, mu) for fixed s
    const std::size_t n = xs.size();
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::pow(xs[i], s);
      s1 += 1.0;
      sx += t;
      sxx += t * t;
      sy += ys[i];
      sxy += t * ys[i];
    }
    const double det = s1 * sxx - sx * sx;
    const double b = (sxx * sy - sx * sxy) / det;   // logL
    const double a = (s1 * sxy - sx * sy) / det;    // -mu
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (b + a * std::pow(xs[i], s));
      sse += r * r;
    }
    if (mu) *mu = -a;
    if (logL) *logL = b;
    return sse;
  };

  double best_s = 0.0, best_sse = 1e300;
  for (double s = 0.05; s <= 1.5001; s += 0.01) {
    const double sse = sse_for(s, nullptr, nullptr);
    if (sse < best_sse) {
      best_sse = sse;
      best_s = s;
    }
  }
  // parabolic refinement
  double lo = std::max(0.02, best_s - 0.01), hi = std::min(1.52, best_s + 0.01);
  for (int it = 0; it < 40; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (sse_for(m1, nullptr, nullptr) < sse_for(m2, nullptr, nullptr)) hi = m2;
    else lo = m1;
  }
  GevreyFit fit;
  fit.s = 0.5 * (lo + hi);
  double mu = 0, logL = 0;
  const double sse = sse_for(fit.s, &mu, &logL);
  fit.mu = mu;
  fit.L = std::exp(logL);
  fit.residual = std::sqrt(sse / xs.size());
  fit.n_points = static_cast<int>(xs.size());
  require(fit.mu > 0, ErrorCode::InsufficientDecay,
          "fourier_gevrey_fit: fitted decay rate is not positive");
  return fit;
}

}  // namespace shearlab
