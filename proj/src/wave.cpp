#include "shearlab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include "shearlab/common.hpp"
#include "shearlab/greens.hpp"
#include "shearlab/snapshot.hpp"

namespace shearlab {

namespace {

enum class Op { kForward, kDual, kInverse };

// Fill a node where the stored expression is a removable 0/0: cubic
// interpolation from the four nearest valid neighbors, one-sided variants
// next to the boundary.
template <class T>
T fill_node(const std::vector<T>& g, int j, int n) {
  if (j >= 2 && j + 2 < n)
    return (4.0 * (g[j - 1] + g[j + 1]) - (g[j - 2] + g[j + 2])) * (1.0 / 6.0);
  if (j == 1) return 0.25 * g[0] + 1.5 * g[2] - g[3] + 0.25 * g[4];
  if (j == n - 2) return 0.25 * g[n - 1] + 1.5 * g[n - 3] - g[n - 4] + 0.25 * g[n - 5];
  if (j == 0) return 4.0 * g[1] - 6.0 * g[2] + 4.0 * g[3] - g[4];
  return 4.0 * g[n - 2] - 6.0 * g[n - 3] + 4.0 * g[n - 4] - g[n - 5];
}

// Shared core: all three operator variants on phase-folded samples. The
// nonlocal integral is evaluated piecewise following the kernel structure:
//   pole        difference quotient against the diagonal + precomputed p.v.
//   log         moment subtraction with the precomputed log moment
//   smooth      full-range Simpson on one regular branch
//   half-line   Simpson on [0, y_pole] of the branch difference
// The sheared frame only changes phases (and, for the dual, measure
// Jacobians), so t = 0 with vframe = false is the static operator.
std::vector<cplx> apply_core(const WaveData& d, const ShearProfile& p, Op op, double t,
                             bool vframe, const std::vector<cplx>& f) {
  const int n = d.n;
  require(static_cast<int>(f.size()) == n, ErrorCode::LatticeMismatch,
          "field sample count does not match the wave lattice");
  require(n == p.y.n && d.profile_hash == p.hash(), ErrorCode::LatticeMismatch,
          "wave data was built for a different profile");
  const double tk = t * static_cast<double>(d.k);

  std::vector<cplx> om(f);
  if (tk != 0.0)
    for (int i = 0; i < n; ++i) om[i] *= std::polar(1.0, -d.v[i] * tk);

  const std::vector<double> W = simpson_weights(0, n - 1, d.h);
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) out[j] = d.d1[j] * f[j];

  std::vector<cplx> dq(n);

  if (op == Op::kForward || op == Op::kDual) {
    // pole at the output node
    std::vector<cplx> src(n);
    for (int i = 0; i < n; ++i) {
      src[i] = (op == Op::kForward) ? om[i] : p.ddu[i] * om[i];
      if (op == Op::kDual && vframe) src[i] *= p.du[i];
    }
    for (int j = 1; j < n - 1; ++j) {
      const double outer = (op == Op::kForward) ? p.ddu[j] * d.d2[j]
                                                : (vframe ? d.d2[j] / p.du[j] : d.d2[j]);
      if (outer == 0.0) continue;
      const double vj = d.v[j];
      const double dinv2j = -p.ddu[j] / (p.du[j] * p.du[j] * p.du[j]);
      const cplx gj = src[j];

      for (int i = 0; i < n; ++i)
        if (i != j) dq[i] = (src[i] - gj) / (d.v[i] - vj);
      dq[j] = fill_node(dq, j, n);

      cplx P(0.0), L(0.0), S(0.0), H(0.0);
      for (int i = 0; i < n; ++i) {
        P += W[i] * dq[i];
        S += W[i] * d.phire1[static_cast<std::size_t>(i) * n + j] * src[i];
      }
      P += gj * d.pv_comp[j];
      if (dinv2j != 0.0) {
        // phi1 equals 1 at its own critical node, so the subtracted density
        // at i = j is src[j] itself
        for (int i = 0; i < n; ++i) {
          if (i == j) continue;
          const cplx si = d.phi1m[static_cast<std::size_t>(i) * n + j] * src[i];
          L += W[i] * (si - gj) * std::log(std::abs(d.v[i] - vj));
        }
        L += gj * d.log_mom[j];
      }
      const std::vector<double> Wm = simpson_weights(0, j, d.h);
      for (int i = 0; i <= j; ++i) {
        const std::size_t ix = static_cast<std::size_t>(i) * n + j;
        H += Wm[i] * (d.phire0[ix] - d.phire1[ix]) * src[i];
      }
      cplx I = -P / p.du[j] + dinv2j * L + S + H;
      if (tk != 0.0) I *= std::polar(1.0, vj * tk);
      out[j] += outer * I;
    }
  } else {
    // pole travels with the integration variable
    std::vector<cplx> c(n), q(n), sb(n);
    for (int i = 0; i < n; ++i) {
      c[i] = d.d2[i] * om[i];
      q[i] = -c[i] / p.du[i];
      sb[i] = (-p.ddu[i] / (p.du[i] * p.du[i] * p.du[i])) * c[i];
    }
    for (int j = 1; j < n - 1; ++j) {
      const double outer = p.ddu[j];
      if (outer == 0.0) continue;
      const double vj = d.v[j];

      for (int i = 0; i < n; ++i)
        if (i != j) dq[i] = (q[i] - q[j]) / (vj - d.v[i]);
      dq[j] = fill_node(dq, j, n);

      cplx P(0.0), L(0.0), S(0.0), H(0.0);
      const cplx sj = sb[j];
      const std::size_t row = static_cast<std::size_t>(j) * n;
      for (int i = 0; i < n; ++i) {
        P += W[i] * dq[i];
        S += W[i] * d.phire0[row + i] * c[i];
        if (i != j) {
          const cplx si = d.phi1m[row + i] * sb[i];
          L += W[i] * (si - sj) * std::log(std::abs(d.v[i] - vj));
        }
      }
      P -= q[j] * d.pv_comp[j];
      L += sj * d.log_mom[j];
      const std::vector<double> Wm = simpson_weights(0, j, d.h);
      for (int i = 0; i <= j; ++i) H += Wm[i] * (d.phire1[row + i] - d.phire0[row + i]) * c[i];
      cplx I = P + L + S + H;
      if (tk != 0.0) I *= std::polar(1.0, vj * tk);
      out[j] += outer * I;
    }
  }
  return out;
}

void check_support(const ShearProfile& p, const std::vector<cplx>& f) {
  const double lo = p.desc.theta0 / 2.0, hi = 1.0 - p.desc.theta0 / 2.0;
  double mx = 0.0;
  for (const auto& z : f) mx = std::max(mx, std::abs(z));
  if (mx == 0.0) return;
  for (int i = 0; i < p.y.n; ++i) {
    const double yy = p.y.x(i);
    if (yy < lo - 1e-12 || yy > hi + 1e-12)
      require(std::abs(f[i]) <= 1e-12 * mx, ErrorCode::SupportViolation,
              "field reaches outside the outer cutoff support");
  }
}

std::vector<cplx> promote(const std::vector<double>& f) {
  return std::vector<cplx>(f.begin(), f.end());
}

std::vector<double> real_part(const std::vector<cplx>& f) {
  std::vector<double> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i].real();
  return r;
}

}  // namespace

WaveData build_wave_data(int k, const ShearProfile& p) {
  require(k != 0, ErrorCode::BadConfig, "wave operator is defined per nonzero mode");
  const int n = p.y.n;
  require(n >= 33, ErrorCode::BadConfig, "wave lattice too coarse");
  const double h = p.y.h;

  WaveData d;
  d.k = k;
  d.n = n;
  d.h = h;
  d.profile_hash = p.hash();
  d.v = p.u;
  d.d1.assign(n, 0.0);
  d.d2.assign(n, 0.0);
  d.W1.assign(n, 0.0);
  d.rho.assign(n, 0.0);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  d.e.assign(nn, 0.0);
  d.phi1m.assign(nn, 0.0);
  d.phire0.assign(nn, 0.0);
  d.phire1.assign(nn, 0.0);
  d.pv_comp.assign(n, 0.0);
  d.log_mom.assign(n, 0.0);

  CumulativeIntegrator cum(n, h);
  const std::vector<double> W = simpson_weights(0, n - 1, h);
  std::vector<double> ga(n), gb(n), P0(n), P1(n), gpv(n), glg(n);

  for (int jc = 1; jc <= n - 2; ++jc) {
    const HomogeneousSolution hom = solve_phi1(k, jc, p);
    const double uc = p.u[jc], upc = p.du[jc], uppc = p.ddu[jc];
    const double dinv2 = -uppc / (upc * upc * upc);
    const double lg0 = std::log(std::abs(p.u[0] - uc));
    const double lg1 = std::log(std::abs(p.u[n - 1] - uc));

    // regular-part integrands; both have removable 0/0 at the critical node
    for (int i = 0; i < n; ++i) {
      if (i == jc) continue;
      const double dui = p.u[i] - uc;
      const double f1 = hom.phi1[i];
      ga[i] = (1.0 / (f1 * f1) - 1.0) / (dui * dui);
      gb[i] = (1.0 / p.du[i] - 1.0 / upc - dinv2 * dui) * p.du[i] / (dui * dui);
    }
    ga[jc] = fill_node(ga, jc, n);
    gb[jc] = fill_node(gb, jc, n);
    const std::vector<double> A0 = cum.integrate(ga, 0);
    const std::vector<double> B0 = cum.integrate(gb, 0);
    const double gaT = A0[n - 1], gbT = B0[n - 1];

    for (int i = 0; i < n; ++i) {
      if (i == jc) continue;
      const double dui = p.u[i] - uc;
      const double f1 = hom.phi1[i], ph = hom.phi[i];
      const double s0v = ph * (A0[i] + B0[i]) + (1.0 - f1) / upc +
                         f1 * dui / (upc * (p.u[0] - uc)) - ph * dinv2 * lg0;
      const double s1v = ph * ((A0[i] - gaT) + (B0[i] - gbT)) + (1.0 - f1) / upc +
                         f1 * dui / (upc * (p.u[n - 1] - uc)) - ph * dinv2 * lg1;
      P0[i] = s0v / dui;
      P1[i] = s1v / dui;
    }
    P0[jc] = fill_node(P0, jc, n);
    P1[jc] = fill_node(P1, jc, n);

    for (int i = 0; i < n; ++i) {
      const std::size_t ix = static_cast<std::size_t>(i) * n + jc;
      d.phi1m[ix] = hom.phi1[i];
      d.phire0[ix] = P0[i];
      d.phire1[ix] = P1[i];
      if (i == jc) {
        d.e[ix] = -1.0 / upc;
        continue;
      }
      const double dui = p.u[i] - uc;
      d.e[ix] = -1.0 / upc + dinv2 * hom.phi[i] * std::log(std::abs(dui)) +
                dui * ((i < jc) ? P0[i] : P1[i]);
    }

    // boundary value of the anchor-0 branch at y = 1 gives the regularized
    // principal-value weight; agrees with the direct route to rounding
    const double phire0_at1 = (p.u[n - 1] - uc) * P0[n - 1];
    const double w1 =
        ((-1.0 / upc + dinv2 * hom.phi[n - 1] * lg1 + phire0_at1) / hom.phi1[n - 1]) *
        (uc - p.u[0]) * upc;
    d.W1[jc] = w1;
    d.rho[jc] = rho_weight(p, jc);
    const double denom = wronskian_denom(w1, p, jc);
    require(denom > 1e-8, ErrorCode::SingularNode,
            "wave data: Wronskian-type denominator vanishes inside the channel");
    const double rd = std::sqrt(denom);
    d.d1[jc] = w1 / rd;
    d.d2[jc] = -d.rho[jc] / rd;

    // pole compensations folded into the applies
    const double yj = p.y.x(jc);
    for (int i = 0; i < n; ++i) {
      if (i == jc) {
        gpv[i] = -uppc / (2.0 * upc * upc);
        glg[i] = std::log(upc);
        continue;
      }
      const double dui = p.u[i] - uc, dyi = p.y.x(i) - yj;
      gpv[i] = 1.0 / dui - 1.0 / (upc * dyi);
      glg[i] = std::log(dui / dyi);
    }
    double spv = 0.0, slg = 0.0;
    for (int i = 0; i < n; ++i) {
      spv += W[i] * gpv[i];
      slg += W[i] * glg[i];
    }
    d.pv_comp[jc] = spv + std::log((1.0 - yj) / yj) / upc;
    d.log_mom[jc] = slg + yj * std::log(yj) + (1.0 - yj) * std::log(1.0 - yj) - 1.0;
  }

  // Boundary-speed columns: rho vanishes, the nonlocal weight d2 is zero, and
  // every apply multiplies these columns by a zero factor; only the local
  // coefficient matters, with the exact limit W1 -> -(u(1) - u(0)).
  d.W1[0] = d.W1[n - 1] = -(p.u[n - 1] - p.u[0]);
  d.d1[0] = d.d1[n - 1] = -1.0;
  return d;
}

std::vector<cplx> apply_wave(const WaveData& d, const ShearProfile& p,
                             const std::vector<cplx>& omega) {
  check_support(p, omega);
  return apply_core(d, p, Op::kForward, 0.0, false, omega);
}
std::vector<cplx> apply_wave_dual(const WaveData& d, const ShearProfile& p,
                                  const std::vector<cplx>& omega) {
  check_support(p, omega);
  return apply_core(d, p, Op::kDual, 0.0, false, omega);
}
std::vector<cplx> apply_wave_inverse(const WaveData& d, const ShearProfile& p,
                                     const std::vector<cplx>& omega) {
  check_support(p, omega);
  return apply_core(d, p, Op::kInverse, 0.0, false, omega);
}
std::vector<double> apply_wave(const WaveData& d, const ShearProfile& p,
                               const std::vector<double>& omega) {
  return real_part(apply_wave(d, p, promote(omega)));
}
std::vector<double> apply_wave_dual(const WaveData& d, const ShearProfile& p,
                                    const std::vector<double>& omega) {
  return real_part(apply_wave_dual(d, p, promote(omega)));
}
std::vector<double> apply_wave_inverse(const WaveData& d, const ShearProfile& p,
                                       const std::vector<double>& omega) {
  return real_part(apply_wave_inverse(d, p, promote(omega)));
}

std::vector<cplx> apply_wave_moving(const WaveData& d, const ShearProfile& p, double t,
                                    const std::vector<cplx>& F) {
  check_support(p, F);
  return apply_core(d, p, Op::kForward, t, false, F);
}
std::vector<cplx> apply_wave_dual_moving(const WaveData& d, const ShearProfile& p, double t,
                                         const std::vector<cplx>& F) {
  check_support(p, F);
  return apply_core(d, p, Op::kDual, t, true, F);
}
std::vector<cplx> apply_wave_inverse_moving(const WaveData& d, const ShearProfile& p, double t,
                                            const std::vector<cplx>& F) {
  check_support(p, F);
  return apply_core(d, p, Op::kInverse, t, false, F);
}

IntertwineReport verify_intertwine(const WaveData& d, const ShearProfile& p, int trials) {
  require(trials >= 1, ErrorCode::BadConfig, "need at least one trial field");
  const CutoffSet cut = build_cutoffs(p);
  const int n = d.n;
  const std::vector<double> W = simpson_weights(0, n - 1, d.h);

  IntertwineReport rep;
  rep.k = d.k;
  rep.trials = trials;
  for (int m = 0; m < trials; ++m) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
      const double yy = p.y.x(i);
      w[i] = cut.chi1.eval(yy) * std::cos((m + 1) * PI * yy + 0.37 * m);
    }
    const std::vector<double> psi = solve_poisson_mode(w, d.k, p.y);
    std::vector<double> rw(n);
    for (int i = 0; i < n; ++i) rw[i] = p.u[i] * w[i] - p.ddu[i] * psi[i];

    const std::vector<double> lhs = apply_wave(d, p, rw);
    const std::vector<double> dw = apply_wave(d, p, w);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = lhs[i] - p.u[i] * dw[i];
      num += W[i] * r * r;
      den += W[i] * w[i] * w[i];
    }
    rep.per_trial.push_back(std::sqrt(num / den));
  }
  rep.residual = *std::max_element(rep.per_trial.begin(), rep.per_trial.end());
  return rep;
}

double wave_operator_norm(const WaveData& d, const ShearProfile& p, bool inverse) {
  const int n = d.n;
  const std::vector<double> W = simpson_weights(0, n - 1, d.h);
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) sq[i] = std::sqrt(W[i]);

  // similarity-transformed dense matrix measures the quadrature-weighted L2
  std::vector<double> M(static_cast<std::size_t>(n) * n);
  std::vector<cplx> unit(n, cplx(0.0));
  for (int c = 0; c < n; ++c) {
    unit[c] = 1.0;
    const std::vector<cplx> col =
        apply_core(d, p, inverse ? Op::kInverse : Op::kForward, 0.0, false, unit);
    unit[c] = 0.0;
    for (int i = 0; i < n; ++i)
      M[static_cast<std::size_t>(i) * n + c] = col[i].real() * sq[i] / sq[c];
  }

  std::vector<double> x(n), y(n), z(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * i;
  double nx = 0.0;
  for (int i = 0; i < n; ++i) nx += x[i] * x[i];
  nx = std::sqrt(nx);
  for (int i = 0; i < n; ++i) x[i] /= nx;

  double sigma = 0.0;
  for (int it = 0; it < 500; ++it) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      const double* row = &M[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = &M[static_cast<std::size_t>(i) * n];
      const double yi = y[i];
      for (int j = 0; j < n; ++j) z[j] += row[j] * yi;
    }
    double ny = 0.0, nz = 0.0;
    for (int i = 0; i < n; ++i) {
      ny += y[i] * y[i];
      nz += z[i] * z[i];
    }
    const double next = std::sqrt(ny);
    nz = std::sqrt(nz);
    require(nz > 0.0, ErrorCode::NoConvergence, "operator annihilated the iteration vector");
    for (int i = 0; i < n; ++i) x[i] = z[i] / nz;
    if (it > 2 && std::abs(next - sigma) <= 1e-11 * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

double e_reference_quadrature(const ShearProfile& p, const HomogeneousSolution& hom, int i,
                              int refine) {
  const Grid& g = p.y;
  const int n = g.n, jc = hom.jc;
  require(i >= 0 && i < n && i != jc, ErrorCode::BadConfig,
          "reference quadrature is defined off the critical node");
  const int anchor = (i < jc) ? 0 : n - 1;
  const double ya = g.x(anchor), yb = g.x(i);
  if (ya == yb) return 0.0;
  const double dist = std::abs(g.x(jc) - yb);
  const double L = yb - ya;

  std::vector<double> gx, gw;
  gauss_legendre(12, gx, gw);
  const int m = std::max(16, refine);
  // panels graded geometrically toward the evaluation endpoint, where the
  // integrand steepens as the critical point approaches
  const double rho = std::pow(std::min(0.5, 0.25 * dist / std::abs(L)), 1.0 / m);
  double sum = 0.0;
  double prev = ya;
  for (int s = 1; s <= m + 1; ++s) {
    const double next = (s <= m) ? yb - L * std::pow(rho, s) : yb;
    const double mid = 0.5 * (prev + next), half = 0.5 * (next - prev);
    for (int q = 0; q < static_cast<int>(gx.size()); ++q) {
      const double xx = mid + half * gx[q];
      const double ph = lagrange_eval(g, hom.phi, xx, 7);
      sum += half * gw[q] / (ph * ph);
    }
    prev = next;
  }
  return hom.phi[i] * sum;
}

namespace {

// output-side transform rows: T[j*n + i] = W_i u'(y_i) e^{-i xi_j v_i} / 2pi
std::vector<cplx> transform_rows(const WaveData& d, const ShearProfile& p,
                                 const std::vector<double>& W, double dxi, int J) {
  const int n = d.n, m = 2 * J + 1;
  std::vector<cplx> T(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < m; ++j) {
    const double xi = dxi * (j - J);
    for (int i = 0; i < n; ++i)
      T[static_cast<std::size_t>(j) * n + i] =
          W[i] * p.du[i] * std::polar(1.0 / (2.0 * PI), -xi * d.v[i]);
  }
  return T;
}

void transform_into(const std::vector<cplx>& T, const std::vector<cplx>& field, int n, int m,
                    int l, std::vector<cplx>& dest) {
  for (int j = 0; j < m; ++j) {
    const cplx* row = &T[static_cast<std::size_t>(j) * n];
    cplx s(0.0);
    for (int i = 0; i < n; ++i) s += row[i] * field[i];
    dest[static_cast<std::size_t>(j) * m + l] = s;
  }
}

}  // namespace

WaveKernels wave_kernel_fourier(const WaveData& d, const ShearProfile& p, const CutoffSet& cut,
                                double t, int band) {
  require(band >= 16, ErrorCode::BadConfig, "kernel band too narrow");
  const int n = d.n, J = band, m = 2 * J + 1;
  const double Lv = d.v[n - 1] - d.v[0];
  require(Lv > 0.0, ErrorCode::BadConfig, "degenerate velocity range");
  const double dxi = PI / Lv;

  WaveKernels K;
  K.t = t;
  K.k = d.k;
  for (FtLattice2* mat : {&K.D_mat, &K.D1_mat, &K.Dinv_mat, &K.Dcom_mat}) {
    mat->dxi = dxi;
    mat->jmax = J;
    mat->val.assign(static_cast<std::size_t>(m) * m, cplx(0.0));
  }

  const std::vector<double> W = simpson_weights(0, n - 1, d.h);
  std::vector<double> chi2(n);
  for (int i = 0; i < n; ++i) chi2[i] = cut.chi2.eval(p.y.x(i));
  const std::vector<cplx> T = transform_rows(d, p, W, dxi, J);

  std::vector<cplx> fin(n), tmp(n);
  for (int l = 0; l < m; ++l) {
    const double xil = dxi * (l - J);
    for (int i = 0; i < n; ++i) fin[i] = chi2[i] * std::polar(1.0, xil * d.v[i]);
    const std::vector<cplx> outF = apply_core(d, p, Op::kForward, t, false, fin);
    const std::vector<cplx> outD = apply_core(d, p, Op::kDual, t, true, fin);
    const std::vector<cplx> outI = apply_core(d, p, Op::kInverse, t, false, fin);

    transform_into(T, outF, n, m, l, K.D_mat.val);
    for (int i = 0; i < n; ++i) tmp[i] = chi2[i] * outD[i];
    transform_into(T, tmp, n, m, l, K.D1_mat.val);
    transform_into(T, outI, n, m, l, K.Dinv_mat.val);
    for (int i = 0; i < n; ++i) tmp[i] = chi2[i] * (outF[i] - outD[i]);
    transform_into(T, tmp, n, m, l, K.Dcom_mat.val);
  }

  // Decay across the offset xi_out - xi_in, rms-aggregated per offset: the
  // sheared frame translates the kernel along the diagonal, so the offset
  // statistic is the t-invariant object worth fitting.
  const double s0 = p.desc.s0;
  std::vector<double> rms(2 * J + 1, 0.0);
  std::vector<int> cnt(2 * J + 1, 0);
  const double kt = t * static_cast<double>(d.k);
  double env_out = 0.0, env_in = 0.0;
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      const double mag = std::abs(K.D_mat.val[static_cast<std::size_t>(j) * m + l]);
      const int s = std::abs(j - l);
      rms[s] += mag * mag;
      ++cnt[s];
      const double cmag = std::abs(K.Dcom_mat.val[static_cast<std::size_t>(j) * m + l]);
      const double xo = dxi * (j - J) - kt, xin = dxi * (l - J) - kt;
      env_out = std::max(env_out, (1.0 + xo * xo) * cmag);
      env_in = std::max(env_in, (1.0 + xin * xin) * cmag);
    }
  require(rms[0] > 0.0, ErrorCode::InsufficientDecay, "wave kernel vanished");
  std::vector<double> fx, fy;
  for (int s = 0; s <= 2 * J; ++s) {
    const double v = std::sqrt(rms[s] / static_cast<double>(cnt[s]));
    if (v < std::sqrt(rms[0]) * 1e-13) break;
    fx.push_back(std::pow(dxi * s, s0));
    fy.push_back(std::log(v));
  }
  require(fx.size() >= 4, ErrorCode::InsufficientDecay, "wave kernel decay band too narrow");
  K.decay = linfit(fx, fy);
  K.lambda_D = -K.decay.slope;
  K.com_env_out = env_out;
  K.com_env_in = env_in;
  return K;
}

CommutatorReport commutator_kernel(const WaveData& d, const ShearProfile& p, const CutoffSet& cut,
                                   double t, int band) {
  require(band >= 16, ErrorCode::BadConfig, "kernel band too narrow");
  const int n = d.n, J = band, m = 2 * J + 1;
  const double Lv = d.v[n - 1] - d.v[0];
  require(Lv > 0.0, ErrorCode::BadConfig, "degenerate velocity range");
  const double dxi = PI / Lv;

  CommutatorReport rep;
  rep.t = t;
  rep.k = d.k;
  rep.kernel.dxi = dxi;
  rep.kernel.jmax = J;
  rep.kernel.val.assign(static_cast<std::size_t>(m) * m, cplx(0.0));

  const std::vector<double> W = simpson_weights(0, n - 1, d.h);
  std::vector<double> chi2(n);
  for (int i = 0; i < n; ++i) chi2[i] = cut.chi2.eval(p.y.x(i));
  const std::vector<cplx> T = transform_rows(d, p, W, dxi, J);

  std::vector<cplx> fin(n), tmp(n);
  for (int l = 0; l < m; ++l) {
    const double xil = dxi * (l - J);
    for (int i = 0; i < n; ++i) fin[i] = chi2[i] * std::polar(1.0, xil * d.v[i]);
    const std::vector<cplx> outF = apply_core(d, p, Op::kForward, t, false, fin);
    const std::vector<cplx> outD = apply_core(d, p, Op::kDual, t, true, fin);
    for (int i = 0; i < n; ++i) tmp[i] = chi2[i] * (outF[i] - outD[i]);
    transform_into(T, tmp, n, m, l, rep.kernel.val);
  }

  const double kt = t * static_cast<double>(d.k);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      const double mag = std::abs(rep.kernel.val[static_cast<std::size_t>(j) * m + l]);
      rep.sup_abs = std::max(rep.sup_abs, mag);
      const double xo = dxi * (j - J) - kt, xin = dxi * (l - J) - kt;
      rep.env_out = std::max(rep.env_out, (1.0 + xo * xo) * mag);
      rep.env_in = std::max(rep.env_in, (1.0 + xin * xin) * mag);
    }
  return rep;
}

void save_wave_data(const std::string& path, const WaveData& d) {
  SnapshotWriter w(kSnapshotWave, d.profile_hash);
  w.add_scalar("k", static_cast<std::int64_t>(d.k));
  w.add_scalar("n", static_cast<std::int64_t>(d.n));
  w.add_scalar("h", d.h);
  w.add("v", d.v);
  w.add("d1", d.d1);
  w.add("d2", d.d2);
  w.add("W1", d.W1);
  w.add("rho", d.rho);
  w.add("e", d.e);
  w.add("phi1m", d.phi1m);
  w.add("phire0", d.phire0);
  w.add("phire1", d.phire1);
  w.add("pvcomp", d.pv_comp);
  w.add("logmom", d.log_mom);
  w.write(path);
}

WaveData load_wave_data(const std::string& path) {
  SnapshotReader r(path);
  require(r.kind() == kSnapshotWave, ErrorCode::IoError, "snapshot is not wave data: " + path);
  WaveData d;
  d.k = static_cast<int>(r.scalar_i("k"));
  d.n = static_cast<int>(r.scalar_i("n"));
  d.h = r.scalar("h");
  d.profile_hash = r.hash();
  require(d.k != 0 && d.n >= 33 && d.h > 0.0, ErrorCode::IoError,
          "wave snapshot carries an invalid lattice: " + path);
  d.v = r.f64("v");
  d.d1 = r.f64("d1");
  d.d2 = r.f64("d2");
  d.W1 = r.f64("W1");
  d.rho = r.f64("rho");
  d.e = r.f64("e");
  d.phi1m = r.f64("phi1m");
  d.phire0 = r.f64("phire0");
  d.phire1 = r.f64("phire1");
  d.pv_comp = r.f64("pvcomp");
  d.log_mom = r.f64("logmom");
  const std::size_t n = static_cast<std::size_t>(d.n), nn = n * n;
  for (const auto* vec : {&d.v, &d.d1, &d.d2, &d.W1, &d.rho, &d.pv_comp, &d.log_mom})
    require(vec->size() == n, ErrorCode::IoError, "wave snapshot section length mismatch: " + path);
  for (const auto* mat : {&d.e, &d.phi1m, &d.phire0, &d.phire1})
    require(mat->size() == nn, ErrorCode::IoError, "wave snapshot section length mismatch: " + path);
  return d;
}

}  // namespace shearlab
