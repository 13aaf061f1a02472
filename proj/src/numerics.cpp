#include "shearlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace shearlab {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
  // Fornberg's recursive algorithm.
  const int n = static_cast<int>(x.size()) - 1;
  require(n >= m, ErrorCode::BadConfig, "fd_weights: not enough nodes");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> simpson_weights(int i0, int i1, double h) {
  require(i1 >= i0, ErrorCode::BadConfig, "simpson_weights: empty range");
  const int len = i1 - i0 + 1;
  std::vector<double> w(len, 0.0);
  const int m = len - 1;  // interval count
  if (m == 0) return w;
  if (m == 1) {
    w[0] = w[1] = h / 2.0;
    return w;
  }
  int simpson_end = m;  // process [0, simpson_end] with 1/3 rule
  if (m % 2 == 1) {
    if (m == 3) simpson_end = 0;
    else simpson_end = m - 3;
  }
  for (int j = 0; j + 2 <= simpson_end; j += 2) {
    w[j] += h / 3.0;
    w[j + 1] += 4.0 * h / 3.0;
    w[j + 2] += h / 3.0;
  }
  if (simpson_end != m) {
    // 3/8 rule on the trailing 3 intervals
    const int j = simpson_end;
    w[j] += 3.0 * h / 8.0;
    w[j + 1] += 9.0 * h / 8.0;
    w[j + 2] += 9.0 * h / 8.0;
    w[j + 3] += 3.0 * h / 8.0;
  }
  return w;
}

std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(n, h);
  w[0] = w[n - 1] = h / 2.0;
  return w;
}

CumulativeIntegrator::CumulativeIntegrator(int n, double h) : n_(n), h_(h) {
  require(n >= 9, ErrorCode::BadConfig, "CumulativeIntegrator needs >= 9 nodes");
  start_.resize(n);
  w1_.resize(n);
  w3_.resize(n);
  w5_.resize(n);
  std::vector<double> xs(7);
  for (int i = 0; i < n; ++i) {
    int s = std::clamp(i - 3, 0, n - 7);
    start_[i] = s;
    for (int j = 0; j < 7; ++j) xs[j] = (s + j) * h;
    const double x0 = i * h;
    auto a1 = fd_weights(x0, xs, 1);
    auto a3 = fd_weights(x0, xs, 3);
    auto a5 = fd_weights(x0, xs, 5);
    for (int j = 0; j < 7; ++j) {
      w1_[i][j] = a1[j];
      w3_[i][j] = a3[j];
      w5_[i][j] = a5[j];
    }
  }
}

std::vector<double> CumulativeIntegrator::deriv(
    const std::vector<double>& f, const std::vector<std::array<double, 7>>& w) const {
  std::vector<double> d(n_);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const int st = start_[i];
    for (int j = 0; j < 7; ++j) s += w[i][j] * f[st + j];
    d[i] = s;
  }
  return d;
}

std::vector<double> CumulativeIntegrator::integrate(const std::vector<double>& f,
                                                    int anchor) const {
  require(static_cast<int>(f.size()) == n_, ErrorCode::LatticeMismatch,
          "CumulativeIntegrator: size mismatch");
  require(anchor >= 0 && anchor < n_, ErrorCode::BadConfig, "anchor out of range");
  // signed cumulative trapezoid from the anchor
  std::vector<double> T(n_, 0.0);
  for (int i = anchor + 1; i < n_; ++i) T[i] = T[i - 1] + 0.5 * h_ * (f[i - 1] + f[i]);
  for (int i = anchor - 1; i >= 0; --i) T[i] = T[i + 1] - 0.5 * h_ * (f[i] + f[i + 1]);
  const auto d1 = deriv(f, w1_);
  const auto d3 = deriv(f, w3_);
  const auto d5 = deriv(f, w5_);
  const double c2 = h_ * h_ / 12.0;
  const double c4 = h_ * h_ * h_ * h_ / 720.0;
  const double c6 = c4 * h_ * h_ / 42.0;  // h^6/30240
  std::vector<double> F(n_);
  for (int m = 0; m < n_; ++m) {
    F[m] = T[m] - c2 * (d1[m] - d1[anchor]) + c4 * (d3[m] - d3[anchor]) -
           c6 * (d5[m] - d5[anchor]);
  }
  F[anchor] = 0.0;
  return F;
}

namespace {
template <typename T>
T lagrange_eval_impl(const Grid& g, const std::vector<T>& f, double x, int deg) {
  const int n = g.n;
  const int npts = deg + 1;
  require(n >= npts, ErrorCode::BadConfig, "lagrange_eval: grid too small");
  int j = static_cast<int>(std::floor((x - g.a) / g.h));
  int s = std::clamp(j - deg / 2, 0, n - npts);
  // Newton divided differences on the window
  std::vector<T> coef(f.begin() + s, f.begin() + s + npts);
  std::vector<double> xs(npts);
  for (int i = 0; i < npts; ++i) xs[i] = g.x(s + i);
  for (int lev = 1; lev < npts; ++lev)
    for (int i = npts - 1; i >= lev; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - lev]);
  T acc = coef[npts - 1];
  for (int i = npts - 2; i >= 0; --i) acc = acc * (x - xs[i]) + coef[i];
  return acc;
}
}  // namespace

double lagrange_eval(const Grid& g, const std::vector<double>& f, double x, int deg) {
  return lagrange_eval_impl(g, f, x, deg);
}
cplx lagrange_eval(const Grid& g, const std::vector<cplx>& f, double x, int deg) {
  return lagrange_eval_impl(g, f, x, deg);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  require(n >= 2 && y_.size() == x_.size(), ErrorCode::BadConfig, "MonotoneCubic: bad data");
  std::vector<double> d(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    const double dx = x_[i + 1] - x_[i];
    require(dx > 0, ErrorCode::BadConfig, "MonotoneCubic: x not increasing");
    d[i] = (y_[i + 1] - y_[i]) / dx;
  }
  m_.resize(n);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (int i = 1; i < n - 1; ++i)
    m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  // Fritsch-Carlson limiter
  for (int i = 0; i < n - 1; ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double al = m_[i] / d[i], be = m_[i + 1] / d[i];
    const double s = al * al + be * be;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m_[i] = tau * al * d[i];
      m_[i + 1] = tau * be * d[i];
    }
  }
}

int MonotoneCubic::locate(double x) const {
  int lo = 0, hi = static_cast<int>(x_.size()) - 1;
  if (x <= x_.front()) return 0;
  if (x >= x_[hi - 1]) return hi - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x_[mid] <= x ? lo : hi) = mid;
  }
  return lo;
}

double MonotoneCubic::eval(double x) const {
  const int i = locate(x);
  const double hh = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / hh;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * hh * m_[i] + h01 * y_[i + 1] + h11 * hh * m_[i + 1];
}

double MonotoneCubic::deriv(double x) const {
  const int i = locate(x);
  const double hh = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / hh;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / hh, dh10 = (3 * t2 - 4 * t + 1) / hh;
  const double dh01 = (-6 * t2 + 6 * t) / hh, dh11 = (3 * t2 - 2 * t) / hh;
  return dh00 * y_[i] + dh10 * hh * m_[i] + dh01 * y_[i + 1] + dh11 * hh * m_[i + 1];
}

double MonotoneCubic::inverse(double y) const {
  const bool inc = y_.back() > y_.front();
  double lo = x_.front(), hi = x_.back();
  if ((inc && y <= y_.front()) || (!inc && y >= y_.front())) return lo;
  if ((inc && y >= y_.back()) || (!inc && y <= y_.back())) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = eval(mid);
    if ((v < y) == inc) lo = mid; else hi = mid;
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double d = deriv(x);
    if (std::abs(d) < 1e-14) break;
    const double step = (eval(x) - y) / d;
    x -= step;
    x = std::clamp(x, lo, hi);
    if (std::abs(step) < 1e-16) break;
  }
  return x;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

template <typename T>
static void thomas(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, std::vector<T>& r) {
  const int n = static_cast<int>(b.size());
  std::vector<double> cp(n);
  std::vector<T> dp(n);
  double beta = b[0];
  require(std::abs(beta) > 0, ErrorCode::SingularNode, "tridiag: zero pivot");
  cp[0] = c.empty() ? 0.0 : c[0] / beta;
  dp[0] = r[0] / beta;
  for (int i = 1; i < n; ++i) {
    beta = b[i] - a[i] * cp[i - 1];
    require(std::abs(beta) > 0, ErrorCode::SingularNode, "tridiag: zero pivot");
    cp[i] = (i < n - 1 ? c[i] : 0.0) / beta;
    dp[i] = (r[i] - a[i] * dp[i - 1]) / beta;
  }
  r[n - 1] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) r[i] = dp[i] - cp[i] * r[i + 1];
}

void solve_tridiag(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, std::vector<cplx>& rhs) {
  thomas(a, b, c, rhs);
}
void solve_tridiag(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, std::vector<double>& rhs) {
  thomas(a, b, c, rhs);
}

LinFit linfit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  require(n >= 2 && y.size() == n, ErrorCode::BadConfig, "linfit: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double vx = sxx - sx * sx / dn;
  const double vy = syy - sy * sy / dn;
  const double cxy = sxy - sx * sy / dn;
  LinFit f;
  require(vx > 0, ErrorCode::BadConfig, "linfit: degenerate x");
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / dn;
  f.r2 = (vy > 0) ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

static std::vector<double> deriv_4(const std::vector<double>& f, double h, int m) {
  const int n = static_cast<int>(f.size());
  const int w = (m == 1) ? 5 : 5;  // 5-pt stencils: O(h^4) for f', O(h^3.. h^4) for f''
  require(n >= w + 2, ErrorCode::BadConfig, "deriv: grid too small");
  std::vector<double> out(n);
  std::vector<double> xs(7);
  for (int i = 0; i < n; ++i) {
    const int npts = 7;
    int s = std::clamp(i - 3, 0, n - npts);
    for (int j = 0; j < npts; ++j) xs[j] = (s + j) * h;
    const auto ws = fd_weights(i * h, xs, m);
    double acc = 0.0;
    for (int j = 0; j < npts; ++j) acc += ws[j] * f[s + j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> deriv1_4(const std::vector<double>& f, double h) { return deriv_4(f, h, 1); }
std::vector<double> deriv2_4(const std::vector<double>& f, double h) { return deriv_4(f, h, 2); }

namespace {
std::vector<cplx> deriv_4_cplx(const std::vector<cplx>& f, double h, int order) {
  const size_t n = f.size();
  std::vector<double> re(n), im(n);
  for (size_t i = 0; i < n; ++i) {
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  std::vector<double> dre = order == 1 ? deriv1_4(re, h) : deriv2_4(re, h);
  std::vector<double> dim = order == 1 ? deriv1_4(im, h) : deriv2_4(im, h);
  std::vector<cplx> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = cplx(dre[i], dim[i]);
  return out;
}
}  // namespace

std::vector<cplx> deriv1_4(const std::vector<cplx>& f, double h) { return deriv_4_cplx(f, h, 1); }
std::vector<cplx> deriv2_4(const std::vector<cplx>& f, double h) { return deriv_4_cplx(f, h, 2); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double t : v) m = std::max(m, std::abs(t));
  return m;
}
double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& t : v) m = std::max(m, std::abs(t));
  return m;
}

}  // namespace shearlab
