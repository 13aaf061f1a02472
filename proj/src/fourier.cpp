#include "shearlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace shearlab {

namespace {

std::mutex plan_mutex;

struct C2CPlan {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  int n = 0;
};

C2CPlan& get_c2c(int n, int sign) {
  static std::map<std::pair<int, int>, C2CPlan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& p = cache[{n, sign}];
  if (!p.plan) {
    p.n = n;
    p.buf = fftw_alloc_complex(n);
    p.plan = fftw_plan_dft_1d(n, p.buf, p.buf,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  return p;
}

struct C2C2Plan {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
};

C2C2Plan& get_c2c2(int n0, int n1, int sign) {
  static std::map<std::tuple<int, int, int>, C2C2Plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& p = cache[{n0, n1, sign}];
  if (!p.plan) {
    p.buf = fftw_alloc_complex(static_cast<std::size_t>(n0) * n1);
    p.plan = fftw_plan_dft_2d(n0, n1, p.buf, p.buf,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  return p;
}

struct RowPlans {
  fftw_plan r2c = nullptr, c2r = nullptr;
  double* real = nullptr;
  fftw_complex* comp = nullptr;
  int nx = 0;
};

RowPlans& get_row(int nx) {
  static std::map<int, RowPlans> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& p = cache[nx];
  if (!p.r2c) {
    p.nx = nx;
    p.real = fftw_alloc_real(nx);
    p.comp = fftw_alloc_complex(nx / 2 + 1);
    p.r2c = fftw_plan_dft_r2c_1d(nx, p.real, p.comp, FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_1d(nx, p.comp, p.real, FFTW_ESTIMATE);
  }
  return p;
}

}  // namespace

void fft(std::vector<cplx>& v, int sign) {
  const int n = static_cast<int>(v.size());
  auto& p = get_c2c(n, sign);
  std::memcpy(p.buf, v.data(), sizeof(cplx) * n);
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(v.data()), p.buf, sizeof(cplx) * n);
}

void fft2(std::vector<cplx>& v, int n0, int n1, int sign) {
  require(static_cast<int>(v.size()) == n0 * n1, ErrorCode::LatticeMismatch, "fft2 size");
  auto& p = get_c2c2(n0, n1, sign);
  std::memcpy(p.buf, v.data(), sizeof(cplx) * v.size());
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(v.data()), p.buf, sizeof(cplx) * v.size());
}

FtLattice continuous_ft(const Grid& g, const std::vector<cplx>& f, int jmax) {
  require(static_cast<int>(f.size()) == g.n, ErrorCode::LatticeMismatch, "continuous_ft size");
  const int M = 2 * (g.n - 1);
  require(jmax < g.n - 1, ErrorCode::BadConfig, "continuous_ft: jmax beyond Nyquist");
  std::vector<cplx> buf(M, cplx(0.0, 0.0));
  for (int m = 0; m < g.n; ++m) buf[m] = f[m];
  // endpoint samples carry trapezoid half-weight to match \int over [a,b]
  buf[0] *= 0.5;
  buf[g.n - 1] *= 0.5;
  fft(buf, -1);
  FtLattice out;
  const double L = g.b - g.a;
  out.dxi = PI / L;
  out.jmax = jmax;
  out.val.resize(2 * jmax + 1);
  for (int j = -jmax; j <= jmax; ++j) {
    const int idx = (j >= 0) ? j : (M + j);
    const double xi = out.dxi * j;
    const cplx phase = std::polar(g.h, -xi * g.a);
    out.val[j + jmax] = phase * buf[idx];
  }
  return out;
}

FtLattice continuous_ft(const Grid& g, const std::vector<double>& f, int jmax) {
  std::vector<cplx> fc(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) fc[i] = f[i];
  return continuous_ft(g, fc, jmax);
}

FtLattice2 continuous_ft2(const Grid& g, const std::vector<double>& K, int jmax) {
  const int n = g.n;
  require(static_cast<int>(K.size()) == n * n, ErrorCode::LatticeMismatch, "continuous_ft2 size");
  const int M = 2 * (n - 1);
  require(jmax < n - 1, ErrorCode::BadConfig, "continuous_ft2: jmax beyond Nyquist");
  std::vector<cplx> buf(static_cast<std::size_t>(M) * M, cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      buf[static_cast<std::size_t>(i) * M + j] = wi * wj * K[static_cast<std::size_t>(i) * n + j];
    }
  }
  fft2(buf, M, M, -1);
  FtLattice2 out;
  const double L = g.b - g.a;
  out.dxi = PI / L;
  out.jmax = jmax;
  const int W = 2 * jmax + 1;
  out.val.resize(static_cast<std::size_t>(W) * W);
  const double h2 = g.h * g.h;
  for (int j = -jmax; j <= jmax; ++j) {
    const int ij = (j >= 0) ? j : (M + j);
    for (int l = -jmax; l <= jmax; ++l) {
      const int il = (l >= 0) ? l : (M + l);
      const double xi_sum = out.dxi * (j + l);
      const cplx phase = std::polar(h2, -xi_sum * g.a);
      out.val[static_cast<std::size_t>(j + jmax) * W + (l + jmax)] =
          phase * buf[static_cast<std::size_t>(ij) * M + il];
    }
  }
  return out;
}

std::vector<double> spectral_deriv_even(const Grid& g, const std::vector<double>& f, int m) {
  const int n = g.n;
  require(static_cast<int>(f.size()) == n, ErrorCode::LatticeMismatch, "spectral_deriv size");
  const int M = 2 * (n - 1);
  std::vector<cplx> buf(M);
  for (int i = 0; i < n; ++i) buf[i] = f[i];
  for (int i = 1; i < n - 1; ++i) buf[M - i] = f[i];
  fft(buf, -1);
  const double L = g.b - g.a;
  for (int j = 0; j < M; ++j) {
    const int jj = (j <= M / 2) ? j : j - M;
    const cplx ixi(0.0, PI * jj / L);
    cplx mult = 1.0;
    for (int q = 0; q < m; ++q) mult *= ixi;
    buf[j] *= mult / static_cast<double>(M);
  }
  fft(buf, +1);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = buf[i].real();
  return out;
}

void row_c2r(const cplx* modes, int nk, double* phys, int nx) {
  auto& p = get_row(nx);
  require(nk == nx / 2 + 1, ErrorCode::LatticeMismatch, "row_c2r: nk != nx/2+1");
  std::memcpy(p.comp, modes, sizeof(cplx) * nk);
  fftw_execute(p.c2r);
  std::memcpy(phys, p.real, sizeof(double) * nx);
}

void row_r2c(const double* phys, int nx, cplx* modes, int nk) {
  auto& p = get_row(nx);
  require(nk == nx / 2 + 1, ErrorCode::LatticeMismatch, "row_r2c: nk != nx/2+1");
  std::memcpy(p.real, phys, sizeof(double) * nx);
  fftw_execute(p.r2c);
  const double inv = 1.0 / nx;
  for (int k = 0; k < nk; ++k) {
    modes[k] = cplx(p.comp[k][0], p.comp[k][1]) * inv;
  }
}

}  // namespace shearlab
