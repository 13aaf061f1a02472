#pragma once
// Smooth cutoff families with controlled Gevrey regularity, plus Gevrey
// diagnostics (physical-side seminorms and Fourier-side decay fits).

#include <vector>

#include "shearlab/profile.hpp"

namespace shearlab {

// One smooth plateau window: 0 off [l0,r0], 1 on [l1,r1], glue edges between.
struct PlateauWindow {
  double l0 = 0.0, l1 = 0.0, r1 = 0.0, r0 = 0.0;
  double a = 0.0;  // glue exponent; Gevrey order is 1 + 1/a
  double eval(double x) const;
  double d1(double x) const;
  double d2(double x) const;
};

struct CutoffSet {
  // chi1: support [theta0, 1-theta0], plateau [2 theta0, 1-2 theta0]
  // chi2: support [theta0/2, 1-theta0/2], plateau [theta0, 1-theta0]
  PlateauWindow chi1, chi2;
  // upsilon lives on the velocity interval [u(0), u(1)]; plateau
  // [u(theta0), u(1-theta0)], support [u(theta0/2), u(1-theta0/2)].
  PlateauWindow upsilon;
  double theta0 = 0.0;
  double glue_a = 0.0;  // chosen so the family has Gevrey order 2/(s0+1)
};

CutoffSet build_cutoffs(const ShearProfile& p);

// Physical-side Gevrey seminorm: max_m ||D^m f||_inf / (Gamma_s(m) M^m) with
// Gamma_s(m) = (m!)^{1/s} (m+1)^{-2}. Derivatives are spectral (even
// reflection), capped at m_max; DerivativeBlowup guards overflow.
struct SeminormReport {
  double value = 0.0;
  int argmax_m = 0;
  std::vector<double> deriv_sup;  // m = 0..m_max
};
SeminormReport gevrey_seminorm(const Grid& g, const std::vector<double>& f, double M,
                               double s, int m_max = 8);

// Fourier-side decay fit: log|fhat(xi)| ~ log L - mu |xi|^s over the resolved
// band. InsufficientDecay when no admissible (mu > 0) fit exists.
struct GevreyFit {
  double mu = 0.0, s = 0.0, L = 0.0;
  double residual = 0.0;  // rms of log-residuals over the fitted band
  int n_points = 0;
};
GevreyFit fourier_gevrey_fit(const Grid& g, const std::vector<double>& f,
                             double xi_min = 5.0, double floor_rel = 1e-13);

}  // namespace shearlab
