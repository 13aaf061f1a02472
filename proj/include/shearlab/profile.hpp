#pragma once
// Monotone shear profiles on [0,1]: construction, hypothesis checks, inversion.

#include <cstdint>
#include <string>
#include <vector>

#include "shearlab/numerics.hpp"

namespace shearlab {

struct ProfileDescriptor {
  // couette | perturbed-couette (u' gains a bump) | convex-couette (u''
  // gains a nonnegative bump) | tabulated
  std::string family = "couette";
  double amplitude = 0.0;          // bump amplitude for the perturbed families
  double bump_lo = 0.45, bump_hi = 0.55;
  double theta0 = 0.1;   // support margin parameter, in (0, 1/10]
  double s0 = 0.2;       // Gevrey index hypothesis for u''
  int n = 257;           // uniform grid nodes
  std::string table_path;  // tabulated family: CSV with y,u columns

  std::string canonical() const;
};

class ShearProfile {
 public:
  ProfileDescriptor desc;
  Grid y;
  std::vector<double> u, du, ddu;  // samples on y
  double c0 = 0.0;                 // measured min u'
  bool analytic = false;

  double u_at(double yy) const;
  double du_at(double yy) const;
  double ddu_at(double yy) const;
  double u0() const { return u.front(); }
  double u1() const { return u.back(); }
  std::uint64_t hash() const;

  // internal: analytic evaluation state for the perturbed families
  double amp_ = 0.0, lo_ = 0.0, hi_ = 0.0, glue_a_ = 0.0, norm_ = 1.0;
  bool convex_ = false;          // bump enters u'' instead of u'
  Grid fine_;                    // fine grid for the bump antiderivatives
  std::vector<double> S_fine_;   // S(y) = \int_0^y bump
  std::vector<double> T_fine_;   // T(y) = \int_0^y S
};

// Validates monotonicity (NonMonotone), support of u'' inside
// [4 theta0, 1 - 4 theta0] (HypothesisViolation), descriptor ranges (BadDescriptor).
ShearProfile build_profile(const ProfileDescriptor& d);

struct InverseMap {
  const ShearProfile* p = nullptr;
  double v0 = 0.0, v1 = 0.0;
  MonotoneCubic spline;  // used for non-analytic profiles
  double y_of_v(double v) const;
  double dy_dv(double v) const;    // (u^{-1})'
  double d2y_dv2(double v) const;  // (u^{-1})''
};

// Round-trip |u^{-1}(u(y)) - y| <= 1e-10 on nodes is checked at build.
InverseMap invert_profile(const ShearProfile& p);

}  // namespace shearlab
