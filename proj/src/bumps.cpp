#include "bumps.hpp"

#include <cmath>

namespace slab {

namespace {
inline double ramp_h(double u) { return u <= 1e-12 ? 0.0 : std::exp(-1.0 / u); }
}

BumpProfile::BumpProfile(BumpKind kind) : kind_(kind) {
  switch (kind) {
    case BumpKind::phi:
    case BumpKind::chi:
      plateau_ = 1.0;
      support_ = 2.0;
      break;
    case BumpKind::eta:
      plateau_ = 0.5;
      support_ = 1.0;
      break;
  }
}

double BumpProfile::operator()(double x) const {
  x = std::fabs(x);
  if (x <= plateau_) return 1.0;
  if (x >= support_) return 0.0;
  const double u = (x - plateau_) / (support_ - plateau_);
  const double down = ramp_h(1.0 - u);
  const double up = ramp_h(u);
  return down / (down + up);
}

BumpProfile make_profile(BumpKind kind) { return BumpProfile(kind); }

const BumpProfile& phi_profile() {
  static const BumpProfile p(BumpKind::phi);
  return p;
}
const BumpProfile& eta_profile() {
  static const BumpProfile p(BumpKind::eta);
  return p;
}
const BumpProfile& chi_profile() {
  static const BumpProfile p(BumpKind::chi);
  return p;
}

double eval_beta(std::span<const double> xi, double lambda) {
  const BumpProfile& phi = phi_profile();
  double v = 1.0;
  for (double c : xi) {
    v *= phi(c / lambda);
    if (v == 0.0) return 0.0;
  }
  return v;
}

double eval_chi_scaled(double xi, double center, double half_side) {
  return chi_profile()((xi - center) / half_side);
}

}  // namespace slab
