#pragma once

#include <span>

#include "common.hpp"

namespace slab {

enum class BumpKind { phi, eta, chi };

// Smooth even cutoff with an exactly-1 plateau and exactly-0 tail.
//   phi, chi: plateau [-1, 1], support (-2, 2)
//   eta:      plateau [-1/2, 1/2], support (-1, 1)
// The ramp is the normalized exp(-1/u) transition, so the profile meets both
// the plateau and the tail with all derivatives vanishing. By convention
// exp(-1/u) evaluates to exactly 0 for u <= 1e-12; this is part of the
// bit-exact contract.
class BumpProfile {
 public:
  explicit BumpProfile(BumpKind kind);

  double operator()(double x) const;
  double plateau() const { return plateau_; }
  double support() const { return support_; }
  BumpKind kind() const { return kind_; }

 private:
  BumpKind kind_;
  double plateau_, support_;
};

BumpProfile make_profile(BumpKind kind);

const BumpProfile& phi_profile();
const BumpProfile& eta_profile();
const BumpProfile& chi_profile();

// beta(xi/lambda) = prod_i phi(xi_i/lambda): 1 on [-lambda, lambda]^d, 0
// outside [-2 lambda, 2 lambda]^d.
double eval_beta(std::span<const double> xi, double lambda);

// chi((xi - center)/half_side) for one axis of a cube cutoff.
double eval_chi_scaled(double xi, double center, double half_side);

}  // namespace slab
