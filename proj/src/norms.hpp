#pragma once

#include "grid.hpp"
#include "lattice.hpp"
#include "propagate.hpp"

namespace slab {

// (iint |u|^q over the masked region)^{1/q}: exact tensor quadrature in x for
// even integer q with nx > 2 q lambda, trapezoid in t. Masked quadrature keeps
// the same tensor weights with indicator multiplication.
double spacetime_norm(const SpaceTimeField& u, double q,
                      const RegionMask* mask = nullptr);

// (int (||u(.,t)||_q)^p dt)^{1/p}; reduces to spacetime_norm when p == q.
double mixed_norm(const SpaceTimeField& u, double p, double q);

// L^2(T^d) norm of one time slice under the normalized measure.
double slice_l2(const SpaceTimeField& u, std::int64_t t);

// Pointwise (sum_tau |children|^2)^{1/2} over a shared grid.
SpaceTimeField square_function(std::span<const SpaceTimeField* const> children);

struct QuotientResult {
  double quotient = 0.0;
  double l2 = 0.0;
  double norm_qc = 0.0;
};

// ||S_lambda f||_{q_c} / ||f||_2, streamed through the fast path (the full
// space-time field is never materialized).
QuotientResult strichartz_quotient(const LatticeField& f, const SpaceTimeGrid& grid);

// Streaming q_c norm with an optional per-slice tap (used by sweeps to fold in
// height-split volume counting and oracle audits).
double streamed_norm_qc(const LatticeField& f, const SpaceTimeGrid& grid, double q,
                        const SliceFn& tap = nullptr);

struct RichardsonCertificate {
  double norm = 0.0;
  double refined_norm = 0.0;
  double drift = 0.0;  // relative change under nt -> 2nt - 1
  bool ok = false;
};

// Doubling nt must move the reported norm by less than tol, else the grid
// resolution is rejected.
RichardsonCertificate certify_time_quadrature(const LatticeField& f,
                                              const SpaceTimeGrid& grid, double q,
                                              double tol = 1e-6);

}  // namespace slab
