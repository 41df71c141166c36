#include "norms.hpp"

#include <cmath>

#include "quadrature.hpp"

namespace slab {

double spacetime_norm(const SpaceTimeField& u, double q, const RegionMask* mask) {
  if (!(q >= 1.0)) fail_config("spacetime_norm: need q >= 1");
  const SpaceTimeGrid& g = u.grid();
  if (g.size() == 0) fail_config("spacetime_norm: empty grid");
  if (mask && !mask->grid().same_shape(g))
    fail_config("spacetime_norm: mask grid mismatch");
  const std::int64_t sp = g.spatial_size();
  std::vector<double> weighted(g.nt());
  std::vector<double> scratch(sp);
  for (std::int64_t t = 0; t < g.nt(); ++t) {
    auto slice = u.slice(t);
    if (mask) {
      const std::uint8_t* row = mask->bits().data() + t * sp;
      for (std::int64_t j = 0; j < sp; ++j)
        scratch[j] = row[j] ? pow_abs_q(slice[j], q) : 0.0;
    } else {
      for (std::int64_t j = 0; j < sp; ++j) scratch[j] = pow_abs_q(slice[j], q);
    }
    weighted[t] =
        g.time_weight(t) * pairwise_sum(scratch) / static_cast<double>(sp);
  }
  return std::pow(pairwise_sum(weighted), 1.0 / q);
}

double mixed_norm(const SpaceTimeField& u, double p, double q) {
  if (!(p >= 1.0 && q >= 1.0)) fail_config("mixed_norm: need p, q >= 1");
  const SpaceTimeGrid& g = u.grid();
  std::vector<double> weighted(g.nt());
  std::vector<double> scratch;
  for (std::int64_t t = 0; t < g.nt(); ++t) {
    const double mean = slice_power_mean(u.slice(t), q, scratch);
    weighted[t] = g.time_weight(t) * std::pow(mean, p / q);
  }
  return std::pow(pairwise_sum(weighted), 1.0 / p);
}

double slice_l2(const SpaceTimeField& u, std::int64_t t) {
  std::vector<double> scratch;
  return std::sqrt(slice_power_mean(u.slice(t), 2.0, scratch));
}

SpaceTimeField square_function(std::span<const SpaceTimeField* const> children) {
  if (children.empty()) fail_config("square_function: no children");
  const SpaceTimeGrid& g = children[0]->grid();
  for (const auto* c : children)
    if (!c->grid().same_shape(g)) fail_config("square_function: grid mismatch");
  SpaceTimeField out(g);
  auto values = out.values();
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (const auto* c : children) s += std::norm(c->values()[i]);
    values[i] = std::sqrt(s);
  }
  return out;
}

double streamed_norm_qc(const LatticeField& f, const SpaceTimeGrid& grid, double q,
                        const SliceFn& tap) {
  std::vector<double> weighted(grid.nt());
  propagate_fft_stream(f, grid, [&](std::int64_t i, std::span<const cplx> slice) {
    std::vector<double> scratch;
    weighted[i] = grid.time_weight(i) * slice_power_mean(slice, q, scratch);
    if (tap) tap(i, slice);
  });
  return std::pow(pairwise_sum(weighted), 1.0 / q);
}

QuotientResult strichartz_quotient(const LatticeField& f, const SpaceTimeGrid& grid) {
  QuotientResult r;
  r.l2 = f.l2_norm();
  if (r.l2 == 0.0) fail_config("strichartz_quotient: zero field");
  r.norm_qc = streamed_norm_qc(f, grid, grid.params().q_c());
  r.quotient = r.norm_qc / r.l2;
  return r;
}

RichardsonCertificate certify_time_quadrature(const LatticeField& f,
                                              const SpaceTimeGrid& grid, double q,
                                              double tol) {
  RichardsonCertificate cert;
  cert.norm = streamed_norm_qc(f, grid, q);
  cert.refined_norm = streamed_norm_qc(f, grid.refined_time(), q);
  cert.drift = std::fabs(cert.refined_norm - cert.norm) /
               std::max(cert.refined_norm, 1e-300);
  cert.ok = cert.drift < tol;
  return cert;
}

}  // namespace slab
