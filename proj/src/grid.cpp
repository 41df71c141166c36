#include "grid.hpp"

#include <cmath>

namespace slab {

SpaceTimeGrid::SpaceTimeGrid(const LabParams& p, std::int64_t nx, std::int64_t nt)
    : params_(p), nx_(nx), nt_(nt) {
  if (nx_ < 2) fail_config("SpaceTimeGrid: nx too small");
  if (nt_ < 2) fail_config("SpaceTimeGrid: nt too small");
  spatial_size_ = ipow(nx_, params_.d());
}

std::int64_t SpaceTimeGrid::min_nx(const LabParams& params) {
  return static_cast<std::int64_t>(
             std::ceil(params.q_c() * 2.0 * static_cast<double>(params.lambda()))) +
         1;
}

std::int64_t SpaceTimeGrid::min_nt(const LabParams& params, double oversample) {
  const double base = std::ceil(4.0 * params.d() * static_cast<double>(params.lambda()) *
                                params.delta_inv() / kPi);
  return static_cast<std::int64_t>(std::ceil(base * oversample));
}

SpaceTimeGrid SpaceTimeGrid::make(const LabParams& params, double oversample,
                                  std::int64_t nx_override, std::int64_t nt_override) {
  if (oversample < 2.0) fail_config("SpaceTimeGrid: oversample must be >= 2");
  std::int64_t nx = nx_override > 0 ? nx_override : fft_friendly_size(min_nx(params));
  std::int64_t nt = nt_override > 0 ? nt_override : min_nt(params, oversample);
  const bool qc_even =
      params.q_c() == std::floor(params.q_c()) && (static_cast<int>(params.q_c()) % 2 == 0);
  if (qc_even && nx < min_nx(params))
    fail_config("SpaceTimeGrid: nx below the exact-quadrature bound q_c*2*lambda + 1");
  if (nx <= 4 * params.lambda())
    fail_config("SpaceTimeGrid: nx <= 4*lambda aliases the doubled frequency cube");
  if (nt_override > 0 && nt < 2) fail_config("SpaceTimeGrid: nt too small");
  return SpaceTimeGrid(params, nx, nt);
}

std::int64_t SpaceTimeGrid::spatial_index(std::span<const std::int64_t> idx) const {
  std::int64_t flat = 0;
  for (int a = 0; a < params_.d(); ++a) flat = flat * nx_ + idx[a];
  return flat;
}

void SpaceTimeGrid::unflatten(std::int64_t flat, std::span<std::int64_t> idx) const {
  for (int a = params_.d() - 1; a >= 0; --a) {
    idx[a] = flat % nx_;
    flat /= nx_;
  }
}

SpaceTimeGrid SpaceTimeGrid::refined_time() const {
  return SpaceTimeGrid(params_, nx_, 2 * nt_ - 1);
}

SpaceTimeGrid SpaceTimeGrid::with_nt(std::int64_t nt2) const {
  return SpaceTimeGrid(params_, nx_, nt2);
}

std::int64_t RegionMask::count() const {
  std::int64_t c = 0;
  for (std::uint8_t b : bits_) c += b;
  return c;
}

double RegionMask::weighted_volume() const {
  const std::int64_t sp = grid_.spatial_size();
  std::vector<double> per_slice(grid_.nt());
  for (std::int64_t t = 0; t < grid_.nt(); ++t) {
    std::int64_t on = 0;
    const std::uint8_t* row = bits_.data() + t * sp;
    for (std::int64_t j = 0; j < sp; ++j) on += row[j];
    per_slice[t] =
        grid_.time_weight(t) * static_cast<double>(on) / static_cast<double>(sp);
  }
  return pairwise_sum(per_slice);
}

}  // namespace slab
