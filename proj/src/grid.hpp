#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "params.hpp"

namespace slab {

// Uniform tensor grid over T^d x [0, delta^{-1}]:
//   x_j = 2*pi*j / nx per axis (periodic),
//   t_i = i * t_end / (nt - 1) (closed window, trapezoid weights).
// Space carries the normalized Haar measure (total mass 1), so the spatial
// quadrature weight is 1/nx^d per node; that rule integrates |u|^q exactly for
// trigonometric slices whenever the integrand degree stays below nx.
class SpaceTimeGrid {
 public:
  static SpaceTimeGrid make(const LabParams& params, double oversample = 2.0,
                            std::int64_t nx_override = 0,
                            std::int64_t nt_override = 0);

  // q_c * 2*lambda + 1 (power-quadrature exactness for even q_c).
  static std::int64_t min_nx(const LabParams& params);
  // ceil(4 d lambda delta^{-1} / pi) * oversample (resolves the fastest phase).
  static std::int64_t min_nt(const LabParams& params, double oversample);

  const LabParams& params() const { return params_; }
  int d() const { return params_.d(); }
  std::int64_t nx() const { return nx_; }
  std::int64_t nt() const { return nt_; }
  std::int64_t spatial_size() const { return spatial_size_; }
  std::int64_t size() const { return nt_ * spatial_size_; }

  double t_end() const { return params_.delta_inv(); }
  double dt() const { return t_end() / static_cast<double>(nt_ - 1); }
  double t(std::int64_t i) const { return static_cast<double>(i) * dt(); }
  double time_weight(std::int64_t i) const {
    return (i == 0 || i == nt_ - 1) ? 0.5 * dt() : dt();
  }
  double x_of(std::int64_t j) const {
    return kTwoPi * static_cast<double>(j) / static_cast<double>(nx_);
  }

  std::int64_t spatial_index(std::span<const std::int64_t> idx) const;
  void unflatten(std::int64_t flat, std::span<std::int64_t> idx) const;

  // Same spatial grid, refined time axis with nested nodes (nt -> 2nt - 1).
  SpaceTimeGrid refined_time() const;
  SpaceTimeGrid with_nt(std::int64_t nt2) const;

  bool same_shape(const SpaceTimeGrid& o) const {
    return nx_ == o.nx_ && nt_ == o.nt_ && params_ == o.params_;
  }

 private:
  SpaceTimeGrid(const LabParams& p, std::int64_t nx, std::int64_t nt);
  LabParams params_;
  std::int64_t nx_, nt_, spatial_size_;
};

// Complex samples on a SpaceTimeGrid, time-major: values[t * nx^d + flat(x)].
class SpaceTimeField {
 public:
  explicit SpaceTimeField(const SpaceTimeGrid& grid)
      : grid_(grid), values_(grid.size()) {}

  const SpaceTimeGrid& grid() const { return grid_; }
  std::span<cplx> slice(std::int64_t t) {
    return {values_.data() + t * grid_.spatial_size(),
            static_cast<std::size_t>(grid_.spatial_size())};
  }
  std::span<const cplx> slice(std::int64_t t) const {
    return {values_.data() + t * grid_.spatial_size(),
            static_cast<std::size_t>(grid_.spatial_size())};
  }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx at(std::int64_t t, std::span<const std::int64_t> xidx) const {
    return values_[t * grid_.spatial_size() + grid_.spatial_index(xidx)];
  }

 private:
  SpaceTimeGrid grid_;
  std::vector<cplx> values_;
};

// Boolean region over a grid (e.g. the high/low sets of a height split).
class RegionMask {
 public:
  explicit RegionMask(const SpaceTimeGrid& grid, bool initially = false)
      : grid_(grid), bits_(grid.size(), initially ? 1 : 0) {}

  const SpaceTimeGrid& grid() const { return grid_; }
  bool test(std::int64_t flat) const { return bits_[flat] != 0; }
  void set(std::int64_t flat, bool v) { bits_[flat] = v ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::int64_t count() const;
  // Quadrature measure of the region (normalized space x time length).
  double weighted_volume() const;

 private:
  SpaceTimeGrid grid_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace slab
