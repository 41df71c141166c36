#pragma once

#include <cmath>
#include <span>

#include "common.hpp"

namespace slab {

// |z|^q via |z|^2; even integer q uses exact integer powers.
inline double pow_abs_q(cplx z, double q) {
  const double m2 = std::norm(z);
  if (q == 2.0) return m2;
  const double half = 0.5 * q;
  if (half == std::floor(half) && half >= 1.0 && half <= 64.0) {
    double r = 1.0;
    double base = m2;
    long e = static_cast<long>(half);
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }
  if (q == 1.0) return std::sqrt(m2);
  return std::pow(m2, half);
}

// (1/N) * sum |u|^q over one slice, fixed-tree pairwise.
inline double slice_power_mean(std::span<const cplx> slice, double q,
                               std::vector<double>& scratch) {
  scratch.resize(slice.size());
  for (std::size_t i = 0; i < slice.size(); ++i) scratch[i] = pow_abs_q(slice[i], q);
  return pairwise_sum(scratch) / static_cast<double>(slice.size());
}

inline double slice_power_mean(std::span<const cplx> slice, double q) {
  std::vector<double> scratch;
  return slice_power_mean(slice, q, scratch);
}

inline double slice_lq(std::span<const cplx> slice, double q) {
  return std::pow(slice_power_mean(slice, q), 1.0 / q);
}

}  // namespace slab
