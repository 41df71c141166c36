#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace slab {

// Deterministic field ensembles. Kinds:
//   random-gaussian  i.i.d. complex Gaussians on the lattice points of Q_lambda
//   single-frequency one unit coefficient (default k = (lambda/2, ...))
//   kernel-data      fhat(k) = beta(k/lambda) on its positive support
//   cube-localized   Gaussian coefficients on one ladder cube (default: level K,
//                    middle cube)
//   pair-localized   Gaussian coefficients on a separated cube pair (default:
//                    maximally separated pair at the given level)
// Field i is drawn from a stream seeded by (seed, i), so ensembles are
// bitwise-reproducible and independent of generation order.
struct EnsembleSpec {
  std::string kind = "random-gaussian";
  int count = 1;
  std::uint64_t seed = 0;
  std::optional<std::vector<std::int64_t>> frequency;  // single-frequency
  int level = -1;                                      // cube/pair kinds; -1 -> K
  std::int64_t cube_index = -1;                         // -1 -> middle cube
  std::int64_t pair_index = -1;                         // -1 -> max separation
};

std::vector<LatticeField> generate_ensemble(const EnsembleSpec& spec,
                                            const LabParams& params);

// fhat = 1 on the owned points of both cubes (bilinear extremizer candidate).
LatticeField pair_constant_field(const LabParams& params, const FrequencyCube& a,
                                 const FrequencyCube& b);

// Standard complex Gaussian (re, im ~ N(0, 1/2)) from a splitmix64 stream.
cplx gaussian_cplx(std::uint64_t& state);

}  // namespace slab
