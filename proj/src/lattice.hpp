#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_set>
#include <vector>

#include "bumps.hpp"
#include "params.hpp"

namespace slab {

inline constexpr int kMaxDim = 4;

// Lattice point; coordinates beyond the active dimension are zero, so full
// array comparison doubles as lexicographic comparison in d coordinates.
using LatticePoint = std::array<std::int64_t, kMaxDim>;

// Axis-parallel frequency cube at ladder level `level`, side 2*lambda*dK^level.
// Lattice ownership is half-open per axis ([lo, hi)), closed on the global top
// face (coordinate == +lambda), so the cubes of one level partition the
// lattice points of Q_lambda exactly.
struct FrequencyCube {
  int level = 0;
  int dim = 0;
  std::int64_t side = 0;
  std::array<std::int64_t, kMaxDim> center{};  // integer centers under the dyadic ladder
  std::int64_t lambda = 0;

  std::int64_t lo(int axis) const { return center[axis] - side / 2; }
  std::int64_t hi(int axis) const { return center[axis] + side / 2; }
  double half_side() const { return 0.5 * static_cast<double>(side); }

  bool owns(std::span<const std::int64_t> k) const;
  // Geometric membership in the closed cube (for real frequency vectors).
  bool contains_closed(std::span<const double> xi) const;
  std::int64_t chebyshev_center_distance(const FrequencyCube& other) const;
};

// chi_tau(xi) = prod_i chi((xi_i - c_i) / (lambda dK^level)): 1 on the cube,
// supported in the doubled cube.
double eval_chi_cube(std::span<const double> xi, const FrequencyCube& cube);

// All cube partitions, one per level l = 0..K. Level 0 is Q_lambda itself.
class Ladder {
 public:
  static Ladder build(const LabParams& params);

  const LabParams& params() const { return params_; }
  int levels() const { return params_.K(); }
  std::span<const FrequencyCube> level(int l) const;
  const FrequencyCube& cube(int l, std::int64_t index) const;
  std::int64_t cube_count(int l) const;
  // Index of the unique level-l cube owning lattice point k (k must lie in
  // Q_lambda).
  std::int64_t owner_index(int l, std::span<const std::int64_t> k) const;
  // Indices of the level l+1 cubes contained in cube (l, index).
  std::vector<std::int64_t> children_of(int l, std::int64_t index) const;

 private:
  explicit Ladder(const LabParams& p) : params_(p) {}
  LabParams params_;
  std::vector<std::vector<FrequencyCube>> levels_;
};

// Unordered well-separated cube pairs (center Chebyshev distance >= 2*side),
// stored canonically with first < second.
struct CubePairSet {
  int level = 0;
  std::int64_t threshold = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  std::vector<std::int64_t> center_distance;  // parallel to pairs

  bool separated(std::int32_t a, std::int32_t b) const;

  std::unordered_set<std::uint64_t> lookup;  // canonical keys, built by separated_pairs
};

CubePairSet separated_pairs(std::span<const FrequencyCube> cubes);

// Sparse complex Fourier coefficients on the integer lattice. Entries are kept
// sorted lexicographically, so iteration (and every reduction over it) is
// deterministic. Support must lie inside supp beta = (-2 lambda, 2 lambda)^d;
// fields used with the ladder additionally need support inside Q_lambda
// (core_supported()).
class LatticeField {
 public:
  struct Entry {
    LatticePoint k{};
    cplx a{};
  };

  LatticeField(const LabParams& params, std::vector<Entry> entries);

  const LabParams& params() const { return params_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool core_supported() const { return core_supported_; }

  double l2_norm() const;
  cplx at(std::span<const std::int64_t> k) const;

  // Coefficients on the cube's owned lattice points, zero elsewhere. Requires
  // core support and a cube from this field's ladder geometry.
  LatticeField restrict_to(const FrequencyCube& cube) const;

  LatticeField scaled(cplx c) const;
  // Pointwise Fourier multiplier m(k); exact zeros are dropped.
  LatticeField apply_multiplier(
      const std::function<double(std::span<const std::int64_t>)>& m) const;
  // Frequency modulation k -> k + shift (translates |S f| in space).
  LatticeField modulated(std::span<const std::int64_t> shift) const;

 private:
  LabParams params_;
  std::vector<Entry> entries_;
  bool core_supported_ = true;
};

}  // namespace slab
