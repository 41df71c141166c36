#include "lattice.hpp"

#include <algorithm>
#include <cmath>

namespace slab {

bool FrequencyCube::owns(std::span<const std::int64_t> k) const {
  for (int a = 0; a < dim; ++a) {
    const std::int64_t v = k[a];
    if (v < lo(a)) return false;
    if (v > hi(a)) return false;
    if (v == hi(a) && hi(a) != lambda) return false;  // half-open except top face
  }
  return true;
}

bool FrequencyCube::contains_closed(std::span<const double> xi) const {
  for (int a = 0; a < dim; ++a) {
    if (xi[a] < static_cast<double>(lo(a)) || xi[a] > static_cast<double>(hi(a)))
      return false;
  }
  return true;
}

std::int64_t FrequencyCube::chebyshev_center_distance(const FrequencyCube& other) const {
  std::int64_t dist = 0;
  for (int a = 0; a < dim; ++a) {
    const std::int64_t gap = std::abs(center[a] - other.center[a]);
    if (gap > dist) dist = gap;
  }
  return dist;
}

double eval_chi_cube(std::span<const double> xi, const FrequencyCube& cube) {
  double v = 1.0;
  for (int a = 0; a < cube.dim; ++a) {
    v *= eval_chi_scaled(xi[a], static_cast<double>(cube.center[a]), cube.half_side());
    if (v == 0.0) return 0.0;
  }
  return v;
}

Ladder Ladder::build(const LabParams& params) {
  if (params.d() > kMaxDim)
    fail_config("Ladder: spatial dimension exceeds kMaxDim");
  if (params.side_at(params.K()) < 2)
    fail_config("Ladder: lambda*delta_K^K < 1 (sub-lattice cubes)");
  Ladder ladder(params);
  const int d = params.d();
  const std::int64_t lambda = params.lambda();
  ladder.levels_.resize(params.K() + 1);
  for (int l = 0; l <= params.K(); ++l) {
    const std::int64_t side = params.side_at(l);
    const std::int64_t per_axis = params.cubes_per_axis(l);
    const std::int64_t count = ipow(per_axis, d);
    auto& cubes = ladder.levels_[l];
    cubes.reserve(count);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      FrequencyCube c;
      c.level = l;
      c.dim = d;
      c.side = side;
      c.lambda = lambda;
      std::int64_t rem = idx;  // row-major: axis 0 slowest
      for (int a = d - 1; a >= 0; --a) {
        const std::int64_t i = rem % per_axis;
        rem /= per_axis;
        c.center[a] = -lambda + i * side + side / 2;
      }
      cubes.push_back(c);
    }
  }
  return ladder;
}

std::span<const FrequencyCube> Ladder::level(int l) const {
  if (l < 0 || l > params_.K()) fail_config("Ladder: level out of range");
  return levels_[l];
}

const FrequencyCube& Ladder::cube(int l, std::int64_t index) const {
  auto lv = level(l);
  if (index < 0 || index >= static_cast<std::int64_t>(lv.size()))
    fail_config("Ladder: cube index out of range");
  return lv[index];
}

std::int64_t Ladder::cube_count(int l) const {
  return static_cast<std::int64_t>(level(l).size());
}

std::int64_t Ladder::owner_index(int l, std::span<const std::int64_t> k) const {
  const std::int64_t side = params_.side_at(l);
  const std::int64_t per_axis = params_.cubes_per_axis(l);
  const std::int64_t lambda = params_.lambda();
  std::int64_t idx = 0;
  for (int a = 0; a < params_.d(); ++a) {
    if (k[a] < -lambda || k[a] > lambda)
      fail_invariant("Ladder: lattice point outside Q_lambda");
    std::int64_t i = (k[a] + lambda) / side;
    if (i == per_axis) i = per_axis - 1;  // closed top face
    idx = idx * per_axis + i;
  }
  return idx;
}

std::vector<std::int64_t> Ladder::children_of(int l, std::int64_t index) const {
  if (l >= params_.K()) fail_config("Ladder: no children below level K");
  (void)cube(l, index);  // range check
  const std::int64_t per_axis = params_.cubes_per_axis(l + 1);
  const std::int64_t ratio = per_axis / params_.cubes_per_axis(l);
  const int d = params_.d();
  // Parent axis indices.
  std::array<std::int64_t, kMaxDim> pi{};
  {
    std::int64_t rem = index;
    const std::int64_t pa = params_.cubes_per_axis(l);
    for (int a = d - 1; a >= 0; --a) {
      pi[a] = rem % pa;
      rem /= pa;
    }
  }
  std::vector<std::int64_t> out;
  out.reserve(ipow(ratio, d));
  std::array<std::int64_t, kMaxDim> ci{};
  const std::int64_t total = ipow(ratio, d);
  for (std::int64_t t = 0; t < total; ++t) {
    std::int64_t rem = t;
    for (int a = d - 1; a >= 0; --a) {
      ci[a] = pi[a] * ratio + rem % ratio;
      rem /= ratio;
    }
    std::int64_t idx = 0;
    for (int a = 0; a < d; ++a) idx = idx * per_axis + ci[a];
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {
inline std::uint64_t pair_key(std::int32_t a, std::int32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}
}  // namespace

bool CubePairSet::separated(std::int32_t a, std::int32_t b) const {
  if (a == b) return false;
  return lookup.count(pair_key(a, b)) != 0;
}

CubePairSet separated_pairs(std::span<const FrequencyCube> cubes) {
  CubePairSet out;
  if (cubes.empty()) return out;
  out.level = cubes[0].level;
  out.threshold = 2 * cubes[0].side;
  const std::int32_t n = static_cast<std::int32_t>(cubes.size());
  for (std::int32_t i = 0; i < n; ++i) {
    for (std::int32_t j = i + 1; j < n; ++j) {
      const std::int64_t dist = cubes[i].chebyshev_center_distance(cubes[j]);
      if (dist >= out.threshold) {
        out.pairs.emplace_back(i, j);
        out.center_distance.push_back(dist);
        out.lookup.insert(pair_key(i, j));
      }
    }
  }
  return out;
}

LatticeField::LatticeField(const LabParams& params, std::vector<Entry> entries)
    : params_(params), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& x, const Entry& y) { return x.k < y.k; });
  const std::int64_t lambda = params_.lambda();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && entries_[i].k == entries_[i - 1].k)
      fail_config("LatticeField: duplicate lattice point");
    for (int a = 0; a < params_.d(); ++a) {
      const std::int64_t v = entries_[i].k[a];
      if (std::abs(v) >= 2 * lambda)
        fail_invariant("LatticeField: support outside supp beta = (-2L, 2L)^d");
      if (std::abs(v) > lambda) core_supported_ = false;
    }
    for (int a = params_.d(); a < kMaxDim; ++a) {
      if (entries_[i].k[a] != 0)
        fail_config("LatticeField: nonzero coordinate beyond dimension d");
    }
  }
}

double LatticeField::l2_norm() const {
  std::vector<double> sq(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) sq[i] = std::norm(entries_[i].a);
  return std::sqrt(pairwise_sum(sq));
}

cplx LatticeField::at(std::span<const std::int64_t> k) const {
  LatticePoint key{};
  for (int a = 0; a < params_.d(); ++a) key[a] = k[a];
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const Entry& e, const LatticePoint& p) { return e.k < p; });
  if (it != entries_.end() && it->k == key) return it->a;
  return cplx{};
}

LatticeField LatticeField::restrict_to(const FrequencyCube& cube) const {
  if (!core_supported_)
    fail_invariant("restrict_to: field support must lie inside Q_lambda");
  if (cube.lambda != params_.lambda() || cube.dim != params_.d() ||
      cube.side != params_.side_at(cube.level))
    fail_config("restrict_to: cube does not belong to this field's ladder");
  std::vector<Entry> kept;
  for (const Entry& e : entries_) {
    if (cube.owns(std::span<const std::int64_t>(e.k.data(), params_.d())))
      kept.push_back(e);
  }
  return LatticeField(params_, std::move(kept));
}

LatticeField LatticeField::scaled(cplx c) const {
  std::vector<Entry> out = entries_;
  for (Entry& e : out) e.a *= c;
  return LatticeField(params_, std::move(out));
}

LatticeField LatticeField::apply_multiplier(
    const std::function<double(std::span<const std::int64_t>)>& m) const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) {
    const double w = m(std::span<const std::int64_t>(e.k.data(), params_.d()));
    if (w != 0.0) out.push_back({e.k, e.a * w});
  }
  return LatticeField(params_, std::move(out));
}

LatticeField LatticeField::modulated(std::span<const std::int64_t> shift) const {
  std::vector<Entry> out = entries_;
  for (Entry& e : out)
    for (int a = 0; a < params_.d(); ++a) e.k[a] += shift[a];
  return LatticeField(params_, std::move(out));
}

}  // namespace slab
