#include "ensemble.hpp"

#include <cmath>
#include <functional>

namespace slab {

cplx gaussian_cplx(std::uint64_t& state) {
  const double u1 = u01(state);
  const double u2 = u01(state);
  const double r = std::sqrt(-2.0 * std::log(u1));
  // re, im ~ N(0, 1/2): a standard complex Gaussian.
  return {r * std::cos(kTwoPi * u2) / std::sqrt(2.0),
          r * std::sin(kTwoPi * u2) / std::sqrt(2.0)};
}

namespace {

// All lattice points of Q_lambda in lexicographic order.
void for_each_core_point(const LabParams& p,
                         const std::function<void(const LatticePoint&)>& fn) {
  const std::int64_t lambda = p.lambda();
  const std::int64_t per_axis = 2 * lambda + 1;
  const std::int64_t total = ipow(per_axis, p.d());
  LatticePoint k{};
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    for (int a = p.d() - 1; a >= 0; --a) {
      k[a] = rem % per_axis - lambda;
      rem /= per_axis;
    }
    fn(k);
  }
}

LatticeField gaussian_on_points(const LabParams& p,
                                const std::vector<LatticePoint>& pts,
                                std::uint64_t seed) {
  std::uint64_t state = seed;
  std::vector<LatticeField::Entry> entries;
  entries.reserve(pts.size());
  for (const LatticePoint& k : pts) entries.push_back({k, gaussian_cplx(state)});
  return LatticeField(p, std::move(entries));
}

std::vector<LatticePoint> owned_points(const LabParams& p, const FrequencyCube& cube) {
  std::vector<LatticePoint> pts;
  for_each_core_point(p, [&](const LatticePoint& k) {
    if (cube.owns(std::span<const std::int64_t>(k.data(), p.d()))) pts.push_back(k);
  });
  return pts;
}

}  // namespace

LatticeField pair_constant_field(const LabParams& params, const FrequencyCube& a,
                                 const FrequencyCube& b) {
  std::vector<LatticeField::Entry> entries;
  for (const LatticePoint& k : owned_points(params, a)) entries.push_back({k, 1.0});
  for (const LatticePoint& k : owned_points(params, b)) entries.push_back({k, 1.0});
  return LatticeField(params, std::move(entries));
}

std::vector<LatticeField> generate_ensemble(const EnsembleSpec& spec,
                                            const LabParams& params) {
  if (spec.count < 0) fail_config("generate_ensemble: negative count");
  std::vector<LatticeField> out;
  out.reserve(spec.count);

  if (spec.kind == "random-gaussian") {
    std::vector<LatticePoint> pts;
    for_each_core_point(params, [&](const LatticePoint& k) { pts.push_back(k); });
    for (int i = 0; i < spec.count; ++i)
      out.push_back(gaussian_on_points(params, pts, mix_seed(spec.seed, i)));
    return out;
  }

  if (spec.kind == "single-frequency") {
    LatticePoint k{};
    if (spec.frequency) {
      if (static_cast<int>(spec.frequency->size()) != params.d())
        fail_config("generate_ensemble: frequency dimension mismatch");
      for (int a = 0; a < params.d(); ++a) k[a] = (*spec.frequency)[a];
    } else {
      for (int a = 0; a < params.d(); ++a) k[a] = params.lambda() / 2;
    }
    for (int i = 0; i < spec.count; ++i)
      out.push_back(LatticeField(params, {{k, 1.0}}));
    return out;
  }

  if (spec.kind == "kernel-data") {
    const double lambda = static_cast<double>(params.lambda());
    const std::int64_t reach = 2 * params.lambda() - 1;
    const std::int64_t per_axis = 2 * reach + 1;
    const std::int64_t total = ipow(per_axis, params.d());
    std::vector<LatticeField::Entry> entries;
    std::vector<double> xi(params.d());
    LatticePoint k{};
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rem = flat;
      for (int a = params.d() - 1; a >= 0; --a) {
        k[a] = rem % per_axis - reach;
        rem /= per_axis;
      }
      for (int a = 0; a < params.d(); ++a) xi[a] = static_cast<double>(k[a]);
      const double w = eval_beta(xi, lambda);
      if (w > 0.0) entries.push_back({k, w});
    }
    LatticeField field(params, std::move(entries));
    for (int i = 0; i < spec.count; ++i) out.push_back(field);
    return out;
  }

  if (spec.kind == "cube-localized" || spec.kind == "pair-localized") {
    const Ladder ladder = Ladder::build(params);
    const int level = spec.level >= 0 ? spec.level : params.K();
    if (level < 1 || level > params.K())
      fail_config("generate_ensemble: level out of range");
    const auto cubes = ladder.level(level);

    if (spec.kind == "cube-localized") {
      const std::int64_t index =
          spec.cube_index >= 0 ? spec.cube_index
                               : static_cast<std::int64_t>(cubes.size()) / 2;
      if (index < 0 || index >= static_cast<std::int64_t>(cubes.size()))
        fail_config("generate_ensemble: cube index out of range");
      const auto pts = owned_points(params, cubes[index]);
      for (int i = 0; i < spec.count; ++i)
        out.push_back(gaussian_on_points(params, pts, mix_seed(spec.seed, i)));
      return out;
    }

    const CubePairSet pairs = separated_pairs(cubes);
    if (pairs.pairs.empty())
      fail_config("generate_ensemble: no separated pairs at this level");
    std::size_t index = 0;
    if (spec.pair_index >= 0) {
      if (spec.pair_index >= static_cast<std::int64_t>(pairs.pairs.size()))
        fail_config("generate_ensemble: pair index out of range");
      index = static_cast<std::size_t>(spec.pair_index);
    } else {
      for (std::size_t p = 1; p < pairs.pairs.size(); ++p)
        if (pairs.center_distance[p] > pairs.center_distance[index]) index = p;
    }
    const FrequencyCube& a = cubes[pairs.pairs[index].first];
    const FrequencyCube& b = cubes[pairs.pairs[index].second];
    std::vector<LatticePoint> pts = owned_points(params, a);
    for (const LatticePoint& k : owned_points(params, b)) pts.push_back(k);
    for (int i = 0; i < spec.count; ++i)
      out.push_back(gaussian_on_points(params, pts, mix_seed(spec.seed, i)));
    return out;
  }

  fail_config("generate_ensemble: unknown kind '" + spec.kind + "'");
}

}  // namespace slab
