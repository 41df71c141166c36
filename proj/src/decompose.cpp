#include "decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ensemble.hpp"
#include "quadrature.hpp"

namespace slab {

double height_threshold(const LabParams& params, int level, double c0) {
  if (level < 1 || level > params.K())
    fail_config("height_threshold: level must be in [1, K]");
  const double base = static_cast<double>(params.lambda()) * params.delta_inv() *
                      std::pow(params.delta_k(), 2.0 * (level - 1));
  return c0 * std::pow(base, 0.25 * (params.n() - 1));
}

HeightSplit height_split(const SpaceTimeField& u, int level, double c0) {
  const SpaceTimeGrid& g = u.grid();
  HeightSplit split{level, c0, height_threshold(g.params(), level, c0),
                    RegionMask(g), RegionMask(g), 0.0};
  const auto values = u.values();
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const bool hi = std::abs(values[i]) >= split.threshold;
    split.high.set(i, hi);
    split.low.set(i, !hi);
  }
  split.high_volume = split.high.weighted_volume();
  return split;
}

double narrow_constant(int n) { return std::pow(5.0, n - 1) + 1.0; }

PointDecision classify_point(std::span<const cplx> child_values,
                             const CubePairSet& pairs, const LabParams& params) {
  const int count = static_cast<int>(child_values.size());
  PointDecision out;
  double max_abs = -1.0;
  for (int i = 0; i < count; ++i) {
    const double m = std::abs(child_values[i]);
    if (m > max_abs) {
      max_abs = m;
      out.tau_star = i;
    }
  }
  const double big_cut = std::pow(params.delta_k(), params.n() - 1) * max_abs;
  bool broad = false;
  for (int i = 0; i < count; ++i) {
    if (std::abs(child_values[i]) >= big_cut) {
      ++out.big_count;
      if (pairs.separated(out.tau_star, i)) broad = true;
    }
  }
  cplx sum{};
  for (int i = 0; i < count; ++i) sum += child_values[i];
  const double total = std::abs(sum);

  if (broad) {
    out.cls = PointClass::broad;
    double max_pair = 0.0;
    for (std::size_t p = 0; p < pairs.pairs.size(); ++p) {
      const auto [i, j] = pairs.pairs[p];
      const double prod = std::abs(child_values[i]) * std::abs(child_values[j]);
      if (prod > max_pair) max_pair = prod;
    }
    const double factor = std::pow(params.delta_k(), -1.5 * (params.n() - 1));
    out.bound = kBroadConstant * factor * std::sqrt(max_pair);
  } else {
    out.cls = PointClass::narrow;
    out.bound = narrow_constant(params.n()) * max_abs;
  }
  out.slack = out.bound - total;
  return out;
}

BroadNarrowReport broad_narrow_scan(std::span<const SpaceTimeField* const> children,
                                    const CubePairSet& pairs,
                                    const LabParams& params) {
  if (children.empty()) fail_config("broad_narrow_scan: no children");
  const SpaceTimeGrid& g = children[0]->grid();
  for (const auto* c : children)
    if (!c->grid().same_shape(g)) fail_config("broad_narrow_scan: grid mismatch");
  const std::int64_t total = g.size();
  BroadNarrowReport rep;
  rep.cls.resize(total);
  rep.tau_star.resize(total);
  rep.big_count.resize(total);
  rep.slack.resize(total);
  rep.min_slack = std::numeric_limits<double>::infinity();
  std::vector<cplx> vals(children.size());
  for (std::int64_t i = 0; i < total; ++i) {
    for (std::size_t c = 0; c < children.size(); ++c)
      vals[c] = children[c]->values()[i];
    const PointDecision dec = classify_point(vals, pairs, params);
    rep.cls[i] = static_cast<std::uint8_t>(dec.cls);
    rep.tau_star[i] = dec.tau_star;
    rep.big_count[i] = dec.big_count;
    rep.slack[i] = dec.slack;
    if (dec.cls == PointClass::broad)
      ++rep.broad_points;
    else
      ++rep.narrow_points;
    if (dec.slack < 0.0) ++rep.violations;
    rep.min_slack = std::min(rep.min_slack, dec.slack);
  }
  return rep;
}

double upgrade_exponent(int n) { return 2.0 * (n + 2) / n; }

UpgradeResult upgrade_to_norms(std::span<const SpaceTimeField* const> children,
                               const CubePairSet& pairs, const LabParams& params) {
  if (children.empty()) fail_config("upgrade_to_norms: no children");
  const SpaceTimeGrid& g = children[0]->grid();
  for (const auto* c : children)
    if (!c->grid().same_shape(g)) fail_config("upgrade_to_norms: grid mismatch");
  const double q = upgrade_exponent(params.n());
  UpgradeResult res{SpaceTimeField(g), SpaceTimeField(g), q, 0,
                    std::numeric_limits<double>::infinity()};
  const double c1 = narrow_constant(params.n());
  const double factor = std::pow(params.delta_k(), -1.5 * (params.n() - 1));
  auto l2v = res.l2_term.values();
  auto blv = res.bilinear_term.values();
  for (std::int64_t i = 0; i < g.size(); ++i) {
    cplx sum{};
    double sumsq = 0.0;
    for (const auto* c : children) {
      const cplx v = c->values()[i];
      sum += v;
      sumsq += std::norm(v);
    }
    double lq = 0.0;
    for (std::size_t p = 0; p < pairs.pairs.size(); ++p) {
      const auto [a, b] = pairs.pairs[p];
      const double prod =
          std::abs(children[a]->values()[i]) * std::abs(children[b]->values()[i]);
      lq += std::pow(prod, 0.5 * q);
    }
    const double l2_term = std::sqrt(sumsq);
    const double bl_term = lq > 0.0 ? std::pow(lq, 1.0 / q) : 0.0;
    l2v[i] = l2_term;
    blv[i] = bl_term;
    const double slack =
        c1 * l2_term + kBroadConstant * factor * bl_term - std::abs(sum);
    if (slack < 0.0) ++res.violations;
    res.min_slack = std::min(res.min_slack, slack);
  }
  return res;
}

SpaceTimeField bilinear_field(const SpaceTimeField& u, const SpaceTimeField& v) {
  if (!u.grid().same_shape(v.grid())) fail_config("bilinear_field: grid mismatch");
  SpaceTimeField out(u.grid());
  auto o = out.values();
  const auto a = u.values();
  const auto b = v.values();
  for (std::int64_t i = 0; i < u.grid().size(); ++i)
    o[i] = std::sqrt(std::abs(a[i]) * std::abs(b[i]));
  return out;
}

PairProbe bilinear_constant_probe(const FrequencyCube& a, const FrequencyCube& b,
                                  std::span<const LatticeField> ensemble,
                                  const SpaceTimeGrid& grid) {
  if (ensemble.empty()) fail_config("bilinear_constant_probe: empty ensemble");
  PairProbe probe;
  probe.scale_d =
      static_cast<double>(a.side) / (2.0 * static_cast<double>(a.lambda));
  const double q = upgrade_exponent(grid.params().n());
  for (const LatticeField& f : ensemble) {
    const LatticeField fa = f.restrict_to(a);
    const LatticeField fb = f.restrict_to(b);
    const double na = fa.l2_norm();
    const double nb = fb.l2_norm();
    if (na == 0.0 || nb == 0.0)
      fail_config("bilinear_constant_probe: field vanishes on one cube");
    const SpaceTimeField ua = propagate_fft(fa, grid);
    const SpaceTimeField ub = propagate_fft(fb, grid);
    const double num = spacetime_norm(bilinear_field(ua, ub), q);
    const double ratio = num / std::sqrt(na * nb);
    probe.ratios.push_back(ratio);
    probe.max_ratio = std::max(probe.max_ratio, ratio);
  }
  return probe;
}

BilinearScalingFit bilinear_probe_scaling(const LabParams& params,
                                          const SpaceTimeGrid& grid,
                                          int fields_per_level, std::uint64_t seed) {
  const Ladder ladder = Ladder::build(params);
  BilinearScalingFit fit;
  fit.predicted_exponent =
      0.5 * (params.n() - 1) - (params.n() + 1) / upgrade_exponent(params.n());
  for (int l = 1; l <= params.K(); ++l) {
    const auto cubes = ladder.level(l);
    const CubePairSet pairs = separated_pairs(cubes);
    if (pairs.pairs.empty()) continue;
    // Deterministic pair choice: maximal center distance, lexicographic ties.
    std::size_t best = 0;
    for (std::size_t p = 1; p < pairs.pairs.size(); ++p)
      if (pairs.center_distance[p] > pairs.center_distance[best]) best = p;
    const FrequencyCube& a = cubes[pairs.pairs[best].first];
    const FrequencyCube& b = cubes[pairs.pairs[best].second];

    EnsembleSpec spec;
    spec.kind = "pair-localized";
    spec.count = fields_per_level;
    spec.seed = mix_seed(seed, static_cast<std::uint64_t>(l));
    spec.level = l;
    spec.pair_index = static_cast<std::int64_t>(best);
    std::vector<LatticeField> ensemble = generate_ensemble(spec, params);
    // Constant-coefficient data on the pair extremizes constructive
    // interference; include it alongside the random draws.
    ensemble.push_back(pair_constant_field(params, a, b));

    const PairProbe probe = bilinear_constant_probe(a, b, ensemble, grid);
    fit.levels.push_back(l);
    fit.scales.push_back(std::pow(params.delta_k(), l));
    fit.ratios.push_back(probe.max_ratio);
  }
  const std::size_t m = fit.ratios.size();
  if (m < 2)
    fail_config("bilinear_probe_scaling: need at least two levels with pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(fit.scales[i]);
    const double y = std::log(fit.ratios[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::log(fit.ratios[i]) -
                     (fit.intercept + fit.slope * std::log(fit.scales[i]));
    ss += r * r;
  }
  if (m > 2) {
    const double mean_x = sx / m;
    double sxx_c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dx = std::log(fit.scales[i]) - mean_x;
      sxx_c += dx * dx;
    }
    fit.stderr_slope = std::sqrt(ss / (m - 2) / sxx_c);
  }
  return fit;
}

}  // namespace slab
