#include "verify.hpp"

#include <cmath>
#include <sstream>

#include "decompose.hpp"
#include "ensemble.hpp"
#include "fitting.hpp"
#include "kernels.hpp"
#include "msaudit.hpp"
#include "norms.hpp"
#include "quadrature.hpp"
#include "records.hpp"

namespace slab {

namespace {

struct Harness {
  std::vector<CheckResult> results;
  std::uint64_t seed;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r{name, false, ""};
    try {
      r.detail = body();  // returns "" on success, else a failure description
      r.pass = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

std::string expect(bool ok, const std::string& msg) { return ok ? "" : msg; }

LatticeField random_field(const LabParams& p, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.kind = "random-gaussian";
  spec.count = 1;
  spec.seed = seed;
  return generate_ensemble(spec, p)[0];
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed) {
  Harness h;
  h.seed = seed;

  h.run("profile-contract", [&] {
    const auto& phi = phi_profile();
    const auto& eta = eta_profile();
    const auto& chi = chi_profile();
    if (phi(0.5) != 1.0 || phi(2.1) != 0.0) return std::string("phi plateau/support");
    if (phi(1.5) != 0.5) return std::string("phi midpoint ramp");
    if (eta(0.5) != 1.0 || eta(0.999) <= 0.0 || eta(1.0) != 0.0)
      return std::string("eta plateau/support");
    if (chi(-1.0) != 1.0 || chi(1.5) != 0.5) return std::string("chi profile");
    for (double x = 0.0; x <= 2.5; x += 0.1)
      if (phi(x) != phi(-x)) return std::string("phi evenness");
    return std::string();
  });

  h.run("ladder-exact-cover", [&] {
    for (int n : {2, 3}) {
      const LabParams p(n, n == 2 ? 16 : 8, 1, n == 2 ? 3 : 2);
      const Ladder ladder = Ladder::build(p);
      const std::int64_t per_axis = 2 * p.lambda() + 1;
      const std::int64_t total = ipow(per_axis, p.d());
      for (int l = 0; l <= p.K(); ++l) {
        std::vector<std::int64_t> owner_count(ladder.cube_count(l), 0);
        for (std::int64_t flat = 0; flat < total; ++flat) {
          LatticePoint k{};
          std::int64_t rem = flat;
          for (int a = p.d() - 1; a >= 0; --a) {
            k[a] = rem % per_axis - p.lambda();
            rem /= per_axis;
          }
          std::int64_t owners = 0;
          std::int64_t owner = -1;
          for (std::int64_t c = 0; c < ladder.cube_count(l); ++c) {
            if (ladder.cube(l, c).owns(std::span<const std::int64_t>(k.data(), p.d()))) {
              ++owners;
              owner = c;
            }
          }
          if (owners != 1) return std::string("point not covered exactly once");
          if (owner != ladder.owner_index(l, std::span<const std::int64_t>(k.data(), p.d())))
            return std::string("owner_index mismatch");
          ++owner_count[owner];
        }
      }
    }
    return std::string();
  });

  h.run("ladder-counts", [&] {
    const LabParams p(2, 8, 1, 3);
    const Ladder ladder = Ladder::build(p);
    for (int l = 0; l <= 3; ++l) {
      const auto expected = ipow(2, l);
      if (ladder.cube_count(l) != expected) return std::string("level count");
      if (ladder.cube(l, 0).side != (16 >> l)) return std::string("side length");
    }
    for (int l = 0; l < 3; ++l)
      for (std::int64_t c = 0; c < ladder.cube_count(l); ++c)
        if (static_cast<std::int64_t>(ladder.children_of(l, c).size()) != 2)
          return std::string("child count");
    return std::string();
  });

  h.run("pythagoras", [&] {
    for (int n : {2, 3}) {
      const LabParams p(n, 16, 1, n == 2 ? 4 : 2);
      const Ladder ladder = Ladder::build(p);
      const LatticeField f = random_field(p, mix_seed(h.seed, 11 + n));
      const double total = f.l2_norm();
      for (int l = 0; l <= p.K(); ++l) {
        std::vector<double> parts;
        for (const auto& cube : ladder.level(l)) {
          const double norm = f.restrict_to(cube).l2_norm();
          parts.push_back(norm * norm);
        }
        const double sum = pairwise_sum(parts);
        if (std::fabs(sum - total * total) > 1e-12 * total * total)
          return std::string("orthogonality failure at level ") + std::to_string(l);
      }
    }
    return std::string();
  });

  h.run("pair-symmetry", [&] {
    const LabParams p(3, 16, 1, 2);
    const Ladder ladder = Ladder::build(p);
    const auto pairs = separated_pairs(ladder.level(2));
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
      const auto [a, b] = pairs.pairs[i];
      if (a == b) return std::string("self pair");
      if (!pairs.separated(a, b) || !pairs.separated(b, a))
        return std::string("asymmetric lookup");
    }
    return std::string();
  });

  h.run("multiplier-idempotence", [&] {
    const LabParams p(2, 16, 1, 2);
    const Ladder ladder = Ladder::build(p);
    const FrequencyCube cube = ladder.cube(2, 1);
    EnsembleSpec spec;
    spec.kind = "cube-localized";
    spec.level = 2;
    spec.cube_index = 1;
    spec.seed = mix_seed(h.seed, 21);
    const LatticeField f = generate_ensemble(spec, p)[0];
    const LatticeField g = f.apply_multiplier([&](std::span<const std::int64_t> k) {
      std::vector<double> xi(p.d());
      for (int a = 0; a < p.d(); ++a) xi[a] = static_cast<double>(k[a]);
      return eval_chi_cube(xi, cube);
    });
    if (g.support_size() != f.support_size()) return std::string("support changed");
    for (std::size_t i = 0; i < f.entries().size(); ++i)
      if (f.entries()[i].a != g.entries()[i].a)
        return std::string("coefficient changed");
    return std::string();
  });

  h.run("beta-transparency", [&] {
    const LabParams p(2, 16, 1, 1);
    const LatticeField f = random_field(p, mix_seed(h.seed, 22));
    const LatticeField g = f.apply_multiplier([&](std::span<const std::int64_t> k) {
      std::vector<double> xi(p.d());
      for (int a = 0; a < p.d(); ++a) xi[a] = static_cast<double>(k[a]);
      return eval_beta(xi, static_cast<double>(p.lambda()));
    });
    for (std::size_t i = 0; i < f.entries().size(); ++i)
      if (f.entries()[i].a != g.entries()[i].a) return std::string("beta not identity");
    return std::string();
  });

  h.run("fft-vs-direct", [&] {
    const LabParams p(2, 16, 1, 1);
    const SpaceTimeGrid grid = SpaceTimeGrid::make(p);
    const LatticeField f = random_field(p, mix_seed(h.seed, 31));
    const SpaceTimeField a = propagate_fft(f, grid);
    const SpaceTimeField b = propagate_direct(f, grid);
    double sup = 0.0, scale = 0.0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      sup = std::max(sup, std::abs(a.values()[i] - b.values()[i]));
      scale = std::max(scale, std::abs(b.values()[i]));
    }
    return expect(sup <= 1e-10 * scale, "sup deviation " + format_double(sup / scale));
  });

  h.run("parseval-slices", [&] {
    const LabParams p(2, 16, 1, 1);
    const SpaceTimeGrid grid = SpaceTimeGrid::make(p);
    const LatticeField f = random_field(p, mix_seed(h.seed, 32));
    const SpaceTimeField u = propagate_fft(f, grid);
    const double l2 = f.l2_norm();
    for (std::int64_t t = 0; t < grid.nt(); ++t) {
      const double expected = eta_profile()(p.delta() * grid.t(t)) * l2;
      if (std::fabs(slice_l2(u, t) - expected) > 1e-12 * l2)
        return std::string("slice conservation failed");
    }
    return std::string();
  });

  h.run("quadrature-exactness", [&] {
    // integral over T of |e^{ix} + 1|^4 under normalized measure equals 6.
    const std::int64_t nx = 16;
    std::vector<cplx> slice(nx);
    for (std::int64_t j = 0; j < nx; ++j)
      slice[j] = std::polar(1.0, kTwoPi * j / static_cast<double>(nx)) + 1.0;
    std::vector<double> scratch;
    const double mean = slice_power_mean(slice, 4.0, scratch);
    return expect(std::fabs(mean - 6.0) < 1e-13, "got " + format_double(mean));
  });

  h.run("height-split-partition", [&] {
    const LabParams p(2, 16, 1, 2);
    const SpaceTimeGrid grid = SpaceTimeGrid::make(p);
    const LatticeField f = random_field(p, mix_seed(h.seed, 41));
    const SpaceTimeField u = propagate_fft(f, grid);
    const HeightSplit split = height_split(u, 1, 1.0);
    for (std::int64_t i = 0; i < grid.size(); ++i)
      if (split.high.test(i) == split.low.test(i))
        return std::string("masks do not partition");
    const double q = p.q_c();
    const double full = spacetime_norm(u, q);
    const double hi = spacetime_norm(u, q, &split.high);
    const double lo = spacetime_norm(u, q, &split.low);
    const double lhs = std::pow(full, q);
    const double rhs = std::pow(hi, q) + std::pow(lo, q);
    return expect(std::fabs(lhs - rhs) <= 1e-10 * lhs, "norm split mismatch");
  });

  h.run("broad-narrow-certificates", [&] {
    const LabParams p(2, 16, 2, 1);  // 4 children at level 1
    const SpaceTimeGrid grid = SpaceTimeGrid::make(p);
    const Ladder ladder = Ladder::build(p);
    const auto cubes = ladder.level(1);
    const CubePairSet pairs = separated_pairs(cubes);
    for (int trial = 0; trial < 3; ++trial) {
      const LatticeField f = random_field(p, mix_seed(h.seed, 51 + trial));
      std::vector<SpaceTimeField> children;
      std::vector<const SpaceTimeField*> ptrs;
      for (const auto& cube : cubes)
        children.push_back(propagate_fft(f.restrict_to(cube), grid));
      for (const auto& c : children) ptrs.push_back(&c);
      const BroadNarrowReport rep = broad_narrow_scan(ptrs, pairs, p);
      if (rep.violations != 0) return std::string("pointwise certificate violated");
      const UpgradeResult up = upgrade_to_norms(ptrs, pairs, p);
      if (up.violations != 0) return std::string("l2/lq domination violated");
    }
    return std::string();
  });

  h.run("kernel-factorization", [&] {
    const LabParams p(3, 8, 1, 1);
    const KernelSpec spec = make_kernel_spec(p);
    const KernelEvaluator eval(spec);
    std::uint64_t state = mix_seed(h.seed, 61);
    for (int trial = 0; trial < 8; ++trial) {
      const double dx0 = kTwoPi * u01(state);
      const double dx1 = kTwoPi * u01(state);
      const double dt = 0.25 + 3.0 * u01(state);
      const std::vector<double> dx{dx0, dx1};
      const cplx prod = eval.axis_sum(0, dx0, dt) * eval.axis_sum(1, dx1, dt);
      const cplx full = eval.eval_stripped(dx, dt);
      if (std::abs(prod - full) > 1e-12 * std::abs(full) + 1e-14)
        return std::string("factorization mismatch");
    }
    return std::string();
  });

  h.run("kernel-hermitian", [&] {
    const LabParams p(2, 8, 1, 1);
    const KernelSpec spec = make_kernel_spec(p);
    std::uint64_t state = mix_seed(h.seed, 62);
    for (int trial = 0; trial < 16; ++trial) {
      const double x = kTwoPi * u01(state);
      const double y = kTwoPi * u01(state);
      const double t = p.delta_inv() * u01(state);
      const double s = p.delta_inv() * u01(state);
      const cplx a = kernel_lattice(spec, std::vector<double>{x}, t,
                                    std::vector<double>{y}, s);
      const cplx b = kernel_lattice(spec, std::vector<double>{y}, s,
                                    std::vector<double>{x}, t);
      if (std::abs(a - std::conj(b)) > 1e-10 * std::max(1.0, std::abs(a)))
        return std::string("kernel not Hermitian");
    }
    return std::string();
  });

  h.run("poisson-consistency", [&] {
    const LabParams p(2, 64, 1, 3);
    const KernelSpec spec = make_kernel_spec(p);
    const std::vector<double> x{1.0}, y{0.25};
    const PoissonReport rep = poisson_compare(spec, x, 2.0, y, 0.0, 6);
    return expect(rep.converged && rep.rel_error <= 1e-6,
                  "rel error " + format_double(rep.rel_error));
  });

  h.run("near-far-split", [&] {
    const LabParams p(2, 16, 1, 1);
    const SpaceTimeGrid grid = SpaceTimeGrid::make(p, 2.0, 80, 17);
    const KernelSpec spec = make_kernel_spec(p, 1, 1);
    // Source supported on a single time slice: the near output must vanish
    // for |t - s0| > 1 and the far output for |t - s0| <= 1.
    SpaceTimeField g(grid);
    const std::int64_t s0 = grid.nt() / 2;
    std::uint64_t state = mix_seed(h.seed, 71);
    for (cplx& v : g.slice(s0)) v = gaussian_cplx(state);
    const TruncatedSplit split = truncated_split_apply(spec, g);
    for (std::int64_t t = 0; t < grid.nt(); ++t) {
      const bool is_near = std::fabs(grid.t(t) - grid.t(s0)) <= 1.0;
      for (const cplx& v : split.near_part.slice(t))
        if (!is_near && std::abs(v) != 0.0) return std::string("near leaks far");
      for (const cplx& v : split.far_part.slice(t))
        if (is_near && std::abs(v) != 0.0) return std::string("far leaks near");
    }
    return std::string();
  });

  h.run("ensemble-determinism", [&] {
    const LabParams p(2, 16, 1, 1);
    EnsembleSpec spec;
    spec.kind = "random-gaussian";
    spec.count = 2;
    spec.seed = mix_seed(h.seed, 81);
    const auto a = generate_ensemble(spec, p);
    const auto b = generate_ensemble(spec, p);
    for (int i = 0; i < 2; ++i) {
      if (a[i].support_size() != b[i].support_size()) return std::string("size");
      for (std::size_t j = 0; j < a[i].entries().size(); ++j)
        if (a[i].entries()[j].a != b[i].entries()[j].a)
          return std::string("ensemble not bitwise reproducible");
    }
    return std::string();
  });

  h.run("fit-recovery", [&] {
    std::vector<QuotientRecord> recs;
    for (std::int64_t lam : {64, 128, 256, 512}) {
      QuotientRecord r;
      r.lambda = lam;
      r.quotient = std::pow(static_cast<double>(lam), 1.0 / 6.0);
      recs.push_back(r);
    }
    const FitResult fit = fit_scaling(recs, "lambda");
    return expect(std::fabs(fit.slope - 1.0 / 6.0) < 1e-12,
                  "slope " + format_double(fit.slope));
  });

  return h.results;
}

}  // namespace slab
