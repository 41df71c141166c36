#include "kernels.hpp"

#include <algorithm>
#include <cmath>

#include "norms.hpp"
#include "propagate.hpp"
#include "quadrature.hpp"

namespace slab {

KernelSpec make_kernel_spec(const LabParams& params) { return {params, std::nullopt}; }

KernelSpec make_kernel_spec(const LabParams& params, int level,
                            std::int64_t cube_index) {
  const Ladder ladder = Ladder::build(params);
  return {params, ladder.cube(level, cube_index)};
}

KernelEvaluator::KernelEvaluator(const KernelSpec& spec) : spec_(spec) {
  const LabParams& p = spec_.params;
  if (spec_.cutoff) {
    const FrequencyCube& c = *spec_.cutoff;
    if (c.side != p.side_at(c.level))
      fail_config("KernelEvaluator: cutoff side inconsistent with its level");
  }
  reach_ = 2 * p.lambda();
  const BumpProfile& phi = phi_profile();
  const double lambda = static_cast<double>(p.lambda());
  axis_weights_.resize(p.d());
  for (int a = 0; a < p.d(); ++a) {
    auto& w = axis_weights_[a];
    w.resize(2 * reach_ + 1);
    for (std::int64_t j = -reach_; j <= reach_; ++j) {
      const double ph = phi(static_cast<double>(j) / lambda);
      double v = ph * ph;
      if (spec_.cutoff) {
        const double ch = eval_chi_scaled(static_cast<double>(j),
                                          static_cast<double>(spec_.cutoff->center[a]),
                                          spec_.cutoff->half_side());
        v *= ch * ch;
      }
      w[j + reach_] = v;
    }
  }
}

cplx KernelEvaluator::axis_sum(int axis, double dz, double dt) const {
  const double inv_lambda = 1.0 / static_cast<double>(spec_.params.lambda());
  const auto& w = axis_weights_[axis];
  std::vector<cplx> terms;
  terms.reserve(w.size());
  for (std::int64_t j = -reach_; j <= reach_; ++j) {
    const double weight = w[j + reach_];
    if (weight == 0.0) continue;
    const double jd = static_cast<double>(j);
    const double phase = inv_lambda * dt * jd * jd + dz * jd;
    terms.push_back(weight * std::polar(1.0, phase));
  }
  return pairwise_sum(terms);
}

cplx KernelEvaluator::eval_stripped(std::span<const double> dx, double dt) const {
  cplx v = 1.0;
  for (int a = 0; a < spec_.params.d(); ++a) v *= axis_sum(a, dx[a], dt);
  return v;
}

cplx KernelEvaluator::eval(std::span<const double> x, double t,
                           std::span<const double> y, double s) const {
  const double delta = spec_.params.delta();
  std::vector<double> dx(spec_.params.d());
  for (int a = 0; a < spec_.params.d(); ++a) dx[a] = x[a] - y[a];
  const double eta = eta_profile()(delta * t) * eta_profile()(delta * s);
  return eta * eval_stripped(dx, t - s);
}

cplx kernel_lattice(const KernelSpec& spec, std::span<const double> x, double t,
                    std::span<const double> y, double s) {
  return KernelEvaluator(spec).eval(x, t, y, s);
}

double kernel_envelope(const KernelSpec& spec, double dt) {
  if (!(dt > 0.0)) fail_config("kernel_envelope: need dt > 0");
  const LabParams& p = spec.params;
  const double dkm = std::pow(p.delta_k(), spec.cutoff_level());
  const double one_d = std::sqrt(static_cast<double>(p.lambda()) / dt) * (1.0 + dkm * dt);
  return std::pow(one_d, p.d());
}

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[8] = {0.0950125098376374, 0.2816035507792589,
                            0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {0.1894506104550685, 0.1826034150449236,
                            0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

struct Integrand {
  double lambda;
  double inv_lambda;
  double dt, dz;
  bool has_cut = false;
  double cut_center = 0.0, cut_half = 0.0;

  cplx operator()(double xi) const {
    const double ph = phi_profile()(xi / lambda);
    double w = ph * ph;
    if (w == 0.0) return {};
    if (has_cut) {
      const double ch = eval_chi_scaled(xi, cut_center, cut_half);
      w *= ch * ch;
      if (w == 0.0) return {};
    }
    const double phase = inv_lambda * dt * xi * xi + dz * xi;
    return w * std::polar(1.0, phase);
  }
};

cplx panel_quadrature(const Integrand& f, double lo, double hi, std::int64_t panels) {
  std::vector<cplx> sums(panels);
  const double width = (hi - lo) / static_cast<double>(panels);
  for (std::int64_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    const double half = 0.5 * width;
    cplx acc{};
    for (int i = 0; i < 8; ++i) {
      acc += kGlW[i] * (f(mid - half * kGlX[i]) + f(mid + half * kGlX[i]));
    }
    sums[p] = acc * half;
  }
  return pairwise_sum(sums);
}

ContinuumKernel continuum_adaptive(const Integrand& f, double lo, double hi,
                                   double base_width, double tol) {
  ContinuumKernel out;
  std::int64_t panels = std::max<std::int64_t>(
      4, static_cast<std::int64_t>(std::ceil((hi - lo) / base_width)));
  cplx prev = panel_quadrature(f, lo, hi, panels);
  const std::int64_t panel_cap = 1 << 22;
  while (true) {
    panels *= 2;
    const cplx next = panel_quadrature(f, lo, hi, panels);
    out.abs_error = std::abs(next - prev);
    prev = next;
    if (out.abs_error <= tol) {
      out.converged = true;
      break;
    }
    if (panels > panel_cap) break;
  }
  out.value = prev / kTwoPi;
  out.panels = panels;
  if (!out.converged)
    fail_invariant("kernel_continuum_1d: oscillatory quadrature did not converge");
  return out;
}

ContinuumKernel continuum_kernel(const LabParams& p, double dz, double dt,
                                 double tol, bool has_cut, double cut_center,
                                 double cut_half) {
  if (dt == 0.0) fail_config("kernel_continuum_1d: need dt != 0");
  const double lambda = static_cast<double>(p.lambda());
  Integrand f{lambda, 1.0 / lambda, dt, dz, has_cut, cut_center, cut_half};
  double lo = -2.0 * lambda, hi = 2.0 * lambda;
  if (has_cut) {
    lo = std::max(lo, cut_center - 2.0 * cut_half);
    hi = std::min(hi, cut_center + 2.0 * cut_half);
  }
  if (!(lo < hi)) {
    ContinuumKernel trivial;
    trivial.converged = true;
    return trivial;
  }
  const double base_width =
      kPi * lambda / (2.0 * lambda * std::fabs(dt) + std::fabs(dz) + 1.0);
  return continuum_adaptive(f, lo, hi, base_width, tol);
}

}  // namespace

ContinuumKernel kernel_continuum_1d(const KernelSpec& spec, double dz, double dt,
                                    double tol) {
  return continuum_kernel(spec.params, dz, dt, tol, false, 0.0, 0.0);
}

PoissonReport poisson_compare(const KernelSpec& spec, std::span<const double> x,
                              double t, std::span<const double> y, double s, int M) {
  const LabParams& p = spec.params;
  const double dt = t - s;
  if (std::fabs(dt) < 1.0)
    fail_config("poisson_compare: requires |t-s| >= 1");
  const KernelEvaluator eval(spec);
  const double dkm = std::pow(p.delta_k(), spec.cutoff_level());

  PoissonReport rep;
  rep.predicted_count = std::max(1.0, (4.0 / kPi) * dkm * std::fabs(dt));
  cplx lattice = 1.0, periodized = 1.0;
  rep.converged = true;
  for (int a = 0; a < p.d(); ++a) {
    const double dz = x[a] - y[a];
    // Every non-negligible periodization term has its stationary point inside
    // the multiplier support: |dz - 2 pi m| <= 4 |dt| + margin.
    const int m_required = static_cast<int>(
        std::ceil((std::fabs(dz) + 4.0 * std::fabs(dt) + kTwoPi) / kTwoPi));
    rep.m_required = std::max(rep.m_required, m_required);
    if (M < m_required)
      fail_config("poisson_compare: periodization count M below the tail bound");

    lattice *= eval.axis_sum(a, dz, dt);

    std::vector<cplx> terms(2 * M + 1);
    for (int m = -M; m <= M; ++m) {
      ContinuumKernel k;
      if (spec.cutoff) {
        k = continuum_kernel(p, dz - kTwoPi * m, dt, 1e-10, true,
                             static_cast<double>(spec.cutoff->center[a]),
                             spec.cutoff->half_side());
      } else {
        k = continuum_kernel(p, dz - kTwoPi * m, dt, 1e-10, false, 0.0, 0.0);
      }
      rep.converged = rep.converged && k.converged;
      terms[m + M] = kTwoPi * k.value;
    }
    double max_term = 0.0;
    for (const cplx& v : terms) max_term = std::max(max_term, std::abs(v));
    std::int64_t count = 0;
    for (const cplx& v : terms)
      if (std::abs(v) > 1e-6 * max_term) ++count;
    rep.nonnegligible.push_back(count);
    periodized *= pairwise_sum(terms);
  }
  rep.lattice = lattice;
  rep.periodized = periodized;
  rep.abs_error = std::abs(lattice - periodized);
  rep.rel_error = rep.abs_error / std::max(std::abs(lattice), 1e-300);
  return rep;
}

TruncatedSplit truncated_split_apply(const KernelSpec& spec, const SpaceTimeField& g) {
  const SpaceTimeGrid& grid = g.grid();
  if (!(grid.params() == spec.params))
    fail_config("truncated_split_apply: grid/spec parameter mismatch");
  const int d = grid.d();
  const std::int64_t nt = grid.nt();
  const std::int64_t nx = grid.nx();
  const std::int64_t sp = grid.spatial_size();
  const double work = static_cast<double>(nt) * nt * sp * sp;
  if (work > 1e9)
    fail_config("truncated_split_apply: grid too large for dense application");

  const KernelEvaluator eval(spec);
  // Axis factor tables over time offsets r = 0..nt-1 and circular spatial
  // offsets q = 0..nx-1; negative time offsets conjugate.
  std::vector<std::vector<cplx>> table(d);
  for (int a = 0; a < d; ++a) {
    table[a].resize(nt * nx);
    parallel_for(nt, [&](std::int64_t r) {
      const double dt = grid.dt() * static_cast<double>(r);
      for (std::int64_t q = 0; q < nx; ++q)
        table[a][r * nx + q] = eval.axis_sum(a, grid.x_of(q), dt);
    });
  }
  std::vector<double> eta(nt);
  for (std::int64_t i = 0; i < nt; ++i)
    eta[i] = eta_profile()(spec.params.delta() * grid.t(i));

  // Per-axis index digits of each flat spatial point.
  std::vector<std::vector<std::int64_t>> digits(d, std::vector<std::int64_t>(sp));
  {
    std::vector<std::int64_t> idx(d);
    for (std::int64_t f = 0; f < sp; ++f) {
      grid.unflatten(f, idx);
      for (int a = 0; a < d; ++a) digits[a][f] = idx[a];
    }
  }

  TruncatedSplit split{SpaceTimeField(grid), SpaceTimeField(grid)};
  auto near_values = split.near_part.values();
  auto far_values = split.far_part.values();
  const double inv_sp = 1.0 / static_cast<double>(sp);
  parallel_for(nt, [&](std::int64_t tj) {
    for (std::int64_t xi = 0; xi < sp; ++xi) {
      cplx near_acc{}, far_acc{};
      for (std::int64_t sl = 0; sl < nt; ++sl) {
        const std::int64_t r = tj >= sl ? tj - sl : sl - tj;
        const bool is_near = grid.dt() * static_cast<double>(r) <= 1.0;
        const double w = grid.time_weight(sl) * eta[tj] * eta[sl] * inv_sp;
        cplx acc{};
        for (std::int64_t yk = 0; yk < sp; ++yk) {
          cplx kv = 1.0;
          for (int a = 0; a < d; ++a) {
            std::int64_t q = digits[a][xi] - digits[a][yk];
            if (q < 0) q += nx;
            kv *= table[a][r * nx + q];
          }
          if (tj < sl) kv = std::conj(kv);
          acc += kv * g.values()[sl * sp + yk];
        }
        if (is_near)
          near_acc += w * acc;
        else
          far_acc += w * acc;
      }
      near_values[tj * sp + xi] = near_acc;
      far_values[tj * sp + xi] = far_acc;
    }
  });
  return split;
}

double kernel_far_sup(const KernelSpec& spec, double dt_lo, double dt_hi,
                      int dt_samples, int dx_samples, std::uint64_t seed) {
  if (!(dt_lo > 0.0 && dt_hi > dt_lo)) fail_config("kernel_far_sup: bad dt range");
  const KernelEvaluator eval(spec);
  const int d = spec.params.d();
  std::uint64_t state = mix_seed(seed, 0x6b65726e);
  double sup = 0.0;
  std::vector<double> dx(d, 0.0);
  for (int i = 0; i < dt_samples; ++i) {
    // Log-spaced dt sweep plus jitter to avoid grid artifacts.
    const double frac = (static_cast<double>(i) + u01(state)) / dt_samples;
    const double dt = dt_lo * std::pow(dt_hi / dt_lo, frac);
    for (int j = 0; j < dx_samples; ++j) {
      for (int a = 0; a < d; ++a) dx[a] = j == 0 ? 0.0 : kTwoPi * u01(state);
      sup = std::max(sup, std::abs(eval.eval_stripped(dx, dt)));
    }
  }
  return sup;
}

TtStarResult tt_star_quotient(const KernelSpec& spec,
                              std::span<const LatticeField> ensemble,
                              const SpaceTimeGrid& grid) {
  if (ensemble.empty()) fail_config("tt_star_quotient: empty ensemble");
  if (!spec.cutoff || spec.cutoff->level != spec.params.K())
    fail_config("tt_star_quotient: requires a level-K cutoff cube");
  const FrequencyCube cube = *spec.cutoff;
  TtStarResult res;
  for (const LatticeField& f : ensemble) {
    const double l2 = f.l2_norm();
    if (l2 == 0.0) fail_config("tt_star_quotient: zero field in ensemble");
    // chi_Q(D) as a Fourier multiplier; identity for cube-supported data but
    // applied regardless.
    const LatticeField cut = f.apply_multiplier(
        [&](std::span<const std::int64_t> k) {
          double v = 1.0;
          for (int a = 0; a < cube.dim; ++a)
            v *= eval_chi_scaled(static_cast<double>(k[a]),
                                 static_cast<double>(cube.center[a]),
                                 cube.half_side());
          return v;
        });
    const double norm_qc = streamed_norm_qc(cut, grid, spec.params.q_c());
    res.quotients.push_back(norm_qc / l2);
    res.max_quotient = std::max(res.max_quotient, norm_qc / l2);
  }
  res.ratio_to_scale =
      res.max_quotient /
      std::pow(static_cast<double>(spec.params.lambda()), 1.0 / spec.params.q_c());
  return res;
}

}  // namespace slab
