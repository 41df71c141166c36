#pragma once

#include <optional>

#include "grid.hpp"
#include "lattice.hpp"

namespace slab {

// Kernel of S_lambda chi_Q(D) (S_lambda chi_Q(D))^*: with the normalized-
// measure convention,
//   K(x,t;y,s) = eta(dt t) eta(dt s) prod_a sum_j chi_I^2(j) phi^2(j/lambda)
//                e^{i (lambda^{-1}(t-s) j^2 + (x_a-y_a) j)}.
// No cutoff means chi == 1 (the plain TT* kernel).
struct KernelSpec {
  LabParams params;
  std::optional<FrequencyCube> cutoff;

  int cutoff_level() const { return cutoff ? cutoff->level : 0; }
};

KernelSpec make_kernel_spec(const LabParams& params);
KernelSpec make_kernel_spec(const LabParams& params, int level, std::int64_t cube_index);

// Caches the per-axis multiplier weights chi_I^2(j) phi^2(j/lambda); one axis
// sum costs O(lambda) exponentials.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const KernelSpec& spec);

  const KernelSpec& spec() const { return spec_; }
  // One-dimensional factor sum_j w_a(j) e^{i(lambda^{-1} dt j^2 + dz j)}.
  cplx axis_sum(int axis, double dz, double dt) const;
  // Full kernel including the eta factors.
  cplx eval(std::span<const double> x, double t, std::span<const double> y,
            double s) const;
  // Product kernel without the eta prefactor, as a function of (x-y, t-s).
  cplx eval_stripped(std::span<const double> dx, double dt) const;

 private:
  KernelSpec spec_;
  std::int64_t reach_ = 0;                       // weights cover |j| <= reach
  std::vector<std::vector<double>> axis_weights_;  // [axis][j + reach]
};

cplx kernel_lattice(const KernelSpec& spec, std::span<const double> x, double t,
                    std::span<const double> y, double s);

// Closed-form envelope lambda^{d/2} dt^{-d/2} (1 + dK^m dt)^d with m = 0 for
// the uncut kernel.
double kernel_envelope(const KernelSpec& spec, double dt);

struct ContinuumKernel {
  cplx value{};
  double abs_error = 0.0;  // panel-doubling certificate
  std::int64_t panels = 0;
  bool converged = false;
};

// (1/2pi) int phi^2(xi/lambda) e^{i (lambda^{-1} dt xi^2 + dz xi)} dxi via
// adaptive Gauss-Legendre panels. Non-convergence is reported, never silently
// accepted.
ContinuumKernel kernel_continuum_1d(const KernelSpec& spec, double dz, double dt,
                                    double tol = 1e-8);

struct PoissonReport {
  cplx lattice{};
  cplx periodized{};
  double abs_error = 0.0;
  double rel_error = 0.0;
  int m_required = 0;
  std::vector<std::int64_t> nonnegligible;  // per axis
  double predicted_count = 0.0;             // (4/pi) dK^m |dt| per axis, >= 1
  bool converged = false;
};

// Compares the eta-stripped lattice kernel against the 2pi-periodized
// continuum kernel (2pi sum_m K~(dz - 2pi m, dt) per axis, cutoff included in
// the integrand when present). Requires |t-s| >= 1 and M large enough to cover
// the stationary-phase window.
PoissonReport poisson_compare(const KernelSpec& spec, std::span<const double> x,
                              double t, std::span<const double> y, double s, int M);

// Applies the kernel operator split at |t-s| <= 1 (near) / > 1 (far) with the
// grid quadrature measure. Dense evaluation; intended for coarse grids.
struct TruncatedSplit {
  SpaceTimeField near_part;
  SpaceTimeField far_part;
};
TruncatedSplit truncated_split_apply(const KernelSpec& spec, const SpaceTimeField& g);

// Sup of the eta-stripped kernel over sampled (dx, dt) with dt in [dt_lo, dt_hi].
double kernel_far_sup(const KernelSpec& spec, double dt_lo, double dt_hi,
                      int dt_samples, int dx_samples, std::uint64_t seed);

struct TtStarResult {
  std::vector<double> quotients;
  double max_quotient = 0.0;
  double ratio_to_scale = 0.0;  // max quotient / lambda^{1/q_c}
};

// ||S_lambda chi_Q(D) f||_{q_c} / ||f||_2 over an ensemble supported in one
// level-K cube.
TtStarResult tt_star_quotient(const KernelSpec& spec,
                              std::span<const LatticeField> ensemble,
                              const SpaceTimeGrid& grid);

}  // namespace slab
