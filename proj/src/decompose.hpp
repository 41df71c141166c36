#pragma once

#include "grid.hpp"
#include "lattice.hpp"
#include "norms.hpp"

namespace slab {

// Height splitting of S_lambda f_{tau_{l-1}}: the high set collects samples
// with |u| >= C0 (lambda delta^{-1} dK^{2(l-1)})^{(n-1)/4} (ties go high).
struct HeightSplit {
  int level = 0;
  double c0 = 1.0;
  double threshold = 0.0;
  RegionMask high;
  RegionMask low;
  double high_volume = 0.0;  // quadrature measure of the high set
};

double height_threshold(const LabParams& params, int level, double c0);
HeightSplit height_split(const SpaceTimeField& u, int level, double c0);

enum class PointClass : std::uint8_t { narrow = 0, broad = 1 };

// Pointwise broad/narrow certificate with pinned constants
//   C1 = 5^{n-1} + 1,  C2 = 1,  exponent 3(n-1)/2.
struct PointDecision {
  PointClass cls = PointClass::narrow;
  std::int32_t tau_star = -1;
  std::int32_t big_count = 0;
  double bound = 0.0;   // certified dominating bound for |sum of children|
  double slack = 0.0;   // bound - |sum|, must be >= 0
};

double narrow_constant(int n);  // C1
inline constexpr double kBroadConstant = 1.0;  // C2

PointDecision classify_point(std::span<const cplx> child_values,
                             const CubePairSet& pairs, const LabParams& params);

// Per grid point classification over the children of one parent cube.
struct BroadNarrowReport {
  std::vector<std::uint8_t> cls;        // PointClass per grid point
  std::vector<std::int32_t> tau_star;   // maximizing cube per point
  std::vector<std::int32_t> big_count;  // big-set size per point
  std::vector<double> slack;            // certificate slack per point
  std::int64_t narrow_points = 0;
  std::int64_t broad_points = 0;
  std::int64_t violations = 0;  // points with slack < 0
  double min_slack = 0.0;
};

BroadNarrowReport broad_narrow_scan(std::span<const SpaceTimeField* const> children,
                                    const CubePairSet& pairs, const LabParams& params);

// Pointwise l^2 / l^q upgrade of the broad-narrow bound:
//   |sum u_tau| <= C1 (sum |u_tau|^2)^{1/2}
//                + C2 dK^{-3(n-1)/2} (sum_{sep pairs} |u_tau u_tau'|^{q/2})^{1/q}
// with q = 2(n+2)/n. The domination is checked at every sample.
struct UpgradeResult {
  SpaceTimeField l2_term;
  SpaceTimeField bilinear_term;
  double q = 0.0;
  std::int64_t violations = 0;
  double min_slack = 0.0;
};

double upgrade_exponent(int n);  // 2(n+2)/n
UpgradeResult upgrade_to_norms(std::span<const SpaceTimeField* const> children,
                               const CubePairSet& pairs, const LabParams& params);

// Pointwise |u v|^{1/2} on a shared grid.
SpaceTimeField bilinear_field(const SpaceTimeField& u, const SpaceTimeField& v);

// Measured bilinear constant for one separated pair:
//   ||  |S f S f'|^{1/2} ||_q / (||f||_2 ||f'||_2)^{1/2}
// maximized over an ensemble supported on the pair.
struct PairProbe {
  double max_ratio = 0.0;
  std::vector<double> ratios;
  double scale_d = 0.0;  // dK^level of the pair's cubes
};

PairProbe bilinear_constant_probe(const FrequencyCube& a, const FrequencyCube& b,
                                  std::span<const LatticeField> ensemble,
                                  const SpaceTimeGrid& grid);

// Sweeps the probe over cube scales D = dK^l and fits log(max ratio) against
// log D; the predicted exponent is (n-1)/2 - (n+1)/q.
struct BilinearScalingFit {
  std::vector<int> levels;
  std::vector<double> scales;
  std::vector<double> ratios;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double predicted_exponent = 0.0;
};

BilinearScalingFit bilinear_probe_scaling(const LabParams& params,
                                          const SpaceTimeGrid& grid,
                                          int fields_per_level, std::uint64_t seed);

}  // namespace slab
