#pragma once

#include "decompose.hpp"
#include "grid.hpp"
#include "lattice.hpp"

namespace slab {

// Empirical multiscale ledger: for l = K down to 1, both sides of the
// per-scale inequality
//   ||S f_{tau_{l-1}}||_{q_c} <= C1 lambda^{1/q_c} ||f_{tau_{l-1}}||_2
//     + C_eps lambda^{(n-1)/(n q_c)} dK^{-3(n-1)/2} delta^{-(n+1)/(n q_c)}
//       ||f_{tau_{l-1}}||_2
//     + C2 (sum_{tau_l in tau_{l-1}} ||S f_{tau_l}||_{q_c}^2)^{1/2},
// with tau_{l-1} the maximal-energy parent at that level.
struct LevelAuditRow {
  int ell = 0;
  std::int64_t parent_index = 0;
  double parent_l2 = 0.0;
  double lhs = 0.0;            // ||S f_{tau_{l-1}}||_{q_c}
  double parent_term = 0.0;    // lambda^{1/q_c} ||f_{tau_{l-1}}||_2
  double broad_term = 0.0;
  double children_term = 0.0;  // l^2 aggregate of child norms
  double ratio_parent = 0.0;   // lhs / parent_term
  double ratio_broad = 0.0;
  double ratio_children = 0.0;
  // Smallest uniform multiplier c with lhs <= c * (sum of the three terms).
  double c_needed = 0.0;
  // dK^{-3(n-1)/2} <= lambda^epsilon, i.e. K is deep enough for this epsilon.
  bool k_condition = false;
};

std::vector<LevelAuditRow> multiscale_audit(const LatticeField& f,
                                            const SpaceTimeGrid& grid);

}  // namespace slab
