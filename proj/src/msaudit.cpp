#include "msaudit.hpp"

#include <cmath>

#include "norms.hpp"

namespace slab {

std::vector<LevelAuditRow> multiscale_audit(const LatticeField& f,
                                            const SpaceTimeGrid& grid) {
  if (!f.core_supported())
    fail_config("multiscale_audit: field support must lie inside Q_lambda");
  const LabParams& p = f.params();
  const Ladder ladder = Ladder::build(p);
  const double q = p.q_c();
  const double lambda = static_cast<double>(p.lambda());
  const double lam_qc = std::pow(lambda, 1.0 / q);
  const double broad_factor = std::pow(lambda, (p.n() - 1.0) / (p.n() * q)) *
                              std::pow(p.delta_k(), -1.5 * (p.n() - 1)) *
                              std::pow(p.delta(), -(p.n() + 1.0) / (p.n() * q));
  const bool k_condition =
      std::pow(p.delta_k(), -1.5 * (p.n() - 1)) <= std::pow(lambda, p.epsilon());

  std::vector<LevelAuditRow> rows;
  for (int l = p.K(); l >= 1; --l) {
    // Maximal-energy parent at level l-1 (deterministic tie-break by index).
    const auto parents = ladder.level(l - 1);
    std::int64_t best = 0;
    double best_l2 = -1.0;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(parents.size()); ++i) {
      const double norm = f.restrict_to(parents[i]).l2_norm();
      if (norm > best_l2) {
        best_l2 = norm;
        best = i;
      }
    }
    const LatticeField parent_field = f.restrict_to(parents[best]);
    LevelAuditRow row;
    row.ell = l;
    row.parent_index = best;
    row.parent_l2 = best_l2;
    row.k_condition = k_condition;
    if (best_l2 == 0.0) {
      rows.push_back(row);
      continue;
    }
    row.lhs = streamed_norm_qc(parent_field, grid, q);
    row.parent_term = lam_qc * best_l2;
    row.broad_term = broad_factor * best_l2;
    std::vector<double> child_sq;
    for (std::int64_t c : ladder.children_of(l - 1, best)) {
      const LatticeField child = parent_field.restrict_to(ladder.cube(l, c));
      if (child.support_size() == 0) continue;
      const double norm = streamed_norm_qc(child, grid, q);
      child_sq.push_back(norm * norm);
    }
    row.children_term = std::sqrt(pairwise_sum(child_sq));
    row.ratio_parent = row.lhs / row.parent_term;
    row.ratio_broad = row.lhs / row.broad_term;
    if (row.children_term > 0.0) row.ratio_children = row.lhs / row.children_term;
    row.c_needed = row.lhs / (row.parent_term + row.broad_term + row.children_term);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace slab
