#pragma once

#include <iosfwd>
#include <optional>

#include "ensemble.hpp"
#include "grid.hpp"
#include "records.hpp"

#include <json.hpp>

namespace slab {

// delta selection per lambda: either a fixed m (delta = 2^{-mK}) or the power
// rule delta = largest admissible 2^{-mK} <= lambda^{-a+eps}.
struct DeltaRule {
  enum class Kind { fixed, power };
  Kind kind = Kind::fixed;
  int m = 1;
  double a = 0.0;
  double eps = 0.0;
};

int delta_rule_m(const DeltaRule& rule, std::int64_t lambda, int K);

struct SweepConfig {
  std::vector<int> dims = {2};
  std::vector<std::int64_t> lambdas;
  DeltaRule delta_rule;
  int K = 1;
  double epsilon = 0.05;
  double c0 = 1.0;
  int split_level = 1;
  std::vector<EnsembleSpec> ensembles;
  double oversample = 2.0;
  std::uint64_t seed = 0;
  std::string out_path;
  RecordFormat format = RecordFormat::csv;
  int threads = 1;
  double audit_fraction = 0.01;
  std::int64_t audit_cap = 8192;
  double audit_tol = 1e-10;
  bool certify = true;
  double certify_tol = 1e-6;
  std::int64_t nx_override = 0;
  std::int64_t nt_override = 0;
  bool timing = false;
};

LabParams params_from_json(const nlohmann::json& j);
EnsembleSpec ensemble_from_json(const nlohmann::json& j);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

// Runs every (n, lambda, ensemble, field) cell in deterministic order: the
// fast path is streamed (never materialized), oracle-audited on a capped
// random subsample, and Richardson-certified once per cell.
std::vector<QuotientRecord> run_sweep(const SweepConfig& config,
                                      std::ostream* log = nullptr);

}  // namespace slab
