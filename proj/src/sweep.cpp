#include "sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "decompose.hpp"
#include "norms.hpp"
#include "propagate.hpp"

namespace slab {

int delta_rule_m(const DeltaRule& rule, std::int64_t lambda, int K) {
  if (rule.kind == DeltaRule::Kind::fixed) return rule.m;
  int log2_lambda = 0;
  for (std::int64_t v = lambda; v > 1; v >>= 1) ++log2_lambda;
  // Largest delta = 2^{-mK} <= lambda^{-a+eps}: smallest m with
  // m*K >= (a - eps) * log2(lambda).
  const double target = (rule.a - rule.eps) * log2_lambda;
  int m = static_cast<int>(std::ceil(target / K - 1e-12));
  if (m < 1) m = 1;
  if (static_cast<std::int64_t>(m) * K > log2_lambda)
    fail_config("delta rule: rounded delta violates lambda*delta >= 1");
  return m;
}

LabParams params_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const std::int64_t lambda = j.at("lambda").get<std::int64_t>();
    const int K = j.value("K", 1);
    const double epsilon = j.value("epsilon", 0.05);
    if (j.contains("m")) return LabParams(n, lambda, j.at("m").get<int>(), K, epsilon);
    if (j.contains("delta"))
      return LabParams::from_delta(n, lambda, j.at("delta").get<double>(), K, epsilon);
    fail_config("params: need either 'm' or 'delta'");
  } catch (const nlohmann::json::exception& e) {
    fail_config(std::string("params: ") + e.what());
  }
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
  EnsembleSpec spec;
  try {
    spec.kind = j.value("kind", std::string("random-gaussian"));
    spec.count = j.value("count", 1);
    spec.seed = j.value("seed", 0ULL);
    if (j.contains("frequency"))
      spec.frequency = j.at("frequency").get<std::vector<std::int64_t>>();
    spec.level = j.value("level", -1);
    spec.cube_index = j.value("cube_index", std::int64_t{-1});
    spec.pair_index = j.value("pair_index", std::int64_t{-1});
  } catch (const nlohmann::json::exception& e) {
    fail_config(std::string("ensemble: ") + e.what());
  }
  return spec;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  try {
    if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<int>>();
    cfg.lambdas = j.at("lambdas").get<std::vector<std::int64_t>>();
    const auto& dr = j.at("delta");
    const std::string rule = dr.value("rule", std::string("fixed"));
    if (rule == "fixed") {
      cfg.delta_rule.kind = DeltaRule::Kind::fixed;
      cfg.delta_rule.m = dr.at("m").get<int>();
    } else if (rule == "power") {
      cfg.delta_rule.kind = DeltaRule::Kind::power;
      cfg.delta_rule.a = dr.at("a").get<double>();
      cfg.delta_rule.eps = dr.value("eps", 0.0);
    } else {
      fail_config("sweep: delta rule must be 'fixed' or 'power'");
    }
    cfg.K = j.value("K", 1);
    cfg.epsilon = j.value("epsilon", 0.05);
    cfg.c0 = j.value("c0", 1.0);
    cfg.split_level = j.value("split_level", 1);
    for (const auto& e : j.value("ensembles", nlohmann::json::array()))
      cfg.ensembles.push_back(ensemble_from_json(e));
    cfg.oversample = j.value("oversample", 2.0);
    cfg.seed = j.value("seed", 0ULL);
    cfg.out_path = j.value("out", std::string());
    cfg.format = parse_format(j.value("format", std::string("csv")));
    cfg.threads = j.value("threads", 1);
    if (j.contains("audit")) {
      const auto& a = j.at("audit");
      cfg.audit_fraction = a.value("fraction", 0.01);
      cfg.audit_cap = a.value("cap", std::int64_t{8192});
      cfg.audit_tol = a.value("tol", 1e-10);
    }
    cfg.certify = j.value("certify", true);
    cfg.certify_tol = j.value("certify_tol", 1e-6);
    cfg.nx_override = j.value("nx", std::int64_t{0});
    cfg.nt_override = j.value("nt", std::int64_t{0});
    cfg.timing = j.value("timing", false);
  } catch (const nlohmann::json::exception& e) {
    fail_config(std::string("sweep config: ") + e.what());
  }
  return cfg;
}

namespace {

// Audit sample: capped fraction of grid points, keyed by slice.
std::unordered_map<std::int64_t, std::vector<std::int64_t>> plan_audit(
    const SpaceTimeGrid& grid, double fraction, std::int64_t cap,
    std::uint64_t seed) {
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> plan;
  const std::int64_t total = grid.size();
  std::int64_t want = static_cast<std::int64_t>(
      std::floor(fraction * static_cast<double>(total)));
  want = std::min(want, cap);
  if (fraction > 0.0 && want < 1) want = 1;
  std::uint64_t state = seed;
  for (std::int64_t i = 0; i < want; ++i) {
    const std::int64_t flat =
        static_cast<std::int64_t>(splitmix64(state) % static_cast<std::uint64_t>(total));
    plan[flat / grid.spatial_size()].push_back(flat % grid.spatial_size());
  }
  return plan;
}

}  // namespace

std::vector<QuotientRecord> run_sweep(const SweepConfig& config, std::ostream* log) {
  set_threads(config.threads);
  std::vector<QuotientRecord> records;
  std::uint64_t cell_counter = 0;
  for (int n : config.dims) {
    for (std::int64_t lambda : config.lambdas) {
      const int m = delta_rule_m(config.delta_rule, lambda, config.K);
      const LabParams params(n, lambda, m, config.K, config.epsilon);
      const SpaceTimeGrid grid = SpaceTimeGrid::make(
          params, config.oversample, config.nx_override, config.nt_override);
      const double threshold =
          config.split_level >= 1 && config.split_level <= params.K()
              ? height_threshold(params, config.split_level, config.c0)
              : std::numeric_limits<double>::infinity();
      if (log)
        (*log) << "cell n=" << n << " lambda=" << lambda
               << " delta=" << format_double(params.delta()) << " nx=" << grid.nx()
               << " nt=" << grid.nt() << "\n";
      bool cell_certified = false;
      const std::uint64_t cell_seed = mix_seed(config.seed, cell_counter++);
      for (std::size_t es = 0; es < config.ensembles.size(); ++es) {
        EnsembleSpec spec = config.ensembles[es];
        spec.seed = mix_seed(cell_seed, es);
        const std::vector<LatticeField> fields = generate_ensemble(spec, params);
        for (std::size_t fid = 0; fid < fields.size(); ++fid) {
          const LatticeField& f = fields[fid];
          const auto start = std::chrono::steady_clock::now();
          if (config.certify && !cell_certified) {
            const auto cert = certify_time_quadrature(f, grid, params.q_c(),
                                                      config.certify_tol);
            if (!cert.ok)
              fail_invariant("run_sweep: time quadrature failed the Richardson "
                             "certificate (drift " +
                             format_double(cert.drift) + ")");
            cell_certified = true;
          }

          const auto audit_plan =
              plan_audit(grid, config.audit_fraction, config.audit_cap,
                         mix_seed(cell_seed, 0xa0d17 + fid));
          // Amplitude scale for audit comparisons: sup|S f| <= sum |fhat beta|.
          double amp = 0.0;
          {
            std::vector<double> mags;
            std::vector<double> xi(params.d());
            for (const auto& e : f.entries()) {
              for (int a = 0; a < params.d(); ++a)
                xi[a] = static_cast<double>(e.k[a]);
              mags.push_back(std::abs(e.a) *
                             eval_beta(xi, static_cast<double>(lambda)));
            }
            amp = pairwise_sum(mags);
          }

          std::vector<double> high_per_slice(grid.nt(), 0.0);
          std::atomic<std::int64_t> audit_failures{0};
          std::atomic<std::int64_t> audit_count{0};
          const SliceFn tap = [&](std::int64_t i, std::span<const cplx> slice) {
            std::int64_t on = 0;
            for (const cplx& v : slice)
              if (std::abs(v) >= threshold) ++on;
            high_per_slice[i] = grid.time_weight(i) * static_cast<double>(on) /
                                static_cast<double>(slice.size());
            const auto it = audit_plan.find(i);
            if (it == audit_plan.end()) return;
            std::vector<double> x(params.d());
            std::vector<std::int64_t> idx(params.d());
            for (std::int64_t flat : it->second) {
              grid.unflatten(flat, idx);
              for (int a = 0; a < params.d(); ++a) x[a] = grid.x_of(idx[a]);
              const cplx direct = propagate_at(f, x, grid.t(i));
              ++audit_count;
              if (std::abs(direct - slice[flat]) > config.audit_tol * std::max(amp, 1.0))
                ++audit_failures;
            }
          };

          const double norm_qc = streamed_norm_qc(f, grid, params.q_c(), tap);
          if (audit_failures.load() > 0)
            fail_invariant("run_sweep: fast path failed the direct-summation "
                           "audit on " +
                           std::to_string(audit_failures.load()) + " of " +
                           std::to_string(audit_count.load()) + " samples");
          const double l2 = f.l2_norm();
          const auto stop = std::chrono::steady_clock::now();

          QuotientRecord rec;
          rec.n = n;
          rec.d = params.d();
          rec.lambda = lambda;
          rec.delta = params.delta();
          rec.K = params.K();
          rec.ell = config.split_level;
          rec.ensemble = spec.kind;
          rec.field_id = static_cast<std::int64_t>(fid);
          rec.quotient = l2 > 0.0 ? norm_qc / l2 : 0.0;
          rec.l2_norm = l2;
          rec.high_volume = pairwise_sum(high_per_slice) / grid.t_end();
          rec.nx = grid.nx();
          rec.nt = grid.nt();
          rec.runtime_ms =
              config.timing
                  ? std::chrono::duration_cast<std::chrono::milliseconds>(stop - start)
                        .count()
                  : 0;
          records.push_back(std::move(rec));
        }
      }
    }
  }
  if (!config.out_path.empty()) emit(records, config.out_path, config.format);
  return records;
}

}  // namespace slab
