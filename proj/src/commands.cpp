#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "decompose.hpp"
#include "fitting.hpp"
#include "kernels.hpp"
#include "msaudit.hpp"
#include "norms.hpp"
#include "sweep.hpp"
#include "verify.hpp"

namespace slab {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return text.empty() ? json::object() : json::parse(text);
  } catch (const json::exception& e) {
    fail_config(std::string("config is not valid JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail_io("write to '" + path + "' failed");
}

void deliver(const json& cfg, const std::string& text, std::ostream& fallback) {
  const std::string path = cfg.value("out", std::string());
  if (path.empty())
    fallback << text;
  else
    write_text(path, text);
}

SpaceTimeGrid grid_from_json(const json& cfg, const LabParams& params) {
  return SpaceTimeGrid::make(params, cfg.value("oversample", 2.0),
                             cfg.value("nx", std::int64_t{0}),
                             cfg.value("nt", std::int64_t{0}));
}

// propagate: a single-cell sweep (one params bundle, listed ensembles).
void cmd_propagate(const json& cfg, std::ostream& out) {
  const LabParams params = params_from_json(cfg);
  SweepConfig sweep;
  sweep.dims = {params.n()};
  sweep.lambdas = {params.lambda()};
  sweep.delta_rule.kind = DeltaRule::Kind::fixed;
  sweep.delta_rule.m = params.m();
  sweep.K = params.K();
  sweep.epsilon = params.epsilon();
  sweep.c0 = cfg.value("c0", 1.0);
  sweep.split_level = cfg.value("split_level", 1);
  if (cfg.contains("ensemble"))
    sweep.ensembles.push_back(ensemble_from_json(cfg.at("ensemble")));
  for (const auto& e : cfg.value("ensembles", json::array()))
    sweep.ensembles.push_back(ensemble_from_json(e));
  if (sweep.ensembles.empty()) fail_config("propagate: no ensemble given");
  sweep.oversample = cfg.value("oversample", 2.0);
  sweep.seed = cfg.value("seed", 0ULL);
  sweep.format = parse_format(cfg.value("format", std::string("csv")));
  sweep.threads = cfg.value("threads", 1);
  if (cfg.contains("audit")) {
    sweep.audit_fraction = cfg.at("audit").value("fraction", 0.01);
    sweep.audit_cap = cfg.at("audit").value("cap", std::int64_t{8192});
    sweep.audit_tol = cfg.at("audit").value("tol", 1e-10);
  }
  sweep.certify = cfg.value("certify", true);
  sweep.nx_override = cfg.value("nx", std::int64_t{0});
  sweep.nt_override = cfg.value("nt", std::int64_t{0});
  sweep.timing = cfg.value("timing", false);
  const auto records = run_sweep(sweep);
  deliver(cfg, render_records(records, sweep.format), out);
}

void cmd_sweep(const json& cfg, std::ostream& out) {
  SweepConfig sweep = sweep_config_from_json(cfg);
  std::ostringstream log;
  const auto records = run_sweep(sweep, &log);
  if (sweep.out_path.empty())
    out << render_records(records, sweep.format);
  else
    out << log.str();
  if (cfg.value("fit", false)) {
    const FitResult fit = fit_scaling(records, cfg.value("predictor", "lambda"));
    out << "fit: slope=" << format_double(fit.slope)
        << " intercept=" << format_double(fit.intercept)
        << " stderr=" << format_double(fit.stderr_slope) << "\n";
  }
}

// kernel: modes lattice | envelope | continuum | poisson over sampled
// (dz, dt) offsets (first axis carries dz; remaining axes use offset 0).
void cmd_kernel(const json& cfg, std::ostream& out) {
  const LabParams params = params_from_json(cfg);
  KernelSpec spec = make_kernel_spec(params);
  if (cfg.contains("cutoff")) {
    const auto& c = cfg.at("cutoff");
    spec = make_kernel_spec(params, c.value("level", params.K()),
                            c.value("cube_index", std::int64_t{0}));
  }
  const std::string mode = cfg.value("mode", std::string("lattice"));
  std::ostringstream os;
  const int d = params.d();
  std::vector<double> x(d, 0.0), y(d, 0.0);
  if (mode == "poisson") {
    const int M = cfg.value("periodization", 8);
    os << "dz,dt,rel_error,abs_error,nonnegligible,predicted_count\n";
    for (const auto& sample : cfg.at("samples")) {
      const double dz = sample.at(0).get<double>();
      const double dt = sample.at(1).get<double>();
      x[0] = dz;
      const PoissonReport rep = poisson_compare(spec, x, dt, y, 0.0, M);
      os << format_double(dz) << ',' << format_double(dt) << ','
         << format_double(rep.rel_error) << ',' << format_double(rep.abs_error) << ','
         << rep.nonnegligible[0] << ',' << format_double(rep.predicted_count) << '\n';
    }
  } else if (mode == "continuum") {
    os << "dz,dt,re,im,abs_error\n";
    for (const auto& sample : cfg.at("samples")) {
      const double dz = sample.at(0).get<double>();
      const double dt = sample.at(1).get<double>();
      const ContinuumKernel k = kernel_continuum_1d(spec, dz, dt, cfg.value("tol", 1e-8));
      os << format_double(dz) << ',' << format_double(dt) << ','
         << format_double(k.value.real()) << ',' << format_double(k.value.imag())
         << ',' << format_double(k.abs_error) << '\n';
    }
  } else if (mode == "lattice" || mode == "envelope") {
    const KernelEvaluator eval(spec);
    os << "dz,dt,re,im,abs,envelope\n";
    for (const auto& sample : cfg.at("samples")) {
      const double dz = sample.at(0).get<double>();
      const double dt = sample.at(1).get<double>();
      x[0] = dz;
      const cplx v = eval.eval_stripped(x, dt);
      os << format_double(dz) << ',' << format_double(dt) << ','
         << format_double(v.real()) << ',' << format_double(v.imag()) << ','
         << format_double(std::abs(v)) << ','
         << format_double(dt > 0 ? kernel_envelope(spec, dt) : 0.0) << '\n';
    }
  } else {
    fail_config("kernel: unknown mode '" + mode + "'");
  }
  deliver(cfg, os.str(), out);
}

// decompose: height-split volumes and broad/narrow statistics per level.
void cmd_decompose(const json& cfg, std::ostream& out) {
  const LabParams params = params_from_json(cfg);
  const SpaceTimeGrid grid = grid_from_json(cfg, params);
  set_threads(cfg.value("threads", 1));
  EnsembleSpec spec = ensemble_from_json(cfg.value("ensemble", json::object()));
  spec.seed = mix_seed(cfg.value("seed", 0ULL), 0);
  const double c0 = cfg.value("c0", 1.0);
  const auto fields = generate_ensemble(spec, params);
  const Ladder ladder = Ladder::build(params);
  std::ostringstream os;
  os << "n,d,lambda,delta,K,ell,ensemble,field_id,threshold,high_volume,"
        "narrow_points,broad_points,violations,min_slack\n";
  for (std::size_t fid = 0; fid < fields.size(); ++fid) {
    const SpaceTimeField u = propagate_fft(fields[fid], grid);
    for (int l = 1; l <= params.K(); ++l) {
      const HeightSplit split = height_split(u, l, c0);
      const auto cubes = ladder.level(l);
      std::vector<SpaceTimeField> children;
      std::vector<const SpaceTimeField*> ptrs;
      for (const auto& cube : cubes)
        children.push_back(propagate_fft(fields[fid].restrict_to(cube), grid));
      for (const auto& c : children) ptrs.push_back(&c);
      const BroadNarrowReport rep =
          broad_narrow_scan(ptrs, separated_pairs(cubes), params);
      os << params.n() << ',' << params.d() << ',' << params.lambda() << ','
         << format_double(params.delta()) << ',' << params.K() << ',' << l << ','
         << spec.kind << ',' << fid << ',' << format_double(split.threshold) << ','
         << format_double(split.high_volume / grid.t_end()) << ','
         << rep.narrow_points << ',' << rep.broad_points << ',' << rep.violations
         << ',' << format_double(rep.min_slack) << '\n';
    }
  }
  deliver(cfg, os.str(), out);
}

// audit: the multiscale per-level ledger for one field.
void cmd_audit(const json& cfg, std::ostream& out) {
  const LabParams params = params_from_json(cfg);
  const SpaceTimeGrid grid = grid_from_json(cfg, params);
  set_threads(cfg.value("threads", 1));
  EnsembleSpec spec = ensemble_from_json(cfg.value("ensemble", json::object()));
  spec.seed = mix_seed(cfg.value("seed", 0ULL), 0);
  const auto fields = generate_ensemble(spec, params);
  std::ostringstream os;
  os << "n,d,lambda,delta,K,ell,ensemble,field_id,parent_index,lhs,parent_term,"
        "broad_term,children_term,c_needed,k_condition\n";
  for (std::size_t fid = 0; fid < fields.size(); ++fid) {
    for (const LevelAuditRow& row : multiscale_audit(fields[fid], grid)) {
      os << params.n() << ',' << params.d() << ',' << params.lambda() << ','
         << format_double(params.delta()) << ',' << params.K() << ',' << row.ell
         << ',' << spec.kind << ',' << fid << ',' << row.parent_index << ','
         << format_double(row.lhs) << ',' << format_double(row.parent_term) << ','
         << format_double(row.broad_term) << ','
         << format_double(row.children_term) << ',' << format_double(row.c_needed)
         << ',' << (row.k_condition ? 1 : 0) << '\n';
    }
  }
  deliver(cfg, os.str(), out);
}

void cmd_verify(const json& cfg, std::ostream& out) {
  set_threads(cfg.value("threads", 1));
  const auto results = run_verify_suite(cfg.value("seed", 0ULL));
  int failures = 0;
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass) {
      os << ": " << r.detail;
      ++failures;
    }
    os << '\n';
  }
  os << (failures == 0 ? "verify: all checks passed\n"
                       : "verify: " + std::to_string(failures) + " check(s) failed\n");
  deliver(cfg, os.str(), out);
  if (failures > 0) fail_invariant("verify suite reported failures");
}

}  // namespace

void run_command(const std::string& name, const std::string& config_json,
                 std::ostream& out) {
  const json cfg = parse_json(config_json);
  if (name == "propagate") return cmd_propagate(cfg, out);
  if (name == "kernel") return cmd_kernel(cfg, out);
  if (name == "decompose") return cmd_decompose(cfg, out);
  if (name == "sweep") return cmd_sweep(cfg, out);
  if (name == "audit") return cmd_audit(cfg, out);
  if (name == "verify") return cmd_verify(cfg, out);
  fail_config("unknown subcommand '" + name + "'");
}

}  // namespace slab
