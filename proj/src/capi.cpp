#include "slab.h"

#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "decompose.hpp"
#include "ensemble.hpp"
#include "fitting.hpp"
#include "kernels.hpp"
#include "norms.hpp"
#include "sweep.hpp"

using namespace slab;

struct slab_params {
  LabParams value;
};
struct slab_field {
  LatticeField value;
};
struct slab_grid {
  SpaceTimeGrid value;
};
struct slab_spacetime {
  SpaceTimeField value;
};

namespace {

thread_local std::string g_last_error;

slab_status to_status(const Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case ErrorCode::invariant:
      return SLAB_ERR_INVARIANT;
    case ErrorCode::config:
      return SLAB_ERR_CONFIG;
    case ErrorCode::io:
      return SLAB_ERR_IO;
  }
  return SLAB_ERR_INVARIANT;
}

template <class Fn>
slab_status guarded(Fn&& fn) {
  try {
    fn();
    return SLAB_OK;
  } catch (const Error& e) {
    return to_status(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SLAB_ERR_INVARIANT;
  }
}

slab_status require(bool cond, const char* msg) {
  if (cond) return SLAB_OK;
  g_last_error = msg;
  return SLAB_ERR_CONFIG;
}

FrequencyCube cube_of(const LabParams& p, int level, std::int64_t index) {
  return Ladder::build(p).cube(level, index);
}

}  // namespace

extern "C" {

const char* slab_version(void) { return "1.0.0"; }

const char* slab_last_error(void) { return g_last_error.c_str(); }

void slab_set_threads(int k) { set_threads(k); }

slab_status slab_params_create(int n, int64_t lambda, int m, int K, double epsilon,
                               slab_params** out) {
  if (auto s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] { *out = new slab_params{LabParams(n, lambda, m, K, epsilon)}; });
}

void slab_params_free(slab_params* p) { delete p; }

int slab_params_n(const slab_params* p) { return p->value.n(); }
int slab_params_d(const slab_params* p) { return p->value.d(); }
int64_t slab_params_lambda(const slab_params* p) { return p->value.lambda(); }
int slab_params_levels(const slab_params* p) { return p->value.K(); }
double slab_params_delta(const slab_params* p) { return p->value.delta(); }
double slab_params_delta_k(const slab_params* p) { return p->value.delta_k(); }
double slab_params_qc(const slab_params* p) { return p->value.q_c(); }

double slab_bump_eval(slab_bump_kind kind, double x) {
  switch (kind) {
    case SLAB_BUMP_PHI:
      return phi_profile()(x);
    case SLAB_BUMP_ETA:
      return eta_profile()(x);
    case SLAB_BUMP_CHI:
      return chi_profile()(x);
  }
  return 0.0;
}

double slab_beta_eval(const double* xi, int d, double lambda) {
  return eval_beta(std::span<const double>(xi, d), lambda);
}

slab_status slab_chi_cube_eval(const slab_params* p, int level, int64_t cube,
                               const double* xi, double* out) {
  if (auto s = require(p && xi && out, "NULL argument")) return s;
  return guarded([&] {
    const FrequencyCube c = cube_of(p->value, level, cube);
    *out = eval_chi_cube(std::span<const double>(xi, p->value.d()), c);
  });
}

slab_status slab_ladder_cube_count(const slab_params* p, int level, int64_t* out) {
  if (auto s = require(p && out, "NULL argument")) return s;
  return guarded([&] { *out = Ladder::build(p->value).cube_count(level); });
}

slab_status slab_ladder_cube_geometry(const slab_params* p, int level, int64_t cube,
                                      int64_t* center, int64_t* side) {
  if (auto s = require(p && center && side, "NULL argument")) return s;
  return guarded([&] {
    const FrequencyCube c = cube_of(p->value, level, cube);
    for (int a = 0; a < p->value.d(); ++a) center[a] = c.center[a];
    *side = c.side;
  });
}

slab_status slab_ladder_owner_of(const slab_params* p, int level,
                                 const int64_t* point, int64_t* cube_out) {
  if (auto s = require(p && point && cube_out, "NULL argument")) return s;
  return guarded([&] {
    *cube_out = Ladder::build(p->value).owner_index(
        level, std::span<const std::int64_t>(point, p->value.d()));
  });
}

slab_status slab_separated_pair_count(const slab_params* p, int level, int64_t* out) {
  if (auto s = require(p && out, "NULL argument")) return s;
  return guarded([&] {
    const Ladder ladder = Ladder::build(p->value);
    *out = static_cast<int64_t>(separated_pairs(ladder.level(level)).pairs.size());
  });
}

slab_status slab_field_create(const slab_params* p, int64_t npoints,
                              const int64_t* points, const double* re,
                              const double* im, slab_field** out) {
  if (auto s = require(p && out && (npoints == 0 || (points && re && im)),
                       "NULL argument"))
    return s;
  return guarded([&] {
    std::vector<LatticeField::Entry> entries(npoints);
    for (int64_t i = 0; i < npoints; ++i) {
      for (int a = 0; a < p->value.d(); ++a)
        entries[i].k[a] = points[i * p->value.d() + a];
      entries[i].a = cplx(re[i], im[i]);
    }
    *out = new slab_field{LatticeField(p->value, std::move(entries))};
  });
}

slab_status slab_field_ensemble(const slab_params* p, const char* spec_json,
                                uint64_t seed, slab_field*** out_fields,
                                int64_t* out_count) {
  if (auto s = require(p && spec_json && out_fields && out_count, "NULL argument"))
    return s;
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::exception& e) {
      fail_config(std::string("ensemble spec is not valid JSON: ") + e.what());
    }
    EnsembleSpec spec = ensemble_from_json(j);
    spec.seed = seed;
    auto fields = generate_ensemble(spec, p->value);
    auto** arr = new slab_field*[fields.size()];
    for (std::size_t i = 0; i < fields.size(); ++i)
      arr[i] = new slab_field{std::move(fields[i])};
    *out_fields = arr;
    *out_count = static_cast<int64_t>(fields.size());
  });
}

void slab_field_free(slab_field* f) { delete f; }

void slab_field_list_free(slab_field** fields, int64_t count) {
  if (!fields) return;
  for (int64_t i = 0; i < count; ++i) delete fields[i];
  delete[] fields;
}

int64_t slab_field_support_size(const slab_field* f) {
  return static_cast<int64_t>(f->value.support_size());
}

double slab_field_l2(const slab_field* f) { return f->value.l2_norm(); }

slab_status slab_field_restrict(const slab_field* f, int level, int64_t cube,
                                slab_field** out) {
  if (auto s = require(f && out, "NULL argument")) return s;
  return guarded([&] {
    const FrequencyCube c = cube_of(f->value.params(), level, cube);
    *out = new slab_field{f->value.restrict_to(c)};
  });
}

slab_status slab_grid_create(const slab_params* p, double oversample,
                             int64_t nx_override, int64_t nt_override,
                             slab_grid** out) {
  if (auto s = require(p && out, "NULL argument")) return s;
  return guarded([&] {
    *out = new slab_grid{
        SpaceTimeGrid::make(p->value, oversample, nx_override, nt_override)};
  });
}

void slab_grid_free(slab_grid* g) { delete g; }

int64_t slab_grid_nx(const slab_grid* g) { return g->value.nx(); }
int64_t slab_grid_nt(const slab_grid* g) { return g->value.nt(); }

slab_status slab_propagate(const slab_field* f, const slab_grid* g, int use_fft,
                           slab_spacetime** out) {
  if (auto s = require(f && g && out, "NULL argument")) return s;
  return guarded([&] {
    *out = new slab_spacetime{use_fft ? propagate_fft(f->value, g->value)
                                      : propagate_direct(f->value, g->value)};
  });
}

void slab_spacetime_free(slab_spacetime* u) { delete u; }

slab_status slab_spacetime_value(const slab_spacetime* u, int64_t t_index,
                                 const int64_t* x_index, double* re, double* im) {
  if (auto s = require(u && x_index && re && im, "NULL argument")) return s;
  return guarded([&] {
    const SpaceTimeGrid& grid = u->value.grid();
    if (t_index < 0 || t_index >= grid.nt()) fail_config("t_index out of range");
    for (int a = 0; a < grid.d(); ++a)
      if (x_index[a] < 0 || x_index[a] >= grid.nx())
        fail_config("x_index out of range");
    const cplx v =
        u->value.at(t_index, std::span<const std::int64_t>(x_index, grid.d()));
    *re = v.real();
    *im = v.imag();
  });
}

slab_status slab_extend_discrete(const slab_field* f, const double* xt,
                                 int64_t npts, double* re, double* im) {
  if (auto s = require(f && xt && re && im, "NULL argument")) return s;
  return guarded([&] {
    const int d = f->value.params().d();
    std::vector<SpaceTimePointR> pts(npts);
    for (int64_t i = 0; i < npts; ++i) {
      for (int a = 0; a < d; ++a) pts[i].x[a] = xt[i * (d + 1) + a];
      pts[i].t = xt[i * (d + 1) + d];
    }
    const auto values = extend_discrete(f->value, pts);
    for (int64_t i = 0; i < npts; ++i) {
      re[i] = values[i].real();
      im[i] = values[i].imag();
    }
  });
}

slab_status slab_spacetime_norm(const slab_spacetime* u, double q, double* out) {
  if (auto s = require(u && out, "NULL argument")) return s;
  return guarded([&] { *out = spacetime_norm(u->value, q); });
}

slab_status slab_mixed_norm(const slab_spacetime* u, double p, double q,
                            double* out) {
  if (auto s = require(u && out, "NULL argument")) return s;
  return guarded([&] { *out = mixed_norm(u->value, p, q); });
}

slab_status slab_strichartz_quotient(const slab_field* f, const slab_grid* g,
                                     double* out) {
  if (auto s = require(f && g && out, "NULL argument")) return s;
  return guarded([&] { *out = strichartz_quotient(f->value, g->value).quotient; });
}

slab_status slab_height_split_volume(const slab_spacetime* u, int level, double c0,
                                     double* threshold_out,
                                     double* high_fraction_out) {
  if (auto s = require(u && threshold_out && high_fraction_out, "NULL argument"))
    return s;
  return guarded([&] {
    const HeightSplit split = height_split(u->value, level, c0);
    *threshold_out = split.threshold;
    *high_fraction_out = split.high_volume / u->value.grid().t_end();
  });
}

slab_status slab_broad_narrow_scan(const slab_field* f, const slab_grid* g,
                                   int level, int64_t* violations_out,
                                   double* min_slack_out) {
  if (auto s = require(f && g && violations_out && min_slack_out, "NULL argument"))
    return s;
  return guarded([&] {
    const Ladder ladder = Ladder::build(f->value.params());
    const auto cubes = ladder.level(level);
    std::vector<SpaceTimeField> children;
    std::vector<const SpaceTimeField*> ptrs;
    for (const auto& cube : cubes)
      children.push_back(propagate_fft(f->value.restrict_to(cube), g->value));
    for (const auto& c : children) ptrs.push_back(&c);
    const BroadNarrowReport rep =
        broad_narrow_scan(ptrs, separated_pairs(cubes), f->value.params());
    *violations_out = rep.violations;
    *min_slack_out = rep.min_slack;
  });
}

slab_status slab_kernel_lattice(const slab_params* p, int cutoff_level,
                                int64_t cutoff_cube, const double* x, double t,
                                const double* y, double s, double* re, double* im) {
  if (auto st = require(p && x && y && re && im, "NULL argument")) return st;
  return guarded([&] {
    const KernelSpec spec = cutoff_level >= 0
                                ? make_kernel_spec(p->value, cutoff_level, cutoff_cube)
                                : make_kernel_spec(p->value);
    const cplx v = kernel_lattice(spec, std::span<const double>(x, p->value.d()), t,
                                  std::span<const double>(y, p->value.d()), s);
    *re = v.real();
    *im = v.imag();
  });
}

slab_status slab_kernel_envelope(const slab_params* p, int cutoff_level,
                                 double dt_abs, double* out) {
  if (auto s = require(p && out, "NULL argument")) return s;
  return guarded([&] {
    const KernelSpec spec = cutoff_level > 0
                                ? make_kernel_spec(p->value, cutoff_level, 0)
                                : make_kernel_spec(p->value);
    *out = kernel_envelope(spec, dt_abs);
  });
}

slab_status slab_kernel_continuum_1d(const slab_params* p, double dz, double dt,
                                     double tol, double* re, double* im,
                                     double* abs_error_out) {
  if (auto s = require(p && re && im && abs_error_out, "NULL argument")) return s;
  return guarded([&] {
    const ContinuumKernel k = kernel_continuum_1d(make_kernel_spec(p->value), dz, dt, tol);
    *re = k.value.real();
    *im = k.value.imag();
    *abs_error_out = k.abs_error;
  });
}

slab_status slab_poisson_compare(const slab_params* p, int cutoff_level,
                                 int64_t cutoff_cube, const double* x, double t,
                                 const double* y, double s, int periodization,
                                 double* rel_error_out, int64_t* nonnegligible_out) {
  if (auto st = require(p && x && y && rel_error_out && nonnegligible_out,
                        "NULL argument"))
    return st;
  return guarded([&] {
    const KernelSpec spec = cutoff_level >= 0
                                ? make_kernel_spec(p->value, cutoff_level, cutoff_cube)
                                : make_kernel_spec(p->value);
    const PoissonReport rep =
        poisson_compare(spec, std::span<const double>(x, p->value.d()), t,
                        std::span<const double>(y, p->value.d()), s, periodization);
    *rel_error_out = rep.rel_error;
    *nonnegligible_out = rep.nonnegligible.empty() ? 0 : rep.nonnegligible[0];
  });
}

slab_status slab_run(const char* name, const char* config_json, char** out_text) {
  if (auto s = require(name != nullptr, "name is NULL")) return s;
  std::ostringstream os;
  const slab_status status =
      guarded([&] { run_command(name, config_json ? config_json : "", os); });
  if (out_text) {
    const std::string text = os.str();
    *out_text = new char[text.size() + 1];
    std::memcpy(*out_text, text.c_str(), text.size() + 1);
  }
  return status;
}

void slab_text_free(char* text) { delete[] text; }

slab_status slab_fit_scaling_csv(const char* csv_path, const char* predictor,
                                 double* slope, double* intercept) {
  if (auto s = require(csv_path && slope && intercept, "NULL argument")) return s;
  return guarded([&] {
    const auto records = read_records_csv(csv_path);
    const FitResult fit =
        fit_scaling(records, predictor ? predictor : "lambda");
    *slope = fit.slope;
    *intercept = fit.intercept;
  });
}

}  // extern "C"
