#include "nhf/nhflow.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "nhf/construct.hpp"
#include "nhf/domain.hpp"
#include "nhf/errors.hpp"
#include "nhf/field_io.hpp"
#include "nhf/flow.hpp"
#include "nhf/functionals.hpp"
#include "nhf/potential.hpp"
#include "nhf/random_fields.hpp"
#include "nhf/variational.hpp"

// Handle definitions. Each wraps the corresponding core object by value.
struct nhf_domain {
    nhf::Domain impl;
};
struct nhf_field {
    nhf::ScalarField impl;
};
struct nhf_problem {
    nhf::Domain domain;
    nhf::ModelParams params;
    nhf::KernelTable kernel;
    nhf_problem(const nhf::Domain& d, double p) : domain(d), params(p), kernel(d) {}
};
struct nhf_flow_result {
    nhf::FlowResult impl;
};
struct nhf_stationary_result {
    nhf::StationaryResult impl;
};
struct nhf_depth_result {
    nhf::DepthEstimate impl;
};
struct nhf_recipe {
    nhf::BlowupRecipe impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
nhf_status guarded(Fn&& fn) {
    try {
        fn();
        return NHF_OK;
    } catch (const nhf::DomainMismatch& e) {
        set_error(e.what());
        return NHF_ERR_DOMAIN_MISMATCH;
    } catch (const nhf::InvalidArgument& e) {
        set_error(e.what());
        return NHF_ERR_INVALID_ARGUMENT;
    } catch (const nhf::NotConverged& e) {
        set_error(e.what());
        return NHF_ERR_NOT_CONVERGED;
    } catch (const nhf::Infeasible& e) {
        set_error(e.what());
        return NHF_ERR_INFEASIBLE;
    } catch (const nhf::IoError& e) {
        set_error(e.what());
        return NHF_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return NHF_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return NHF_ERR_INTERNAL;
    }
}

nhf_status require(bool cond, const char* msg) {
    if (cond) return NHF_OK;
    set_error(msg);
    return NHF_ERR_INVALID_ARGUMENT;
}

nhf_status copy_out_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed) *needed = s.size() + 1;
    if (!buf || cap < s.size() + 1) {
        set_error("buffer too small");
        return NHF_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return NHF_OK;
}

} // namespace

extern "C" {

const char* nhf_last_error(void) { return g_last_error.c_str(); }

const char* nhf_version(void) { return "nhflow 1.0.0"; }

/* ---- domain ---------------------------------------------------------- */

nhf_status nhf_domain_create(double lx, double ly, double lz, int m, nhf_domain** out) {
    if (nhf_status s = require(out != nullptr, "out must not be null")) return s;
    return guarded([&] { *out = new nhf_domain{nhf::Domain({lx, ly, lz}, m)}; });
}

void nhf_domain_free(nhf_domain* d) { delete d; }

int nhf_domain_resolution(const nhf_domain* d) { return d ? d->impl.resolution() : 0; }
double nhf_domain_spacing(const nhf_domain* d) { return d ? d->impl.spacing() : 0.0; }
double nhf_domain_volume(const nhf_domain* d) { return d ? d->impl.volume() : 0.0; }
double nhf_domain_diameter(const nhf_domain* d) { return d ? d->impl.diameter() : 0.0; }

void nhf_domain_lengths(const nhf_domain* d, double out[3]) {
    if (!d || !out) return;
    for (int i = 0; i < 3; ++i) out[i] = d->impl.lengths()[i];
}

double nhf_domain_first_eigenvalue(const nhf_domain* d) {
    return d ? nhf::first_eigenvalue(d->impl) : 0.0;
}

/* ---- fields ---------------------------------------------------------- */

nhf_status nhf_field_create(const nhf_domain* d, const double* values, nhf_field** out) {
    if (nhf_status s = require(d && out, "domain and out must not be null")) return s;
    return guarded([&] {
        if (values) {
            std::vector<double> v(values, values + d->impl.node_count());
            *out = new nhf_field{nhf::ScalarField(d->impl, std::move(v))};
        } else {
            *out = new nhf_field{nhf::ScalarField(d->impl)};
        }
    });
}

void nhf_field_free(nhf_field* f) { delete f; }

nhf_status nhf_field_copy(const nhf_field* f, nhf_field** out) {
    if (nhf_status s = require(f && out, "field and out must not be null")) return s;
    return guarded([&] { *out = new nhf_field{f->impl}; });
}

size_t nhf_field_size(const nhf_field* f) { return f ? f->impl.size() : 0; }

nhf_status nhf_field_values(const nhf_field* f, double* out_values) {
    if (nhf_status s = require(f && out_values, "field and out must not be null"))
        return s;
    std::memcpy(out_values, f->impl.data(), f->impl.size() * sizeof(double));
    return NHF_OK;
}

nhf_status nhf_field_scale(nhf_field* f, double c) {
    if (nhf_status s = require(f != nullptr, "field must not be null")) return s;
    return guarded([&] { f->impl.scale(c); });
}

nhf_status nhf_field_axpy(nhf_field* y, double a, const nhf_field* x) {
    if (nhf_status s = require(y && x, "fields must not be null")) return s;
    return guarded([&] { y->impl.add_scaled(x->impl, a); });
}

nhf_status nhf_field_add_bump(nhf_field* f, const double center[3], double radius,
                              double amplitude, const char* profile) {
    if (nhf_status s = require(f && center && profile, "null argument")) return s;
    return guarded([&] {
        nhf::add_bump(f->impl, {center[0], center[1], center[2]}, radius, amplitude,
                      nhf::bump_profile_from_string(profile));
    });
}

nhf_status nhf_field_random_smooth(const nhf_domain* d, uint64_t seed, int max_mode,
                                   nhf_field** out) {
    if (nhf_status s = require(d && out, "domain and out must not be null")) return s;
    return guarded([&] {
        nhf::Rng rng(seed);
        *out = new nhf_field{nhf::random_smooth_field(d->impl, rng, max_mode)};
    });
}

nhf_status nhf_field_first_eigenvector(const nhf_domain* d, nhf_field** out) {
    if (nhf_status s = require(d && out, "domain and out must not be null")) return s;
    return guarded([&] { *out = new nhf_field{nhf::first_eigenvector(d->impl)}; });
}

double nhf_field_l2_norm_sq(const nhf_field* f) {
    return f ? nhf::l2_norm_sq(f->impl) : 0.0;
}
double nhf_field_h1_seminorm_sq(const nhf_field* f) {
    return f ? nhf::h1_seminorm_sq(f->impl) : 0.0;
}
double nhf_field_sup_norm(const nhf_field* f) {
    return f ? nhf::sup_norm(f->impl) : 0.0;
}

nhf_status nhf_field_lp_norm(const nhf_field* f, double q, double* out) {
    if (nhf_status s = require(f && out, "field and out must not be null")) return s;
    return guarded([&] { *out = nhf::lp_norm(f->impl, q); });
}

nhf_status nhf_field_save(const nhf_field* f, const char* path_base, double p) {
    if (nhf_status s = require(f && path_base, "field and path must not be null"))
        return s;
    return guarded([&] { nhf::save_field(path_base, f->impl, p); });
}

nhf_status nhf_field_load(const char* path_base, nhf_field** out, double* p_out) {
    if (nhf_status s = require(path_base && out, "path and out must not be null"))
        return s;
    return guarded([&] {
        nhf::LoadedField loaded = nhf::load_field(path_base);
        if (p_out) *p_out = loaded.p;
        *out = new nhf_field{std::move(loaded.field)};
    });
}

/* ---- problem ---------------------------------------------------------- */

nhf_status nhf_problem_create(const nhf_domain* d, double p, nhf_problem** out) {
    if (nhf_status s = require(d && out, "domain and out must not be null")) return s;
    return guarded([&] { *out = new nhf_problem(d->impl, p); });
}

void nhf_problem_free(nhf_problem* pb) { delete pb; }

double nhf_problem_exponent(const nhf_problem* pb) { return pb ? pb->params.p : 0.0; }

nhf_status nhf_problem_kernel_stats(const nhf_problem* pb, double* min_weight,
                                    double* max_weight, double* max_asymmetry) {
    if (nhf_status s = require(pb != nullptr, "problem must not be null")) return s;
    return guarded([&] {
        if (min_weight) *min_weight = pb->kernel.min_weight();
        if (max_weight) *max_weight = pb->kernel.max_weight();
        if (max_asymmetry) *max_asymmetry = pb->kernel.max_asymmetry();
    });
}

nhf_status nhf_problem_corrupt_kernel(nhf_problem* pb) {
    if (nhf_status s = require(pb != nullptr, "problem must not be null")) return s;
    return guarded([&] { pb->kernel.corrupt_for_testing(); });
}

nhf_status nhf_riesz_potential(const nhf_problem* pb, const nhf_field* u, int fast,
                               nhf_field** out) {
    if (nhf_status s = require(pb && u && out, "null argument")) return s;
    return guarded([&] {
        *out = new nhf_field{fast ? nhf::riesz_fast(pb->kernel, u->impl, pb->params.p)
                                  : nhf::riesz_direct(pb->kernel, u->impl, pb->params.p)};
    });
}

nhf_status nhf_interaction(const nhf_problem* pb, const nhf_field* u, const nhf_field* v,
                           double* out) {
    if (nhf_status s = require(pb && u && v && out, "null argument")) return s;
    return guarded(
        [&] { *out = nhf::interaction(pb->kernel, u->impl, v->impl, pb->params.p); });
}

nhf_status nhf_evaluate(const nhf_problem* pb, const nhf_field* u,
                        nhf_functional_report* out) {
    if (nhf_status s = require(pb && u && out, "null argument")) return s;
    return guarded([&] {
        const nhf::FunctionalReport r = nhf::evaluate(pb->kernel, u->impl, pb->params);
        *out = {r.energy, r.nehari, r.grad_sq, r.l2_sq, r.self_interaction, r.sup};
    });
}

nhf_status nhf_residual(const nhf_problem* pb, const nhf_field* u, nhf_field** out) {
    if (nhf_status s = require(pb && u && out, "null argument")) return s;
    return guarded(
        [&] { *out = new nhf_field{nhf::residual(pb->kernel, u->impl, pb->params)}; });
}

nhf_status nhf_fibering_t_star(const nhf_problem* pb, const nhf_field* u, double* out) {
    if (nhf_status s = require(pb && u && out, "null argument")) return s;
    return guarded(
        [&] { *out = nhf::fibering_t_star(pb->kernel, u->impl, pb->params); });
}

nhf_status nhf_mountain_level(const nhf_problem* pb, const nhf_field* u, double* out) {
    if (nhf_status s = require(pb && u && out, "null argument")) return s;
    return guarded([&] { *out = nhf::mountain_level(pb->kernel, u->impl, pb->params); });
}

/* ---- flow ------------------------------------------------------------ */

void nhf_flow_config_default(nhf_flow_config* cfg) {
    if (!cfg) return;
    const nhf::FlowConfig d;
    *cfg = {d.dt_init,
            d.dt_min,
            d.dt_max,
            d.cfl_c,
            d.t_horizon,
            d.blowup_sup_threshold,
            d.decay_l2_threshold,
            d.trace_stride,
            d.energy_backtrack ? 1 : 0};
}

nhf_status nhf_flow_run(const nhf_problem* pb, const nhf_field* u0,
                        const nhf_flow_config* cfg, nhf_flow_result** out) {
    if (nhf_status s = require(pb && u0 && cfg && out, "null argument")) return s;
    return guarded([&] {
        nhf::FlowConfig c;
        c.dt_init = cfg->dt_init;
        c.dt_min = cfg->dt_min;
        c.dt_max = cfg->dt_max;
        c.cfl_c = cfg->cfl_c;
        c.t_horizon = cfg->t_horizon;
        c.blowup_sup_threshold = cfg->blowup_sup_threshold;
        c.decay_l2_threshold = cfg->decay_l2_threshold;
        c.trace_stride = cfg->trace_stride;
        c.energy_backtrack = cfg->energy_backtrack != 0;
        *out = new nhf_flow_result{nhf::run(pb->kernel, u0->impl, pb->params, c)};
    });
}

void nhf_flow_result_free(nhf_flow_result* r) { delete r; }

nhf_verdict nhf_flow_verdict(const nhf_flow_result* r) {
    if (!r) return NHF_VERDICT_UNDETERMINED;
    switch (r->impl.classification.verdict) {
        case nhf::Verdict::GlobalDecay: return NHF_VERDICT_GLOBAL_DECAY;
        case nhf::Verdict::BlowUp: return NHF_VERDICT_BLOW_UP;
        case nhf::Verdict::Undetermined: return NHF_VERDICT_UNDETERMINED;
    }
    return NHF_VERDICT_UNDETERMINED;
}

double nhf_flow_t_final(const nhf_flow_result* r) {
    return r ? r->impl.classification.t_final : 0.0;
}

const char* nhf_flow_certificate(const nhf_flow_result* r) {
    return r ? r->impl.classification.certificate.c_str() : "";
}

void nhf_flow_bound_flags(const nhf_flow_result* r, int* prop41_l2_bound,
                          int* i_sign_persisted) {
    if (!r) return;
    if (prop41_l2_bound) *prop41_l2_bound = r->impl.classification.prop41_l2_bound;
    if (i_sign_persisted) *i_sign_persisted = r->impl.classification.i_sign_persisted;
}

size_t nhf_flow_trace_rows(const nhf_flow_result* r) {
    return r ? r->impl.trace.rows.size() : 0;
}

nhf_status nhf_flow_trace_row(const nhf_flow_result* r, size_t i, nhf_trace_row* out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    if (nhf_status s = require(i < r->impl.trace.rows.size(), "row index out of range"))
        return s;
    const nhf::TraceRow& row = r->impl.trace.rows[i];
    *out = {row.step, row.t,      row.dt,     row.l2,   row.h1,
            row.sup,  row.energy, row.nehari, row.ut_l2};
    return NHF_OK;
}

nhf_status nhf_flow_final_field(const nhf_flow_result* r, nhf_field** out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    return guarded([&] { *out = new nhf_field{r->impl.final_field}; });
}

nhf_status nhf_flow_write_trace_csv(const nhf_flow_result* r, const char* path) {
    if (nhf_status s = require(r && path, "null argument")) return s;
    return guarded([&] { r->impl.trace.write_csv_file(path); });
}

nhf_status nhf_flow_summary_json(const nhf_flow_result* r, char* buf, size_t cap,
                                 size_t* needed) {
    if (nhf_status s = require(r != nullptr, "result must not be null")) return s;
    return copy_out_string(r->impl.classification.to_json(), buf, cap, needed);
}

nhf_status nhf_flow_verify_identities(const nhf_flow_result* r, double* max_energy_defect,
                                      double* max_l2_defect) {
    if (nhf_status s = require(r != nullptr, "result must not be null")) return s;
    return guarded([&] {
        const nhf::IdentityReport rep = nhf::verify_identities(r->impl.trace);
        if (max_energy_defect) *max_energy_defect = rep.max_energy_defect;
        if (max_l2_defect) *max_l2_defect = rep.max_l2_defect;
    });
}

nhf_status nhf_flow_check_bounds(const nhf_problem* pb, const nhf_flow_result* r,
                                 int* pass, int64_t* first_bad_row, double* max_h1) {
    if (nhf_status s = require(pb && r, "null argument")) return s;
    if (r->impl.classification.verdict != nhf::Verdict::GlobalDecay) {
        set_error("check_bounds applies to GlobalDecay runs only");
        return NHF_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const double energy0 = r->impl.trace.rows.front().energy;
        const nhf::BoundsReport rep =
            nhf::check_bounds(r->impl.trace, pb->params, energy0,
                              nhf::first_eigenvalue(pb->domain));
        if (pass) *pass = rep.pass;
        if (first_bad_row) *first_bad_row = rep.first_bad_row;
        if (max_h1) *max_h1 = rep.max_h1;
    });
}

/* ---- variational ------------------------------------------------------ */

nhf_status nhf_stationary_solve(const nhf_problem* pb, const nhf_field* seed,
                                double tol_residual, int max_iterations,
                                nhf_stationary_result** out) {
    if (nhf_status s = require(pb && out, "problem and out must not be null")) return s;
    return guarded([&] {
        nhf::StationaryOptions opts;
        if (tol_residual > 0.0) opts.tol_residual = tol_residual;
        if (max_iterations > 0) opts.max_iterations = max_iterations;
        const nhf::ScalarField seed_field =
            seed ? seed->impl : nhf::default_stationary_seed(pb->domain);
        *out = new nhf_stationary_result{
            nhf::stationary_solve(pb->kernel, pb->params, seed_field, opts)};
    });
}

void nhf_stationary_result_free(nhf_stationary_result* r) { delete r; }

nhf_status nhf_stationary_info_get(const nhf_stationary_result* r,
                                   nhf_stationary_info* out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    const nhf::StationaryResult& res = r->impl;
    *out = {res.mu,     res.psi_min,  res.residual_rel,
            res.energy, res.nehari,   res.positive ? 1 : 0,
            res.iterations};
    return NHF_OK;
}

nhf_status nhf_stationary_field(const nhf_stationary_result* r, nhf_field** out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    return guarded([&] { *out = new nhf_field{r->impl.u_star}; });
}

nhf_status nhf_stationary_json(const nhf_stationary_result* r, const char* field_ref,
                               char* buf, size_t cap, size_t* needed) {
    if (nhf_status s = require(r && field_ref, "null argument")) return s;
    return copy_out_string(r->impl.to_json(field_ref), buf, cap, needed);
}

nhf_status nhf_well_depth(const nhf_problem* pb, int n_starts, uint64_t seed, int threads,
                          nhf_depth_result** out) {
    if (nhf_status s = require(pb && out, "problem and out must not be null")) return s;
    return guarded([&] {
        nhf::DepthOptions opts;
        opts.threads = threads;
        *out = new nhf_depth_result{
            nhf::well_depth(pb->kernel, pb->params, n_starts, seed, opts)};
    });
}

void nhf_depth_result_free(nhf_depth_result* r) { delete r; }

nhf_status nhf_depth_info_get(const nhf_depth_result* r, nhf_depth_info* out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    *out = {r->impl.d_est, r->impl.starts, r->impl.converged, r->impl.spread_rel};
    return NHF_OK;
}

nhf_status nhf_depth_best_field(const nhf_depth_result* r, nhf_field** out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    return guarded([&] { *out = new nhf_field{r->impl.best_field}; });
}

nhf_status nhf_depth_json(const nhf_depth_result* r, const char* field_ref, char* buf,
                          size_t cap, size_t* needed) {
    if (nhf_status s = require(r && field_ref, "null argument")) return s;
    return copy_out_string(r->impl.to_json(field_ref), buf, cap, needed);
}

nhf_status nhf_thresholds(const nhf_problem* pb, double a, int n_samples, uint64_t seed,
                          nhf_threshold_report* out) {
    if (nhf_status s = require(pb && out, "problem and out must not be null")) return s;
    return guarded([&] {
        const nhf::ThresholdReport rep =
            nhf::thresholds(pb->kernel, pb->params, a, n_samples, seed);
        *out = {rep.a, rep.Lambda_closed, rep.lambda_sample, rep.Lambda_sample,
                rep.sample_count};
    });
}

nhf_status nhf_thresholds_json(const nhf_threshold_report* rep, char* buf, size_t cap,
                               size_t* needed) {
    if (nhf_status s = require(rep != nullptr, "report must not be null")) return s;
    nhf::ThresholdReport r;
    r.a = rep->a;
    r.Lambda_closed = rep->lambda_closed_upper;
    r.lambda_sample = rep->lambda_sample_min;
    r.Lambda_sample = rep->lambda_sample_max;
    r.sample_count = rep->sample_count;
    return copy_out_string(r.to_json(), buf, cap, needed);
}

double nhf_threshold_closed_form(const nhf_domain* d, double p, double a) {
    if (!d) return 0.0;
    return nhf::threshold_closed_form(d->impl, nhf::ModelParams(p), a);
}

/* ---- constructions ---------------------------------------------------- */

nhf_status nhf_dichotomy_pair(const nhf_problem* pb, const nhf_field* u_star,
                              nhf_field** u_plus, nhf_field** u_minus) {
    if (nhf_status s = require(pb && u_star && u_plus && u_minus, "null argument"))
        return s;
    return guarded([&] {
        auto [plus, minus] = nhf::dichotomy_pair(pb->kernel, pb->params, u_star->impl);
        *u_plus = new nhf_field{std::move(plus)};
        *u_minus = new nhf_field{std::move(minus)};
    });
}

nhf_status nhf_lemma54_datum(const nhf_problem* pb, const nhf_field* profile,
                             nhf_field** out, nhf_lemma54_info* info) {
    if (nhf_status s = require(pb && profile && out, "null argument")) return s;
    return guarded([&] {
        nhf::Lemma54Datum datum =
            nhf::lemma54_datum(pb->kernel, pb->params, profile->impl);
        if (info) {
            *info = {datum.scale, datum.criterion_lhs, datum.criterion_rhs,
                     datum.energy, datum.nehari};
        }
        *out = new nhf_field{std::move(datum.field)};
    });
}

nhf_status nhf_high_energy_datum(const nhf_problem* pb, double target_energy,
                                 double c0_init, int max_retries, nhf_recipe** out) {
    if (nhf_status s = require(pb && out, "problem and out must not be null")) return s;
    return guarded([&] {
        nhf::ConstructOptions opts;
        if (c0_init > 0.0) opts.c0_init = c0_init;
        if (max_retries > 0) opts.max_retries = max_retries;
        *out = new nhf_recipe{
            nhf::high_energy_datum(pb->kernel, pb->params, target_energy, opts)};
    });
}

void nhf_recipe_free(nhf_recipe* r) { delete r; }

nhf_status nhf_recipe_info_get(const nhf_recipe* r, nhf_recipe_info* out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    const nhf::BlowupRecipe& rec = r->impl;
    *out = {rec.target_energy, rec.alpha,  rec.c0,
            rec.kappa,         rec.energy, rec.nehari,
            rec.criterion_lhs, rec.criterion_rhs};
    return NHF_OK;
}

nhf_status nhf_recipe_field(const nhf_recipe* r, nhf_recipe_part part, nhf_field** out) {
    if (nhf_status s = require(r && out, "null argument")) return s;
    return guarded([&] {
        switch (part) {
            case NHF_RECIPE_U_M: *out = new nhf_field{r->impl.u_m}; return;
            case NHF_RECIPE_V: *out = new nhf_field{r->impl.v}; return;
            case NHF_RECIPE_W: *out = new nhf_field{r->impl.w}; return;
        }
        throw nhf::InvalidArgument("unknown recipe part");
    });
}

nhf_status nhf_recipe_write(const nhf_recipe* r, const char* dir) {
    if (nhf_status s = require(r && dir, "null argument")) return s;
    return guarded([&] {
        namespace fs = std::filesystem;
        const fs::path base(dir);
        fs::create_directories(base);
        nhf::save_field((base / "u_M").string(), r->impl.u_m, r->impl.p);
        nhf::save_field((base / "v").string(), r->impl.v, r->impl.p);
        nhf::save_field((base / "w").string(), r->impl.w, r->impl.p);
        std::ofstream os(base / "recipe.json");
        if (!os) throw nhf::IoError("cannot open recipe.json for writing");
        os << r->impl.to_json("u_M", "v", "w") << '\n';
        if (!os.good()) throw nhf::IoError("failed writing recipe.json");
    });
}

} /* extern "C" */
