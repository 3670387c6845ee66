#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "cli_svg.hpp"
#include "cli_util.hpp"

namespace nhfcli {

namespace fs = std::filesystem;

DomainPtr make_domain(const ExperimentConfig& cfg) {
    nhf_domain* dom = nullptr;
    check(nhf_domain_create(cfg.lengths[0], cfg.lengths[1], cfg.lengths[2], cfg.m, &dom),
          "domain");
    return DomainPtr(dom);
}

ProblemPtr make_problem(const nhf_domain* dom, double p) {
    nhf_problem* pb = nullptr;
    check(nhf_problem_create(dom, p, &pb), "problem");
    return ProblemPtr(pb);
}

FieldPtr make_bump_field(const nhf_domain* dom, const std::vector<BumpSpec>& bumps) {
    nhf_field* f = nullptr;
    check(nhf_field_create(dom, nullptr, &f), "field");
    FieldPtr field(f);
    for (const BumpSpec& b : bumps) {
        check(nhf_field_add_bump(field.get(), b.center.data(), b.radius, b.amplitude,
                                 b.profile.c_str()),
              "bump");
    }
    return field;
}

FieldPtr clone_scaled(const nhf_field* f, double scale) {
    nhf_field* out = nullptr;
    check(nhf_field_copy(f, &out), "field copy");
    FieldPtr field(out);
    check(nhf_field_scale(field.get(), scale), "field scale");
    return field;
}

nhf_flow_config flow_config_of(const ExperimentConfig& cfg) {
    nhf_flow_config c;
    nhf_flow_config_default(&c);
    c.dt_init = cfg.flow.dt_init;
    c.dt_min = cfg.flow.dt_min;
    c.dt_max = cfg.flow.dt_max;
    c.cfl_c = cfg.flow.cfl_c;
    c.t_horizon = cfg.flow.t_horizon;
    c.blowup_sup_threshold = cfg.flow.blowup_sup_threshold;
    c.decay_l2_threshold = cfg.flow.decay_l2_threshold;
    c.trace_stride = cfg.flow.trace_stride;
    c.energy_backtrack = cfg.flow.energy_backtrack ? 1 : 0;
    return c;
}

namespace {

std::string json_string_of(
    const std::function<nhf_status(char*, size_t, size_t*)>& getter) {
    size_t needed = 0;
    getter(nullptr, 0, &needed);
    std::string buf(needed, '\0');
    check(getter(buf.data(), buf.size(), &needed), "json");
    buf.resize(needed - 1);  // drop the NUL
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw CliError(1, "cannot open for writing: " + path.string());
    os << text << '\n';
    if (!os.good()) throw CliError(1, "failed writing: " + path.string());
}

const char* verdict_name(nhf_verdict v) {
    switch (v) {
        case NHF_VERDICT_GLOBAL_DECAY: return "GlobalDecay";
        case NHF_VERDICT_BLOW_UP: return "BlowUp";
        case NHF_VERDICT_UNDETERMINED: return "Undetermined";
    }
    return "Undetermined";
}

/// Builds the configured initial datum. May run the stationary solver or the
/// construction routines, depending on the kind.
FieldPtr build_initial_data(const CliContext& ctx, const nhf_domain* dom,
                            nhf_problem* pb) {
    const InitialDataSpec& spec = ctx.cfg.initial_data;
    if (spec.kind == "bumps") {
        return make_bump_field(dom, spec.bumps);
    }
    if (spec.kind == "stationary_scaled") {
        nhf_stationary_result* st = nullptr;
        check(nhf_stationary_solve(pb, nullptr, ctx.cfg.stationary.tol_residual,
                                   ctx.cfg.stationary.max_iterations, &st),
              "stationary solve");
        StationaryPtr stp(st);
        nhf_field* u = nullptr;
        check(nhf_stationary_field(stp.get(), &u), "stationary field");
        FieldPtr field(u);
        check(nhf_field_scale(field.get(), spec.scale), "scale");
        return field;
    }
    if (spec.kind == "lemma54") {
        FieldPtr profile = make_bump_field(dom, spec.bumps);
        nhf_field* out = nullptr;
        nhf_lemma54_info info{};
        check(nhf_lemma54_datum(pb, profile.get(), &out, &info), "lemma54 datum");
        std::printf("lemma54: scale=%.6g criterion %.6g >= %.6g, J0=%.6g I0=%.6g\n",
                    info.scale, info.criterion_lhs, info.criterion_rhs, info.energy,
                    info.nehari);
        return FieldPtr(out);
    }
    if (spec.kind == "theorem12") {
        nhf_recipe* rec = nullptr;
        check(nhf_high_energy_datum(pb, spec.target_energy, 0.0, 0, &rec),
              "high-energy datum");
        RecipePtr recipe(rec);
        nhf_field* u = nullptr;
        check(nhf_recipe_field(recipe.get(), NHF_RECIPE_U_M, &u), "recipe field");
        return FieldPtr(u);
    }
    throw CliError(2, "unknown initial_data.kind: " + spec.kind);
}

struct TraceColumns {
    std::vector<double> t, l2, h1, sup, energy, nehari;
};

TraceColumns trace_columns(const nhf_flow_result* res) {
    TraceColumns c;
    const size_t n = nhf_flow_trace_rows(res);
    for (size_t i = 0; i < n; ++i) {
        nhf_trace_row row;
        check(nhf_flow_trace_row(res, i, &row), "trace row");
        c.t.push_back(row.t);
        c.l2.push_back(row.l2);
        c.h1.push_back(row.h1);
        c.sup.push_back(row.sup);
        c.energy.push_back(row.energy);
        c.nehari.push_back(row.nehari);
    }
    return c;
}

} // namespace

int cmd_simulate(const CliContext& ctx) {
    const fs::path out(ctx.out_dir);
    fs::create_directories(out);
    DomainPtr dom = make_domain(ctx.cfg);
    ProblemPtr pb = make_problem(dom.get(), ctx.cfg.p);
    FieldPtr u0 = build_initial_data(ctx, dom.get(), pb.get());

    const nhf_flow_config fc = flow_config_of(ctx.cfg);
    nhf_flow_result* raw = nullptr;
    check(nhf_flow_run(pb.get(), u0.get(), &fc, &raw), "flow run");
    FlowPtr res(raw);

    check(nhf_flow_write_trace_csv(res.get(), (out / "trace.csv").string().c_str()),
          "trace.csv");
    write_text(out / "summary.json", json_string_of([&](char* b, size_t cap, size_t* n) {
                   return nhf_flow_summary_json(res.get(), b, cap, n);
               }));

    const TraceColumns c = trace_columns(res.get());
    write_svg_plot((out / "J.svg").string(), "energy J(u(t))",
                   {{"J", "#1f77b4", c.t, c.energy}});
    write_svg_plot((out / "I.svg").string(), "Nehari functional I(u(t))",
                   {{"I", "#2ca02c", c.t, c.nehari}});
    write_svg_plot((out / "norms.svg").string(), "norms along the flow",
                   {{"l2", "#1f77b4", c.t, c.l2},
                    {"h1", "#ff7f0e", c.t, c.h1},
                    {"sup", "#d62728", c.t, c.sup}});

    std::printf("verdict=%s t_final=%.6g certificate=%s rows=%zu\n",
                verdict_name(nhf_flow_verdict(res.get())), nhf_flow_t_final(res.get()),
                nhf_flow_certificate(res.get()), nhf_flow_trace_rows(res.get()));
    return 0;
}

int cmd_stationary(const CliContext& ctx) {
    const fs::path out(ctx.out_dir);
    fs::create_directories(out);
    DomainPtr dom = make_domain(ctx.cfg);
    ProblemPtr pb = make_problem(dom.get(), ctx.cfg.p);

    FieldPtr seed;
    if (ctx.cfg.initial_data.kind == "bumps") {
        seed = make_bump_field(dom.get(), ctx.cfg.initial_data.bumps);
    }
    nhf_stationary_result* raw = nullptr;
    check(nhf_stationary_solve(pb.get(), seed.get(), ctx.cfg.stationary.tol_residual,
                               ctx.cfg.stationary.max_iterations, &raw),
          "stationary solve");
    StationaryPtr res(raw);

    nhf_stationary_info info;
    check(nhf_stationary_info_get(res.get(), &info), "stationary info");
    nhf_field* u = nullptr;
    check(nhf_stationary_field(res.get(), &u), "stationary field");
    FieldPtr u_star(u);
    check(nhf_field_save(u_star.get(), (out / "u_star").string().c_str(), ctx.cfg.p),
          "field save");
    write_text(out / "stationary.json",
               json_string_of([&](char* b, size_t cap, size_t* n) {
                   return nhf_stationary_json(res.get(), "u_star", b, cap, n);
               }));
    std::printf("stationary: residual_rel=%.3e positive=%d mu=%.9g J*=%.9g I*=%.3e "
                "iterations=%d\n",
                info.residual_rel, info.positive, info.mu, info.energy, info.nehari,
                info.iterations);
    return 0;
}

int cmd_depth(const CliContext& ctx) {
    const fs::path out(ctx.out_dir);
    fs::create_directories(out);
    DomainPtr dom = make_domain(ctx.cfg);
    ProblemPtr pb = make_problem(dom.get(), ctx.cfg.p);

    nhf_depth_result* raw = nullptr;
    check(nhf_well_depth(pb.get(), ctx.cfg.depth.n_starts, ctx.cfg.seed, ctx.threads,
                         &raw),
          "well depth");
    DepthPtr res(raw);
    nhf_depth_info info;
    check(nhf_depth_info_get(res.get(), &info), "depth info");

    nhf_field* best = nullptr;
    check(nhf_depth_best_field(res.get(), &best), "depth best field");
    FieldPtr best_field(best);
    check(nhf_field_save(best_field.get(), (out / "depth_best").string().c_str(),
                         ctx.cfg.p),
          "field save");
    write_text(out / "depth.json", json_string_of([&](char* b, size_t cap, size_t* n) {
                   return nhf_depth_json(res.get(), "depth_best", b, cap, n);
               }));
    std::printf("depth: d_est=%.9g starts=%d converged=%d spread_rel=%.3e\n", info.d_est,
                info.starts, info.converged, info.spread_rel);

    if (ctx.cfg.depth.thresholds_a_over_d > 0.0) {
        const double a = ctx.cfg.depth.thresholds_a_over_d * info.d_est;
        nhf_threshold_report rep;
        check(nhf_thresholds(pb.get(), a, ctx.cfg.depth.thresholds_samples, ctx.cfg.seed,
                             &rep),
              "thresholds");
        write_text(out / "thresholds.json",
                   json_string_of([&](char* b, size_t cap, size_t* n) {
                       return nhf_thresholds_json(&rep, b, cap, n);
                   }));
        std::printf("thresholds: a=%.6g Lambda_closed=%.6g lambda_sample=%.6g "
                    "Lambda_sample=%.6g samples=%d\n",
                    rep.a, rep.lambda_closed_upper, rep.lambda_sample_min,
                    rep.lambda_sample_max, rep.sample_count);
    }
    return 0;
}

int cmd_construct(const CliContext& ctx) {
    const fs::path out(ctx.out_dir);
    fs::create_directories(out);
    DomainPtr dom = make_domain(ctx.cfg);
    ProblemPtr pb = make_problem(dom.get(), ctx.cfg.p);
    const InitialDataSpec& spec = ctx.cfg.initial_data;

    if (spec.kind == "lemma54") {
        FieldPtr profile = make_bump_field(dom.get(), spec.bumps);
        nhf_field* raw = nullptr;
        nhf_lemma54_info info{};
        check(nhf_lemma54_datum(pb.get(), profile.get(), &raw, &info), "lemma54 datum");
        FieldPtr field(raw);
        check(nhf_field_save(field.get(), (out / "lemma54_u0").string().c_str(),
                             ctx.cfg.p),
              "field save");
        ordered_json j = {{"scale", info.scale},
                          {"criterion_lhs", info.criterion_lhs},
                          {"criterion_rhs", info.criterion_rhs},
                          {"J", info.energy},
                          {"I", info.nehari},
                          {"field", "lemma54_u0"}};
        write_text(out / "lemma54.json", j.dump());
        std::printf("lemma54 certified: criterion %.9g >= %.9g, I=%.6g < 0\n",
                    info.criterion_lhs, info.criterion_rhs, info.nehari);
        return 0;
    }
    if (spec.kind == "theorem12") {
        nhf_recipe* raw = nullptr;
        check(nhf_high_energy_datum(pb.get(), spec.target_energy, 0.0, 0, &raw),
              "high-energy datum");
        RecipePtr recipe(raw);
        check(nhf_recipe_write(recipe.get(), out.string().c_str()), "recipe write");
        nhf_recipe_info info;
        check(nhf_recipe_info_get(recipe.get(), &info), "recipe info");
        std::printf("theorem12 certified: |J-M|/M=%.3e I=%.6g < 0, criterion %.9g >= "
                    "%.9g (alpha=%.6g c0=%.3g kappa=%.6g)\n",
                    std::abs(info.energy - info.target_energy) / info.target_energy,
                    info.nehari, info.criterion_lhs, info.criterion_rhs, info.alpha,
                    info.c0, info.kappa);
        return 0;
    }
    throw CliError(2, "construct requires initial_data.kind lemma54 or theorem12");
}

int cmd_sweep(const CliContext& ctx) {
    const fs::path out(ctx.out_dir);
    fs::create_directories(out);
    DomainPtr dom = make_domain(ctx.cfg);
    ProblemPtr pb = make_problem(dom.get(), ctx.cfg.p);
    FieldPtr base = build_initial_data(ctx, dom.get(), pb.get());

    const SweepSpec& sw = ctx.cfg.sweep;
    std::vector<double> scales;
    for (int i = 0; i < sw.count; ++i) {
        scales.push_back(sw.count == 1 ? sw.scale_min
                                       : sw.scale_min + (sw.scale_max - sw.scale_min) *
                                                            i / (sw.count - 1));
    }

    struct Row {
        double s = 0.0;
        double energy0 = 0.0, nehari0 = 0.0, l2_0 = 0.0;
        std::string verdict = "Failed";
        double t_final = 0.0;
        bool ok = false;
    };
    std::vector<Row> rows(scales.size());

    const nhf_flow_config fc = flow_config_of(ctx.cfg);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= scales.size()) return;
            Row& row = rows[i];
            row.s = scales[i];
            try {
                FieldPtr u0 = clone_scaled(base.get(), scales[i]);
                nhf_functional_report rep;
                check(nhf_evaluate(pb.get(), u0.get(), &rep), "evaluate");
                row.energy0 = rep.energy;
                row.nehari0 = rep.nehari;
                row.l2_0 = std::sqrt(rep.l2_sq);
                nhf_flow_result* raw = nullptr;
                check(nhf_flow_run(pb.get(), u0.get(), &fc, &raw), "flow run");
                FlowPtr res(raw);
                row.verdict = verdict_name(nhf_flow_verdict(res.get()));
                row.t_final = nhf_flow_t_final(res.get());
                row.ok = true;
            } catch (const std::exception& e) {
                row.verdict = "Failed";
                std::fprintf(stderr, "sweep row s=%.6g failed: %s\n", row.s, e.what());
            }
        }
    };
    unsigned n_workers = ctx.threads > 0
                             ? static_cast<unsigned>(ctx.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, scales.size());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    // Single collector writes in row order, independent of scheduling.
    {
        std::ofstream os(out / "phase.csv");
        if (!os) throw CliError(1, "cannot open phase.csv for writing");
        os << "s,J0,I0,l2_0,verdict,t_final\n";
        char buf[256];
        for (const Row& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%s,%.17g\n", r.s,
                          r.energy0, r.nehari0, r.l2_0, r.verdict.c_str(), r.t_final);
            os << buf;
        }
    }
    std::vector<PhaseRowView> views;
    for (const Row& r : rows) views.push_back({r.s, r.energy0, r.nehari0, r.verdict});
    write_phase_svg((out / "phase.svg").string(), views);

    size_t ok = 0;
    for (const Row& r : rows) ok += r.ok ? 1 : 0;
    std::printf("sweep: %zu/%zu rows completed\n", ok, rows.size());
    if (ok == 0) throw CliError(1, "sweep: every row failed");
    return 0;
}

} // namespace nhfcli
