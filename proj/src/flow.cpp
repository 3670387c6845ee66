#include "nhf/flow.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nhf/errors.hpp"

namespace nhf {

namespace {

double sup_abs(const ScalarField& u) { return sup_norm(u); }

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

TraceRow make_row(std::int64_t step_no, double t, double dt, const FunctionalReport& r,
                  double ut_l2) {
    TraceRow row;
    row.step = step_no;
    row.t = t;
    row.dt = dt;
    row.l2 = std::sqrt(r.l2_sq);
    row.h1 = std::sqrt(r.grad_sq);
    row.sup = r.sup;
    row.energy = r.energy;
    row.nehari = r.nehari;
    row.ut_l2 = ut_l2;
    return row;
}

} // namespace

void FlowConfig::validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max)) {
        throw InvalidArgument("flow config requires 0 < dt_min <= dt_init <= dt_max");
    }
    if (!(cfl_c > 0.0) || !(t_horizon > 0.0)) {
        throw InvalidArgument("flow config requires positive cfl_c and t_horizon");
    }
    if (!(blowup_sup_threshold > 0.0) || !(decay_l2_threshold > 0.0)) {
        throw InvalidArgument("flow thresholds must be positive");
    }
    if (trace_stride < 1) {
        throw InvalidArgument("trace_stride must be >= 1");
    }
}

void FlowTrace::write_csv(std::ostream& os) const {
    os << "step,t,dt,l2,h1,sup,J,I,ut_l2\n";
    for (const TraceRow& r : rows) {
        os << r.step << ',' << fmt17(r.t) << ',' << fmt17(r.dt) << ',' << fmt17(r.l2)
           << ',' << fmt17(r.h1) << ',' << fmt17(r.sup) << ',' << fmt17(r.energy) << ','
           << fmt17(r.nehari) << ',' << fmt17(r.ut_l2) << '\n';
    }
}

void FlowTrace::write_csv_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open trace file for writing: " + path);
    write_csv(os);
    if (!os.good()) throw IoError("failed while writing trace file: " + path);
}

FlowTrace FlowTrace::read_csv(std::istream& is) {
    FlowTrace trace;
    std::string line;
    if (!std::getline(is, line) || line != "step,t,dt,l2,h1,sup,J,I,ut_l2") {
        throw IoError("trace CSV header mismatch");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        TraceRow r;
        long long s = 0;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s, &r.t,
                        &r.dt, &r.l2, &r.h1, &r.sup, &r.energy, &r.nehari,
                        &r.ut_l2) != 9) {
            throw IoError("malformed trace CSV row: " + line);
        }
        r.step = s;
        trace.rows.push_back(r);
    }
    return trace;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::GlobalDecay: return "GlobalDecay";
        case Verdict::BlowUp: return "BlowUp";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "GlobalDecay") return Verdict::GlobalDecay;
    if (s == "BlowUp") return Verdict::BlowUp;
    if (s == "Undetermined") return Verdict::Undetermined;
    throw InvalidArgument("unknown verdict: " + s);
}

std::string ClassificationResult::to_json() const {
    std::ostringstream os;
    os << "{\"verdict\":\"" << to_string(verdict) << "\",\"t_final\":" << fmt17(t_final)
       << ",\"certificate\":\"" << certificate << "\",\"bounds\":{\"prop41_l2_bound\":"
       << (prop41_l2_bound ? "true" : "false")
       << ",\"i_sign_persisted\":" << (i_sign_persisted ? "true" : "false") << "}}";
    return os.str();
}

ScalarField step(const KernelTable& kernel, const SineTransform& dst,
                 const ScalarField& u, double dt, const ModelParams& params) {
    if (!(dt > 0.0)) throw InvalidArgument("step requires dt > 0");
    const ScalarField f = nonlocal_source(kernel, u, params);
    ScalarField rhs = u;
    rhs.add_scaled(f, dt);
    return dst.helmholtz_solve(rhs, dt);
}

FlowResult run(const KernelTable& kernel, const ScalarField& u0,
               const ModelParams& params, const FlowConfig& config) {
    config.validate();
    u0.check_finite();
    if (!(u0.domain() == kernel.domain())) {
        throw DomainMismatch("run: initial data does not match the kernel grid");
    }

    const SineTransform dst(u0.domain());
    const double lambda1 = first_eigenvalue(u0.domain());

    FlowResult result{FlowTrace{}, ClassificationResult{}, u0};
    ScalarField u = u0;
    FunctionalReport rep = evaluate(kernel, u, params);
    const double energy0 = rep.energy;
    const int sign0 = rep.nehari > 0.0 ? 1 : (rep.nehari < 0.0 ? -1 : 0);
    result.trace.rows.push_back(make_row(0, 0.0, config.dt_init, rep, 0.0));

    double t = 0.0;
    std::int64_t accepted = 0;
    double dt = config.dt_init;
    bool pinned = false;
    double sup_at_pinning = 0.0;
    bool i_sign_ok = true;
    bool prop41_ok = true;

    auto record = [&](double ut_l2, double used_dt) {
        if (accepted % config.trace_stride == 0) {
            result.trace.rows.push_back(make_row(accepted, t, used_dt, rep, ut_l2));
        }
        if (sign0 > 0 && rep.nehari <= 0.0) i_sign_ok = false;
        if (sign0 < 0 && rep.nehari >= 0.0) i_sign_ok = false;
        const double slack = 1e-10 * (1.0 + std::abs(energy0));
        if ((params.p - 1.0) * lambda1 * rep.l2_sq >
            2.0 * params.p * energy0 * (1.0 + 1e-10) + slack) {
            prop41_ok = false;
        }
    };

    auto finish = [&](Verdict v, const char* certificate) {
        // Always keep the terminal state in the trace.
        if (result.trace.rows.empty() || result.trace.rows.back().step != accepted) {
            result.trace.rows.push_back(make_row(accepted, t, dt, rep, 0.0));
        }
        result.classification.verdict = v;
        result.classification.t_final = t;
        result.classification.certificate = certificate;
        result.classification.i_sign_persisted = i_sign_ok;
        result.classification.prop41_l2_bound = prop41_ok;
        result.final_field = u;
        return result;
    };

    if (rep.sup <= config.decay_l2_threshold) {
        return finish(Verdict::GlobalDecay, "decay_threshold");
    }

    // One Riesz transform per state: the potential backs both the source and
    // the functional report, and is carried across accepted steps.
    ScalarField z = riesz_fast(kernel, u, params.p);

    while (t < config.t_horizon) {
        const ScalarField f = source_from_potential(u, z, params);
        const double f_sup = sup_abs(f);
        const double dt_sched = config.cfl_c / (1.0 + f_sup);
        dt = std::min(std::max(dt_sched, config.dt_min), config.dt_max);

        if (dt_sched < config.dt_min) {
            if (!pinned) {
                pinned = true;
                sup_at_pinning = rep.sup;
            } else if (rep.sup >= 2.0 * sup_at_pinning) {
                return finish(Verdict::BlowUp, "dt_collapse");
            }
        } else {
            pinned = false;
        }

        // IMEX step with optional energy backtracking.
        ScalarField u_next(u.domain());
        ScalarField z_next(u.domain());
        FunctionalReport rep_next;
        while (true) {
            ScalarField rhs = u;
            rhs.add_scaled(f, dt);
            u_next = dst.helmholtz_solve(rhs, dt);
            z_next = riesz_fast(kernel, u_next, params.p);
            rep_next = evaluate_with_potential(u_next, z_next, params);
            const double tol = 1e-10 * (1.0 + std::abs(rep.energy));
            if (!config.energy_backtrack || rep_next.energy <= rep.energy + tol ||
                dt <= config.dt_min) {
                break;
            }
            dt = std::max(0.5 * dt, config.dt_min);
        }

        ScalarField diff = u_next;
        diff.add_scaled(u, -1.0);
        const double ut_l2 = l2_norm(diff) / dt;

        u = std::move(u_next);
        z = std::move(z_next);
        rep = rep_next;
        t += dt;
        ++accepted;
        record(ut_l2, dt);

        if (!std::isfinite(rep.sup) || rep.sup >= config.blowup_sup_threshold) {
            return finish(Verdict::BlowUp, "sup_threshold");
        }
        if (rep.sup <= config.decay_l2_threshold) {
            return finish(Verdict::GlobalDecay, "decay_threshold");
        }
    }
    return finish(Verdict::Undetermined, "horizon");
}

IdentityReport verify_identities(const FlowTrace& trace) {
    const auto& rows = trace.rows;
    if (rows.size() < 3) {
        throw InvalidArgument("verify_identities: trace too short (need >= 3 rows)");
    }
    IdentityReport rep;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const TraceRow& a = rows[k];
        const TraceRow& b = rows[k + 1];
        const double dt = b.t - a.t;
        if (!(dt > 0.0)) throw InvalidArgument("verify_identities: time not increasing");
        const double dJ = (b.energy - a.energy) / dt;
        const double e_defect = std::abs(dJ + b.ut_l2 * b.ut_l2);
        const double dl2 = (b.l2 * b.l2 - a.l2 * a.l2) / dt;
        const double i_mid = 0.5 * (a.nehari + b.nehari);
        const double l_defect = std::abs(dl2 + 2.0 * i_mid);
        rep.max_energy_defect = std::max(rep.max_energy_defect, e_defect);
        rep.max_l2_defect = std::max(rep.max_l2_defect, l_defect);
        rep.max_energy_defect_rel =
            std::max(rep.max_energy_defect_rel, e_defect / (1.0 + std::abs(dJ)));
        rep.max_l2_defect_rel =
            std::max(rep.max_l2_defect_rel, l_defect / (1.0 + std::abs(dl2)));
    }
    return rep;
}

BoundsReport check_bounds(const FlowTrace& trace, const ModelParams& params, double energy0,
                          double lambda1) {
    BoundsReport rep;
    const double p = params.p;
    const double slack = 1e-10 * (1.0 + std::abs(energy0));
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        const TraceRow& r = trace.rows[k];
        rep.max_h1 = std::max(rep.max_h1, r.h1);
        if (r.energy < -slack || r.energy > energy0 + slack) {
            rep.pass = false;
            rep.first_bad_row = static_cast<std::int64_t>(k);
            rep.violation = "energy bound 0 <= J <= J(u0)";
            return rep;
        }
        if ((p - 1.0) * lambda1 * r.l2 * r.l2 > 2.0 * p * energy0 * (1.0 + 1e-10) + slack) {
            rep.pass = false;
            rep.first_bad_row = static_cast<std::int64_t>(k);
            rep.violation = "L2 bound (p-1) lambda ||u||^2 <= 2p J(u0)";
            return rep;
        }
    }
    return rep;
}

} // namespace nhf
