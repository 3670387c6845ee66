#include "nhf/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "nhf/errors.hpp"
#include "nhf/functionals.hpp"
#include "nhf/random_fields.hpp"
#include "nhf/sine_transform.hpp"
#include "nhf/summation.hpp"

namespace nhf {

namespace {

std::string json_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// D(u,u) from a precomputed potential z = riesz_fast(u).
double self_interaction_from(const ScalarField& z, const ScalarField& u, double p) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc.add(z[i] * std::pow(std::abs(u[i]), p));
    const double h = u.domain().spacing();
    return h * h * h * acc.value();
}

} // namespace

std::string StationaryResult::to_json(const std::string& field_ref) const {
    std::ostringstream os;
    os << "{\"mu\":" << json_num(mu) << ",\"psi_min\":" << json_num(psi_min)
       << ",\"residual_rel\":" << json_num(residual_rel)
       << ",\"J_star\":" << json_num(energy) << ",\"I_star\":" << json_num(nehari)
       << ",\"positive\":" << (positive ? "true" : "false")
       << ",\"iterations\":" << iterations << ",\"u_star\":\"" << field_ref << "\"}";
    return os.str();
}

std::string DepthEstimate::to_json(const std::string& field_ref) const {
    std::ostringstream os;
    os << "{\"d_est\":" << json_num(d_est) << ",\"starts\":" << starts
       << ",\"converged\":" << converged << ",\"spread_rel\":" << json_num(spread_rel)
       << ",\"best_field\":\"" << field_ref << "\"}";
    return os.str();
}

std::string ThresholdReport::to_json() const {
    std::ostringstream os;
    os << "{\"a\":" << json_num(a) << ",\"Lambda_closed\":" << json_num(Lambda_closed)
       << ",\"lambda_sample\":" << json_num(lambda_sample)
       << ",\"Lambda_sample\":" << json_num(Lambda_sample)
       << ",\"sample_count\":" << sample_count << "}";
    return os.str();
}

ScalarField default_stationary_seed(const Domain& domain) {
    ScalarField u(domain);
    const auto& L = domain.lengths();
    add_bump(u, {0.5 * L[0], 0.5 * L[1], 0.5 * L[2]},
             0.3 * *std::min_element(L.begin(), L.end()), 1.0, BumpProfile::Cos2);
    return u;
}

StationaryResult stationary_solve(const KernelTable& kernel, const ModelParams& params,
                                  const ScalarField& seed,
                                  const StationaryOptions& opts) {
    const double p = params.p;
    const Domain& dom = kernel.domain();
    if (!(seed.domain() == dom)) {
        throw DomainMismatch("stationary_solve: seed does not match the kernel grid");
    }
    const SineTransform dst(dom);

    auto constraint = [&](const ScalarField& u) {
        return interaction(kernel, u, u, p) / (2.0 * p);  // Phi(u)
    };

    // Project the seed onto {Phi = 1}.
    ScalarField u = seed;
    if (opts.enforce_positive) u.abs_in_place();
    {
        const double phi = constraint(u);
        if (!(phi > 0.0)) {
            throw InvalidArgument("stationary_solve: seed has D(seed,seed) = 0");
        }
        u.scale(std::pow(phi, -1.0 / (2.0 * p)));
    }

    double psi = 0.5 * h1_seminorm_sq(u);
    std::vector<double> history{psi};
    double step_size = 1.0;
    double residual_rel = std::numeric_limits<double>::infinity();
    int it = 0;

    auto rescaled_residual = [&](const ScalarField& w, double psi_w,
                                 const ScalarField& f_w) {
        // u* = t w with t = mu^{1/(2p-2)}, mu = psi_w / p.
        const double mu = psi_w / p;
        const double t = std::pow(mu, 1.0 / (2.0 * p - 2.0));
        ScalarField lap_w = laplacian(w);
        ScalarField r(dom);
        const double tf = std::pow(t, 2.0 * p - 1.0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = -t * lap_w[i] - tf * f_w[i];
        CompensatedSum num, den;
        for (std::size_t i = 0; i < r.size(); ++i) {
            num.add(r[i] * r[i]);
            den.add(lap_w[i] * lap_w[i] * t * t);
        }
        return std::sqrt(num.value() / den.value());
    };

    for (; it < opts.max_iterations; ++it) {
        const ScalarField f = nonlocal_source(kernel, u, params);
        residual_rel = rescaled_residual(u, psi, f);
        if (residual_rel <= opts.tol_residual) break;

        const ScalarField rf = dst.poisson_solve(f);
        // H1 inner products via the L2 pairing with f = -lap(Rf).
        const double u_rf = inner(u, f);        // <u, Rf>_H1 = 2p Phi = 2p on M
        const double rf_rf = inner(rf, f);      // ||Rf||_H1^2
        const double mu_hat = u_rf / rf_rf;
        ScalarField grad = u;
        grad.add_scaled(rf, -mu_hat);
        const double grad_sq = h1_seminorm_sq(grad);

        bool accepted = false;
        while (step_size > 1e-14) {
            ScalarField trial = u;
            trial.add_scaled(grad, -step_size);
            if (opts.enforce_positive) trial.abs_in_place();
            const double phi = constraint(trial);
            if (phi > 0.0) {
                trial.scale(std::pow(phi, -1.0 / (2.0 * p)));
                const double psi_trial = 0.5 * h1_seminorm_sq(trial);
                if (psi_trial <= psi - 1e-4 * step_size * grad_sq) {
                    u = std::move(trial);
                    psi = psi_trial;
                    history.push_back(psi);
                    step_size = std::min(1.25 * step_size, 1.0);
                    accepted = true;
                    break;
                }
            }
            step_size *= 0.5;
        }
        if (!accepted) break;  // numerical floor of Psi; residual_rel is current
    }

    // Fixed-point polish: the unit projected-gradient step is
    // u -> normalize(R[f(u)]), which contracts near the minimizer and drives
    // the residual below the Armijo floor. Accept only while it improves.
    for (int k = 0; k < 100 && residual_rel > 0.0; ++k) {
        const ScalarField f = nonlocal_source(kernel, u, params);
        ScalarField w = dst.poisson_solve(f);
        if (opts.enforce_positive) w.abs_in_place();
        const double phi = constraint(w);
        if (!(phi > 0.0)) break;
        w.scale(std::pow(phi, -1.0 / (2.0 * p)));
        const double psi_w = 0.5 * h1_seminorm_sq(w);
        const ScalarField f_w = nonlocal_source(kernel, w, params);
        const double res_w = rescaled_residual(w, psi_w, f_w);
        if (res_w >= residual_rel) break;
        u = std::move(w);
        psi = psi_w;
        residual_rel = res_w;
        history.push_back(psi);
        ++it;
    }

    if (residual_rel > opts.tol_residual) {
        std::ostringstream msg;
        msg << "stationary_solve: no convergence after " << it
            << " iterations (residual_rel = " << residual_rel << ")";
        throw NotConverged(msg.str());
    }

    StationaryResult result{ScalarField(dom), 0.0, 0.0, 0.0, 0.0, 0.0, false, 0, {}};
    result.psi_min = psi;
    result.mu = psi / p;
    result.iterations = it;
    result.psi_history = std::move(history);

    const double t = std::pow(result.mu, 1.0 / (2.0 * p - 2.0));
    result.u_star = u;
    result.u_star.scale(t);

    const FunctionalReport rep = evaluate(kernel, result.u_star, params);
    result.energy = rep.energy;
    result.nehari = rep.nehari;
    {
        ScalarField r = residual(kernel, result.u_star, params);
        const ScalarField lap_u = laplacian(result.u_star);
        result.residual_rel = l2_norm(r) / l2_norm(lap_u);
    }
    result.positive = *std::min_element(result.u_star.values().begin(),
                                        result.u_star.values().end()) > 0.0;
    return result;
}

namespace {

// Per-iterate state of the fiber-energy descent.
struct FiberState {
    double grad_sq = 0.0;          // A = ||grad u||^2
    double self_interaction = 0.0; // B = D(u,u)
    double q = 0.0;                // mountain_level(A, B)
    ScalarField source;            // f(u) = z(u)|u|^{p-2}u

    static FiberState of(const KernelTable& kernel, const ScalarField& u, double p) {
        FiberState s{0.0, 0.0, 0.0, ScalarField(u.domain())};
        s.grad_sq = h1_seminorm_sq(u);
        const ScalarField z = riesz_fast(kernel, u, p);
        s.self_interaction = self_interaction_from(z, u, p);
        if (!(s.self_interaction > 0.0)) {
            throw InvalidArgument("fiber descent: D(u,u) vanished");
        }
        s.q = mountain_level(s.grad_sq, s.self_interaction, p);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double v = u[i];
            s.source[i] = v == 0.0 ? 0.0 : z[i] * std::pow(std::abs(v), p - 2.0) * v;
        }
        return s;
    }
};

} // namespace

double descend_mountain_level(const KernelTable& kernel, const ModelParams& params,
                              ScalarField start, const DepthOptions& opts,
                              bool* converged_out, ScalarField* minimizer) {
    const double p = params.p;
    const SineTransform dst(kernel.domain());

    ScalarField u = std::move(start);
    u.abs_in_place();  // Q(|u|) <= Q(u); keeps iterates in the positive cone
    const double grad_sq_start = h1_seminorm_sq(u);
    if (!(grad_sq_start > 0.0)) {
        throw InvalidArgument("fiber descent started from zero field");
    }
    u.scale(1.0 / std::sqrt(grad_sq_start));  // Q is 0-homogeneous

    FiberState state = FiberState::of(kernel, u, p);
    double step_size = 1.0;
    bool converged = false;

    for (int it = 0; it < opts.max_iterations; ++it) {
        // H1 gradient of Q is proportional to u - (A/B) * (-lap)^{-1} f(u).
        const ScalarField rf = dst.poisson_solve(state.source);
        ScalarField dir = u;
        dir.add_scaled(rf, -state.grad_sq / state.self_interaction);
        const double dir_sq = h1_seminorm_sq(dir);
        if (std::sqrt(dir_sq / state.grad_sq) <= opts.tol_grad) {
            converged = true;
            break;
        }
        const double slope =
            2.0 * p * state.q / ((p - 1.0) * state.grad_sq) * dir_sq;

        bool accepted = false;
        while (step_size > 1e-14) {
            ScalarField trial = u;
            trial.add_scaled(dir, -step_size);
            trial.abs_in_place();
            const double a_trial = h1_seminorm_sq(trial);
            if (a_trial > 0.0) {
                trial.scale(1.0 / std::sqrt(a_trial));
                FiberState next = FiberState::of(kernel, trial, p);
                if (next.q <= state.q - 1e-4 * step_size * slope) {
                    u = std::move(trial);
                    state = std::move(next);
                    step_size = std::min(1.25 * step_size, 1.0);
                    accepted = true;
                    break;
                }
            }
            step_size *= 0.5;
        }
        if (!accepted) break;  // Armijo floor; the polish below takes over
    }

    if (!converged && opts.polish) {
        // Fixed-point polish: u -> normalize(R[f(u)]) sharpens the critical
        // ray once the line search stalls near the minimum.
        double rel_grad = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 100; ++k) {
            ScalarField w = dst.poisson_solve(state.source);
            w.abs_in_place();
            const double a_w = h1_seminorm_sq(w);
            if (!(a_w > 0.0)) break;
            w.scale(1.0 / std::sqrt(a_w));
            FiberState next = FiberState::of(kernel, w, p);
            const ScalarField rf = dst.poisson_solve(next.source);
            ScalarField dir = w;
            dir.add_scaled(rf, -next.grad_sq / next.self_interaction);
            const double rg = std::sqrt(h1_seminorm_sq(dir) / next.grad_sq);
            if (rg >= rel_grad || next.q > state.q * (1.0 + 1e-12)) break;
            u = std::move(w);
            state = std::move(next);
            rel_grad = rg;
            if (rel_grad <= opts.tol_grad) {
                converged = true;
                break;
            }
        }
    }

    if (converged_out) *converged_out = converged;
    if (minimizer) *minimizer = u;
    return state.q;
}

DepthEstimate well_depth(const KernelTable& kernel, const ModelParams& params,
                         int n_starts, std::uint64_t seed, const DepthOptions& opts) {
    if (n_starts < 8) throw InvalidArgument("well_depth requires n_starts >= 8");
    const Rng base(seed);

    struct StartOutcome {
        double q = 0.0;
        bool converged = false;
        ScalarField field;
    };

    auto run_start = [&](int i) {
        Rng rng = base.fork(static_cast<std::uint64_t>(i));
        ScalarField start = random_smooth_field(kernel.domain(), rng, opts.max_mode);
        StartOutcome out{0.0, false, ScalarField(kernel.domain())};
        out.q = descend_mountain_level(kernel, params, std::move(start), opts,
                                       &out.converged, &out.field);
        return out;
    };


    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        opts.threads > 0 ? static_cast<unsigned>(opts.threads) : hw;
    std::vector<StartOutcome> outcomes(
        n_starts, StartOutcome{0.0, false, ScalarField(kernel.domain())});
    for (int batch = 0; batch < n_starts; batch += static_cast<int>(workers)) {
        const int batch_end = std::min(batch + static_cast<int>(workers), n_starts);
        std::vector<std::future<StartOutcome>> futures;
        for (int i = batch; i < batch_end; ++i) {
            futures.push_back(std::async(std::launch::async, run_start, i));
        }
        for (int i = batch; i < batch_end; ++i) {
            outcomes[i] = futures[i - batch].get();
        }
    }

    DepthEstimate est{.d_est = 0.0,
                      .starts = n_starts,
                      .converged = 0,
                      .spread_rel = 0.0,
                      .best_field = ScalarField(kernel.domain())};
    double qmin = std::numeric_limits<double>::infinity();
    double qmax = -std::numeric_limits<double>::infinity();
    for (const StartOutcome& o : outcomes) {
        if (!o.converged) continue;
        ++est.converged;
        if (o.q < qmin) {
            qmin = o.q;
            est.best_field = o.field;
        }
        qmax = std::max(qmax, o.q);
    }
    if (est.converged < 2) {
        throw NotConverged("well_depth: fewer than 2 starts converged");
    }
    est.d_est = qmin;
    est.spread_rel = (qmax - qmin) / qmin;
    return est;
}

double threshold_closed_form(const Domain& domain, const ModelParams& params, double a) {
    const double p = params.p;
    const double c = 2.0 * p / (p - 1.0) * std::pow(domain.volume(), p - 2.0) *
                     domain.diameter() * a;  // gamma^{n-2} = gamma at n = 3
    return std::pow(c, 1.0 / (2.0 * p));
}

ThresholdReport thresholds(const KernelTable& kernel, const ModelParams& params, double a,
                           int n_samples, std::uint64_t seed) {
    if (!(a > 0.0)) throw InvalidArgument("thresholds requires a positive energy level");
    if (n_samples < 1) throw InvalidArgument("thresholds requires n_samples >= 1");
    ThresholdReport rep;
    rep.a = a;
    rep.Lambda_closed = threshold_closed_form(kernel.domain(), params, a);

    Rng base(seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        Rng rng = base.fork(static_cast<std::uint64_t>(i));
        ScalarField u = random_smooth_field(kernel.domain(), rng, 3);
        // Generic random fields sit far above the well depth; a partial
        // fiber-energy descent (0..8 steps, varying per sample) spreads the
        // levels down toward d so low-energy caps still collect members.
        const int pre_steps = i % 9;
        if (pre_steps > 0) {
            DepthOptions pre;
            pre.max_iterations = pre_steps;
            pre.tol_grad = 0.0;
            pre.polish = false;
            descend_mountain_level(kernel, params, std::move(u), pre, nullptr, &u);
        }
        const double grad_sq = h1_seminorm_sq(u);
        const double d = interaction(kernel, u, u, params.p);
        if (!(d > 0.0) || !(grad_sq > 0.0)) continue;
        const double level = mountain_level(grad_sq, d, params.p);
        if (!(level < a)) continue;  // outside N_a
        const double t = fibering_scale(grad_sq, d, params.p);
        u.scale(t);
        const double norm = l2_norm(u);
        lo = std::min(lo, norm);
        hi = std::max(hi, norm);
        ++rep.sample_count;
    }
    if (rep.sample_count > 0) {
        rep.lambda_sample = lo;
        rep.Lambda_sample = hi;
    }
    return rep;
}

} // namespace nhf
