#include "nhf/construct.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "nhf/errors.hpp"
#include "nhf/functionals.hpp"
#include "nhf/summation.hpp"
#include "nhf/variational.hpp"

namespace nhf {

namespace {

std::string json_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::pair<ScalarField, ScalarField> dichotomy_pair(const KernelTable& kernel,
                                                   const ModelParams& params,
                                                   const ScalarField& u_star) {
    ScalarField u_plus = u_star;
    u_plus.scale(0.5);
    ScalarField u_minus = u_star;
    u_minus.scale(1.5);
    const FunctionalReport plus = evaluate(kernel, u_plus, params);
    const FunctionalReport minus = evaluate(kernel, u_minus, params);
    if (!(plus.nehari > 0.0)) {
        throw Infeasible("dichotomy_pair: 0.5 u* does not satisfy I > 0; "
                         "is u_star stationary?");
    }
    if (!(minus.nehari < 0.0)) {
        throw Infeasible("dichotomy_pair: 1.5 u* does not satisfy I < 0; "
                         "is u_star stationary?");
    }
    return {std::move(u_plus), std::move(u_minus)};
}

Lemma54Datum lemma54_datum(const KernelTable& kernel, const ModelParams& params,
                           const ScalarField& profile) {
    const double p = params.p;
    const Domain& dom = kernel.domain();
    if (!(profile.domain() == dom)) {
        throw DomainMismatch("lemma54_datum: profile does not match the kernel grid");
    }
    const double grad_sq = h1_seminorm_sq(profile);
    const double d_self = interaction(kernel, profile, profile, p);
    const double l2_sq = l2_norm_sq(profile);
    if (!(grad_sq > 0.0) || !(d_self > 0.0)) {
        throw InvalidArgument("lemma54_datum: profile must be nonzero");
    }
    const double c = threshold_closed_form(dom, params, 1.0);  // C^{1/(2p)} at a = 1
    const double big_c = std::pow(c, 2.0 * p);                 // (2p/(p-1)) |O|^{p-2} gamma

    // g(s) = ||s u||^{2p} - C J(s u)
    //      = s^{2p} (||u||^{2p} + C B/(2p)) - C A s^2 / 2,
    // negative for small s, positive for large s, one sign change.
    auto g = [&](double s) {
        const double s2p = std::pow(s, 2.0 * p);
        return s2p * (std::pow(l2_sq, p) + big_c * d_self / (2.0 * p)) -
               big_c * grad_sq * 0.5 * s * s;
    };

    double lo = 1e-8, hi = 1.0;
    while (g(lo) >= 0.0 && lo > 1e-300) lo *= 0.5;
    if (g(lo) >= 0.0) throw Infeasible("lemma54_datum: no negative bracket endpoint");
    int guard = 0;
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 2000) {
            throw Infeasible("lemma54_datum: criterion unreachable within scale bounds");
        }
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    // Land just inside the criterion region (g >= 0), within 1% of equality.
    const double s = hi * (1.0 + 1e-9);

    Lemma54Datum datum{profile};
    datum.field.scale(s);
    datum.scale = s;
    const FunctionalReport rep = evaluate(kernel, datum.field, params);
    datum.energy = rep.energy;
    datum.nehari = rep.nehari;
    datum.criterion_lhs = std::pow(rep.l2_sq, p);
    datum.criterion_rhs = big_c * rep.energy;
    if (datum.criterion_lhs < datum.criterion_rhs) {
        throw Infeasible("lemma54_datum: scaled field misses the criterion");
    }
    if (std::abs(datum.criterion_lhs - datum.criterion_rhs) >
        0.01 * std::abs(datum.criterion_lhs)) {
        throw Infeasible("lemma54_datum: could not land within 1% of the boundary");
    }
    if (!(datum.nehari < 0.0)) {
        throw Infeasible("lemma54_datum: criterion holds but I >= 0 (unexpected)");
    }
    return datum;
}

std::string BlowupRecipe::to_json(const std::string& u_ref, const std::string& v_ref,
                                  const std::string& w_ref) const {
    std::ostringstream os;
    os << "{\"M\":" << json_num(target_energy) << ",\"alpha\":" << json_num(alpha)
       << ",\"c0\":" << json_num(c0) << ",\"kappa\":" << json_num(kappa)
       << ",\"J_check\":" << json_num(energy) << ",\"I_check\":" << json_num(nehari)
       << ",\"criterion_lhs\":" << json_num(criterion_lhs)
       << ",\"criterion_rhs\":" << json_num(criterion_rhs)
       << ",\"omega1_hi\":" << omega1_hi << ",\"omega2_lo\":" << omega2_lo
       << ",\"fields\":{\"u_M\":\"" << u_ref << "\",\"v\":\"" << v_ref << "\",\"w\":\""
       << w_ref << "\"}}";
    return os.str();
}

namespace {

// Squared-sine bump filling the x-slab [0, (hi+2)h) x (0,L)^2; support is
// exactly the nodes ix <= hi.
ScalarField slab_bump_low(const Domain& dom, int hi) {
    const int m = dom.resolution();
    const double x_end = (hi + 2) * dom.spacing();
    const auto& len = dom.lengths();
    ScalarField v(dom);
    for (int ix = 0; ix <= hi; ++ix) {
        const double sx = std::sin(std::numbers::pi * dom.coord(ix) / x_end);
        for (int iy = 0; iy < m; ++iy) {
            const double sy = std::sin(std::numbers::pi * dom.coord(iy) / len[1]);
            for (int iz = 0; iz < m; ++iz) {
                const double sz = std::sin(std::numbers::pi * dom.coord(iz) / len[2]);
                v.at(ix, iy, iz) = sx * sx * sy * sy * sz * sz;
            }
        }
    }
    return v;
}

// Oscillatory unit-sup block in the x-slab (lo*h, L): squared-sine envelope
// times cos(kappa pi y / Ly). Oscillating along y rather than across the
// thin slab leaves the full m nodes per axis to resolve the frequency.
ScalarField slab_oscillator(const Domain& dom, int lo, double kappa) {
    const int m = dom.resolution();
    const double x_lo = lo * dom.spacing();
    const double width = dom.lengths()[0] - x_lo;
    const auto& len = dom.lengths();
    ScalarField w(dom);
    for (int ix = lo; ix < m; ++ix) {
        const double sx = (dom.coord(ix) - x_lo) / width;
        const double env_x = std::sin(std::numbers::pi * sx);
        for (int iy = 0; iy < m; ++iy) {
            const double sy = std::sin(std::numbers::pi * dom.coord(iy) / len[1]);
            const double osc =
                std::cos(kappa * std::numbers::pi * dom.coord(iy) / len[1]);
            for (int iz = 0; iz < m; ++iz) {
                const double sz = std::sin(std::numbers::pi * dom.coord(iz) / len[2]);
                w.at(ix, iy, iz) = env_x * env_x * sy * sy * osc * sz * sz;
            }
        }
    }
    return w;
}

} // namespace

BlowupRecipe high_energy_datum(const KernelTable& kernel, const ModelParams& params,
                               double target_energy, const ConstructOptions& opts) {
    const double p = params.p;
    const double m_target = target_energy;
    if (!(m_target > 0.0)) {
        throw InvalidArgument("high_energy_datum requires a positive target energy");
    }
    if (!params.in_high_energy_range()) {
        throw InvalidArgument("high_energy_datum requires 2 < p < 3");
    }
    const Domain& dom = kernel.domain();
    const int m = dom.resolution();
    if (m < 8) throw Infeasible("high_energy_datum: grid too coarse for disjoint slabs");

    BlowupRecipe recipe{.target_energy = m_target,
                        .p = p,
                        .v = ScalarField(dom),
                        .w = ScalarField(dom),
                        .u_m = ScalarField(dom),
                        .bracket_log = {}};
    // Disjoint x-slabs with >= 2h support separation.
    recipe.omega1_hi = std::max(0, static_cast<int>(0.40 * (m - 1)));
    recipe.omega2_lo = recipe.omega1_hi + 3;
    if (recipe.omega2_lo >= m - 1) {
        throw Infeasible("high_energy_datum: grid too coarse for disjoint slabs");
    }

    recipe.v = slab_bump_low(dom, recipe.omega1_hi);
    const double grad_v = h1_seminorm_sq(recipe.v);
    const double d_v = interaction(kernel, recipe.v, recipe.v, p);
    const double l2_v = l2_norm_sq(recipe.v);
    const double big_c = std::pow(threshold_closed_form(dom, params, 1.0), 2.0 * p);

    // alpha: both J(alpha v) <= 0 and ||alpha v||^{2p} >= C M.
    const double alpha_energy = std::pow(p * grad_v / d_v, 1.0 / (2.0 * p - 2.0));
    const double alpha_mass =
        std::pow(big_c * m_target / std::pow(l2_v, p), 1.0 / (2.0 * p));
    recipe.alpha = std::max(alpha_energy, alpha_mass) * (1.0 + 1e-7);

    ScalarField alpha_v = recipe.v;
    alpha_v.scale(recipe.alpha);
    const double j_alpha_v = 0.5 * recipe.alpha * recipe.alpha * grad_v -
                             std::pow(recipe.alpha, 2.0 * p) * d_v / (2.0 * p);
    if (!(j_alpha_v <= 0.0)) {
        throw Infeasible("high_energy_datum: J(alpha v) > 0 after scaling");
    }
    const double target_x = m_target - j_alpha_v;  // X(w) must hit this

    // |alpha v|^p, reused by every cross-term evaluation.
    std::vector<double> av_pow(alpha_v.size());
    for (std::size_t i = 0; i < alpha_v.size(); ++i) {
        av_pow[i] = std::pow(std::abs(alpha_v[i]), p);
    }
    const double h = dom.spacing();
    const double h3 = h * h * h;

    auto x_of = [&](const ScalarField& w) {
        const ScalarField z = riesz_fast(kernel, w, p);
        CompensatedSum self_acc, cross_acc;
        for (std::size_t i = 0; i < w.size(); ++i) {
            self_acc.add(z[i] * std::pow(std::abs(w[i]), p));
            cross_acc.add(z[i] * av_pow[i]);
        }
        const double d_ww = h3 * self_acc.value();
        const double d_cross = h3 * cross_acc.value();
        return 0.5 * h1_seminorm_sq(w) - d_ww / (2.0 * p) - d_cross / p;
    };

    // Aliasing limit for the oscillation: about one node per half-wave
    // along the y axis.
    const double kappa_max = static_cast<double>(m);

    double c0 = opts.c0_init;
    bool found = false;
    double kappa_lo = 0.0, kappa_hi = 0.0, x_lo = 0.0, x_hi = 0.0;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt, c0 *= 2.0) {
        ScalarField w0 = slab_oscillator(dom, recipe.omega2_lo, 0.0);
        w0.scale(c0);
        const double x0 = x_of(w0);
        if (x0 >= target_x) continue;  // X must start below the target
        double lo = 0.0;
        double x_at_lo = x0;
        double hi = 1.0;
        bool bracketed = false;
        while (true) {
            ScalarField wk = slab_oscillator(dom, recipe.omega2_lo, hi);
            wk.scale(c0);
            const double x_at_hi = x_of(wk);
            if (x_at_hi >= target_x) {
                bracketed = true;
                kappa_lo = lo;
                x_lo = x_at_lo;
                kappa_hi = hi;
                x_hi = x_at_hi;
                break;
            }
            if (hi >= kappa_max) break;  // saturated below target; raise c0
            lo = hi;
            x_at_lo = x_at_hi;
            hi = std::min(2.0 * hi, kappa_max);
        }
        if (!bracketed) continue;
        found = true;
        break;
    }
    if (!found) {
        throw Infeasible("high_energy_datum: no frequency bracket after c0 retries; "
                         "resolution too coarse for this target energy");
    }
    recipe.c0 = c0;

    // Bisect three decades past the certification tolerance.
    const double x_tol = 1e-3 * opts.energy_rel_tol * std::max(1.0, m_target);
    double kappa_mid = 0.5 * (kappa_lo + kappa_hi);
    double x_mid = 0.0;
    for (int i = 0; i < 200; ++i) {
        recipe.bracket_log.push_back({kappa_lo, kappa_hi, x_lo - target_x,
                                      x_hi - target_x});
        kappa_mid = 0.5 * (kappa_lo + kappa_hi);
        ScalarField wk = slab_oscillator(dom, recipe.omega2_lo, kappa_mid);
        wk.scale(c0);
        x_mid = x_of(wk);
        if (std::abs(x_mid - target_x) <= x_tol) break;
        if (x_mid < target_x) {
            kappa_lo = kappa_mid;
            x_lo = x_mid;
        } else {
            kappa_hi = kappa_mid;
            x_hi = x_mid;
        }
    }
    if (std::abs(x_mid - target_x) > x_tol) {
        throw Infeasible("high_energy_datum: frequency bisection did not meet the "
                         "energy tolerance");
    }
    recipe.kappa = kappa_mid;
    recipe.w = slab_oscillator(dom, recipe.omega2_lo, kappa_mid);
    recipe.w.scale(c0);

    recipe.u_m = alpha_v;
    recipe.u_m.add_scaled(recipe.w, 1.0);

    const FunctionalReport rep = evaluate(kernel, recipe.u_m, params);
    recipe.energy = rep.energy;
    recipe.nehari = rep.nehari;
    recipe.criterion_lhs = std::pow(rep.l2_sq, p);
    recipe.criterion_rhs = big_c * rep.energy;

    // Certification.
    if (std::abs(recipe.energy - m_target) > opts.energy_rel_tol * m_target) {
        throw Infeasible("high_energy_datum: assembled J(u_M) misses M");
    }
    if (!(recipe.nehari < 0.0)) {
        throw Infeasible("high_energy_datum: I(u_M) >= 0 after assembly");
    }
    if (recipe.criterion_lhs < recipe.criterion_rhs) {
        throw Infeasible("high_energy_datum: blow-up criterion violated after assembly");
    }
    return recipe;
}

} // namespace nhf
