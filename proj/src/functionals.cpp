#include "nhf/functionals.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

#include "nhf/errors.hpp"
#include "nhf/summation.hpp"

namespace nhf {

namespace {

inline double abs_pow(double v, double p) {
    if (p == 2.0) return v * v;
    if (p == 2.5) {
        const double a = std::abs(v);
        return v * v * std::sqrt(a);
    }
    return std::pow(std::abs(v), p);
}

} // namespace

FunctionalReport evaluate_with_potential(const ScalarField& u, const ScalarField& z,
                                         const ModelParams& params) {
    require_same_domain(u, z, "evaluate_with_potential");
    FunctionalReport r;
    r.grad_sq = h1_seminorm_sq(u);
    r.l2_sq = l2_norm_sq(u);
    {
        CompensatedSum acc;
        for (std::size_t i = 0; i < u.size(); ++i) acc.add(z[i] * abs_pow(u[i], params.p));
        const double h = u.domain().spacing();
        r.self_interaction = h * h * h * acc.value();
    }
    r.sup = sup_norm(u);
    r.energy = 0.5 * r.grad_sq - r.self_interaction / (2.0 * params.p);
    r.nehari = r.grad_sq - r.self_interaction;
    return r;
}

FunctionalReport evaluate(const KernelTable& kernel, const ScalarField& u,
                          const ModelParams& params) {
    return evaluate_with_potential(u, riesz_fast(kernel, u, params.p), params);
}

ScalarField source_from_potential(const ScalarField& u, const ScalarField& z,
                                  const ModelParams& params) {
    require_same_domain(u, z, "source_from_potential");
    ScalarField f = z;
    const double p = params.p;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        if (p == 2.0) {
            f[i] *= v;
        } else if (p == 2.5) {
            f[i] *= std::sqrt(std::abs(v)) * v;
        } else {
            f[i] *= v == 0.0 ? 0.0 : std::pow(std::abs(v), p - 2.0) * v;
        }
    }
    return f;
}

ScalarField nonlocal_source(const KernelTable& kernel, const ScalarField& u,
                            const ModelParams& params) {
    return source_from_potential(u, riesz_fast(kernel, u, params.p), params);
}

ScalarField residual(const KernelTable& kernel, const ScalarField& u,
                     const ModelParams& params) {
    ScalarField r = laplacian(u);
    const ScalarField f = nonlocal_source(kernel, u, params);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -r[i] - f[i];
    return r;
}

double fibering_scale(double grad_sq, double self_interaction, double p) {
    if (!(self_interaction > 0.0)) {
        throw InvalidArgument("fibering scale undefined: D(u,u) must be positive");
    }
    return std::pow(grad_sq / self_interaction, 1.0 / (2.0 * p - 2.0));
}

double fibering_t_star(const KernelTable& kernel, const ScalarField& u,
                       const ModelParams& params) {
    const double grad_sq = h1_seminorm_sq(u);
    const double d = interaction(kernel, u, u, params.p);
    if (!(grad_sq > 0.0)) {
        throw InvalidArgument("fibering scale undefined for the zero field");
    }
    return fibering_scale(grad_sq, d, params.p);
}

double mountain_level(double grad_sq, double self_interaction, double p) {
    if (!(self_interaction > 0.0)) {
        throw InvalidArgument("fiber energy undefined: D(u,u) must be positive");
    }
    const double e = 1.0 / (p - 1.0);
    return (p - 1.0) / (2.0 * p) * std::pow(grad_sq, p * e) /
           std::pow(self_interaction, e);
}

double mountain_level(const KernelTable& kernel, const ScalarField& u,
                      const ModelParams& params) {
    const double grad_sq = h1_seminorm_sq(u);
    const double d = interaction(kernel, u, u, params.p);
    return mountain_level(grad_sq, d, params.p);
}

double first_eigenvalue(const Domain& domain) {
    const double h = domain.spacing();
    double lambda = 0.0;
    for (double L : domain.lengths()) {
        const double s = std::sin(std::numbers::pi * h / (2.0 * L));
        lambda += 4.0 / (h * h) * s * s;
    }
    return lambda;
}

} // namespace nhf
