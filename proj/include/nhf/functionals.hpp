#pragma once

#include "nhf/domain.hpp"
#include "nhf/potential.hpp"

namespace nhf {

/// One-stop evaluation of the variational quantities of a field:
///   energy   J(u) = grad_sq/2 - D/(2p)
///   nehari   I(u) = grad_sq - D
/// with D = interaction(u,u). The identity
///   J = I/(2p) + (1/2 - 1/(2p)) grad_sq
/// holds by construction and is asserted by the tests.
struct FunctionalReport {
    double energy = 0.0;     // J
    double nehari = 0.0;     // I
    double grad_sq = 0.0;    // ||grad u||^2
    double l2_sq = 0.0;      // ||u||^2
    double self_interaction = 0.0;  // D(u,u)
    double sup = 0.0;        // ||u||_inf
};

FunctionalReport evaluate(const KernelTable& kernel, const ScalarField& u,
                          const ModelParams& params);

/// Same report from a precomputed potential z = riesz(u); saves the
/// transform when both the report and the source are needed for one state.
FunctionalReport evaluate_with_potential(const ScalarField& u, const ScalarField& z,
                                         const ModelParams& params);

/// Nonlocal source f(u) = z(u) |u|^{p-2} u. The flow's reaction term.
ScalarField nonlocal_source(const KernelTable& kernel, const ScalarField& u,
                            const ModelParams& params);

/// Source from a precomputed potential.
ScalarField source_from_potential(const ScalarField& u, const ScalarField& z,
                                  const ModelParams& params);

/// Strong-form residual r = -lap_h(u) - f(u). It is the L2 gradient of J:
/// (J(u + e*phi) - J(u - e*phi)) / (2e) -> h^3 <r, phi> as e -> 0,
/// and vanishes exactly on stationary solutions.
ScalarField residual(const KernelTable& kernel, const ScalarField& u,
                     const ModelParams& params);

/// Critical scale of the fiber map t -> J(tu) from precomputed quantities:
/// t* = (grad_sq / D)^(1/(2p-2)).
double fibering_scale(double grad_sq, double self_interaction, double p);

/// t*(u); requires u != 0 with D(u,u) > 0. Afterwards I(t* u) = 0.
double fibering_t_star(const KernelTable& kernel, const ScalarField& u,
                       const ModelParams& params);

/// Fiber peak J(t*(u) u) in closed form:
/// ((p-1)/(2p)) * grad_sq^{p/(p-1)} / D^{1/(p-1)}. Invariant under u -> c*u.
double mountain_level(const KernelTable& kernel, const ScalarField& u,
                      const ModelParams& params);
double mountain_level(double grad_sq, double self_interaction, double p);

/// First eigenvalue of the discrete Dirichlet Laplacian on the box,
/// sum over axes of (4/h^2) sin^2(pi h / (2 L_axis)).
double first_eigenvalue(const Domain& domain);

} // namespace nhf
