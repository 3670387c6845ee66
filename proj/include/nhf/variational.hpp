#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nhf/domain.hpp"
#include "nhf/potential.hpp"

namespace nhf {

struct StationaryOptions {
    int max_iterations = 5000;
    double tol_residual = 1e-9;   // target for ||r|| / ||lap_h u*||
    bool enforce_positive = true; // absolute-value projection each iterate
};

/// Ground state of -lap u = z(u)|u|^{p-2}u obtained by minimizing
/// Psi = ||grad u||^2 / 2 over the manifold {Phi(u) = 1},
/// Phi(u) = D(u,u)/(2p), then rescaling by the Lagrange multiplier:
/// u* = mu^{1/(2p-2)} w with mu = Psi(w)/p.
struct StationaryResult {
    ScalarField u_star;
    double mu = 0.0;
    double psi_min = 0.0;
    double residual_rel = 0.0;  // ||r(u*)|| / ||lap_h u*||
    double energy = 0.0;        // J(u*)
    double nehari = 0.0;        // I(u*)
    bool positive = false;      // strict interior positivity
    int iterations = 0;
    std::vector<double> psi_history;  // accepted-step values, nonincreasing

    std::string to_json(const std::string& field_ref) const;
};

StationaryResult stationary_solve(const KernelTable& kernel, const ModelParams& params,
                                  const ScalarField& seed,
                                  const StationaryOptions& opts = {});

/// Central cos^2 bump, the default seed for the stationary solver.
ScalarField default_stationary_seed(const Domain& domain);

struct DepthOptions {
    int max_iterations = 5000;
    double tol_grad = 1e-7;  // relative H1 norm of the constrained gradient
    int max_mode = 3;        // random start smoothness
    int threads = 0;         // 0 = hardware concurrency
    bool polish = true;      // fixed-point sharpening after the line search
};

/// Potential-well depth: the infimum of the fiber energy J(t*(u) u) over
/// nonzero fields, estimated by multi-start descent on the 0-homogeneous
/// mountain_level functional.
struct DepthEstimate {
    double d_est = 0.0;
    int starts = 0;
    int converged = 0;
    double spread_rel = 0.0;  // (max - min) / d_est over converged starts
    ScalarField best_field;

    std::string to_json(const std::string& field_ref) const;
};

DepthEstimate well_depth(const KernelTable& kernel, const ModelParams& params,
                         int n_starts, std::uint64_t seed, const DepthOptions& opts = {});

/// Single-start fiber-energy descent; exposed for the 0-homogeneity tests.
double descend_mountain_level(const KernelTable& kernel, const ModelParams& params,
                              ScalarField start, const DepthOptions& opts,
                              bool* converged = nullptr, ScalarField* minimizer = nullptr);

/// Norm thresholds over the energy-capped Nehari set N_a.
/// Lambda_closed = ((2p/(p-1)) |O|^{p-2} gamma^{n-2} a)^{1/(2p)} is the proved
/// upper bound for sup ||u||; the sampled min/max are one-sided estimates
/// (lambda_sample >= the true infimum, Lambda_sample <= the true supremum).
struct ThresholdReport {
    double a = 0.0;
    double Lambda_closed = 0.0;
    double lambda_sample = 0.0;
    double Lambda_sample = 0.0;
    int sample_count = 0;

    std::string to_json() const;
};

ThresholdReport thresholds(const KernelTable& kernel, const ModelParams& params, double a,
                           int n_samples, std::uint64_t seed);

/// The closed-form bound alone (also the right-hand side of the blow-up
/// criterion after replacing a by J(u0)).
double threshold_closed_form(const Domain& domain, const ModelParams& params, double a);

} // namespace nhf
