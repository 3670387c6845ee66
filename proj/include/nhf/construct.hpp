#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nhf/domain.hpp"
#include "nhf/potential.hpp"

namespace nhf {

/// Fiber-scaled pair around a stationary solution u*: 0.5 u* has I > 0 and
/// J < d, 1.5 u* has I < 0 and J <= d. Both signs are verified before return.
std::pair<ScalarField, ScalarField> dichotomy_pair(const KernelTable& kernel,
                                                   const ModelParams& params,
                                                   const ScalarField& u_star);

/// Initial datum on the boundary of the blow-up criterion region
/// ||u||^{2p} >= (2p/(p-1)) |O|^{p-2} gamma^{n-2} J(u), found by scaling a
/// profile. The criterion forces I < 0.
struct Lemma54Datum {
    ScalarField field;
    double scale = 0.0;
    double criterion_lhs = 0.0;  // ||u||^{2p}
    double criterion_rhs = 0.0;  // (2p/(p-1)) |O|^{p-2} gamma J(u)
    double energy = 0.0;
    double nehari = 0.0;
};

Lemma54Datum lemma54_datum(const KernelTable& kernel, const ModelParams& params,
                           const ScalarField& profile);

struct ConstructOptions {
    double c0_init = 1.0;          // sup-norm cap of the oscillatory block
    int max_retries = 8;           // c0 doublings when the frequency bracket fails
    double energy_rel_tol = 1e-6;  // certified |J(u_M) - M| / M bound
};

/// High-energy blow-up datum u_M = alpha v + w: v a squared-sine bump in a
/// subbox, alpha large enough that J(alpha v) <= 0 and the mass criterion
/// holds at level M, and w an oscillatory field in a disjoint subbox whose
/// frequency is tuned by bisection so that J(u_M) = M exactly.
struct BlowupRecipe {
    double target_energy = 0.0;  // M
    double p = 0.0;
    double alpha = 0.0;
    double c0 = 0.0;
    double kappa = 0.0;
    ScalarField v;
    ScalarField w;
    ScalarField u_m;
    double energy = 0.0;         // J(u_M), the recipe's J_check
    double nehari = 0.0;         // I(u_M), the recipe's I_check
    double criterion_lhs = 0.0;  // ||u_M||^{2p}
    double criterion_rhs = 0.0;  // (2p/(p-1)) |O|^{p-2} gamma J(u_M)
    // Node index ranges (inclusive) of the two x-axis support slabs.
    int omega1_hi = 0;
    int omega2_lo = 0;
    // Bisection log for the bracket-invariant check: (kappa_lo, kappa_hi,
    // X(lo)-T, X(hi)-T) per iteration.
    struct BracketStep {
        double lo, hi, f_lo, f_hi;
    };
    std::vector<BracketStep> bracket_log;

    std::string to_json(const std::string& u_ref, const std::string& v_ref,
                        const std::string& w_ref) const;
};

BlowupRecipe high_energy_datum(const KernelTable& kernel, const ModelParams& params,
                               double target_energy, const ConstructOptions& opts = {});

} // namespace nhf
