#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nhf/domain.hpp"
#include "nhf/functionals.hpp"
#include "nhf/potential.hpp"
#include "nhf/sine_transform.hpp"

namespace nhf {

/// Time-stepping controls. The step size follows
/// dt = clamp(cfl_c / (1 + sup|f(u)|), dt_min, dt_max); with
/// energy_backtrack on, a step that raises J beyond the per-step tolerance
/// is rejected and dt halved.
struct FlowConfig {
    double dt_init = 1e-3;
    double dt_min = 1e-9;
    double dt_max = 5e-2;
    double cfl_c = 0.1;
    double t_horizon = 10.0;
    double blowup_sup_threshold = 1e8;
    double decay_l2_threshold = 1e-8;
    int trace_stride = 1;
    bool energy_backtrack = true;

    void validate() const;
};

struct TraceRow {
    std::int64_t step = 0;
    double t = 0.0;
    double dt = 0.0;
    double l2 = 0.0;      // ||u||
    double h1 = 0.0;      // ||grad u||
    double sup = 0.0;     // ||u||_inf
    double energy = 0.0;  // J
    double nehari = 0.0;  // I
    double ut_l2 = 0.0;   // ||(u_k - u_{k-1}) / dt||, 0 on the first row
};

/// Time series of an accepted-step run. Serializes to CSV with the fixed
/// header `step,t,dt,l2,h1,sup,J,I,ut_l2` at 17 significant digits.
struct FlowTrace {
    std::vector<TraceRow> rows;

    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;
    static FlowTrace read_csv(std::istream& is);
};

enum class Verdict { GlobalDecay, BlowUp, Undetermined };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Outcome of a run, with the threshold that fired and the post-run scans.
/// Serializes to a JSON object with keys verdict,t_final,certificate,bounds.
struct ClassificationResult {
    Verdict verdict = Verdict::Undetermined;
    double t_final = 0.0;
    std::string certificate;     // decay_threshold | sup_threshold | dt_collapse | horizon
    bool prop41_l2_bound = true; // (p-1) lambda1 ||u||^2 <= 2p J(u0) row-wise
    bool i_sign_persisted = true;

    std::string to_json() const;
};

struct FlowResult {
    FlowTrace trace;
    ClassificationResult classification;
    ScalarField final_field;
};

/// One IMEX step: (I - dt lap_h) u+ = u + dt f(u), the diffusion solved
/// exactly by sine diagonalization.
ScalarField step(const KernelTable& kernel, const SineTransform& dst,
                 const ScalarField& u, double dt, const ModelParams& params);

/// Advances from u0 with adaptive dt until a verdict threshold fires or the
/// horizon is reached. Undetermined is a result, not an error.
FlowResult run(const KernelTable& kernel, const ScalarField& u0,
               const ModelParams& params, const FlowConfig& config);

/// Discrete checks of dJ/dt = -||u_t||^2 and d||u||^2/dt = -2I between
/// consecutive trace rows. Defects are first order in dt.
struct IdentityReport {
    double max_energy_defect = 0.0;   // max |dJ/dt + ut_l2^2|
    double max_l2_defect = 0.0;       // max |d(l2^2)/dt + 2 I_mid|
    double max_energy_defect_rel = 0.0;
    double max_l2_defect_rel = 0.0;
};

IdentityReport verify_identities(const FlowTrace& trace);

/// Row-wise scan of 0 <= J <= J0 and (p-1) lambda1 ||u||^2 <= 2p J0 on a
/// globally decaying trace; if p <= 5/3 also reports sup_t ||grad u||.
struct BoundsReport {
    bool pass = true;
    std::int64_t first_bad_row = -1;
    std::string violation;
    double max_h1 = 0.0;
};

BoundsReport check_bounds(const FlowTrace& trace, const ModelParams& params, double energy0,
                          double lambda1);

} // namespace nhf
