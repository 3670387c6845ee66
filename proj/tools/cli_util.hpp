#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhf/nhflow.h"

#include "cli_config.hpp"

namespace nhfcli {

/// Exit codes: 0 success, 1 internal/self-test failure, 2 invalid
/// config/arguments, 3 solver non-convergence.
struct CliError : std::runtime_error {
    int exit_code;
    CliError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

inline int exit_code_for(nhf_status s) {
    switch (s) {
        case NHF_OK: return 0;
        case NHF_ERR_INVALID_ARGUMENT:
        case NHF_ERR_DOMAIN_MISMATCH: return 2;
        case NHF_ERR_NOT_CONVERGED:
        case NHF_ERR_INFEASIBLE: return 3;
        default: return 1;
    }
}

inline void check(nhf_status s, const std::string& where) {
    if (s != NHF_OK) {
        throw CliError(exit_code_for(s), where + ": " + nhf_last_error());
    }
}

struct DomainDeleter {
    void operator()(nhf_domain* p) const { nhf_domain_free(p); }
};
struct FieldDeleter {
    void operator()(nhf_field* p) const { nhf_field_free(p); }
};
struct ProblemDeleter {
    void operator()(nhf_problem* p) const { nhf_problem_free(p); }
};
struct FlowDeleter {
    void operator()(nhf_flow_result* p) const { nhf_flow_result_free(p); }
};
struct StationaryDeleter {
    void operator()(nhf_stationary_result* p) const { nhf_stationary_result_free(p); }
};
struct DepthDeleter {
    void operator()(nhf_depth_result* p) const { nhf_depth_result_free(p); }
};
struct RecipeDeleter {
    void operator()(nhf_recipe* p) const { nhf_recipe_free(p); }
};

using DomainPtr = std::unique_ptr<nhf_domain, DomainDeleter>;
using FieldPtr = std::unique_ptr<nhf_field, FieldDeleter>;
using ProblemPtr = std::unique_ptr<nhf_problem, ProblemDeleter>;
using FlowPtr = std::unique_ptr<nhf_flow_result, FlowDeleter>;
using StationaryPtr = std::unique_ptr<nhf_stationary_result, StationaryDeleter>;
using DepthPtr = std::unique_ptr<nhf_depth_result, DepthDeleter>;
using RecipePtr = std::unique_ptr<nhf_recipe, RecipeDeleter>;

DomainPtr make_domain(const ExperimentConfig& cfg);
ProblemPtr make_problem(const nhf_domain* dom, double p);
FieldPtr make_bump_field(const nhf_domain* dom, const std::vector<BumpSpec>& bumps);
FieldPtr clone_scaled(const nhf_field* f, double scale);

nhf_flow_config flow_config_of(const ExperimentConfig& cfg);

/// Full command context assembled by main().
struct CliContext {
    ExperimentConfig cfg;
    std::string out_dir;
    int threads = 0;
    bool corrupt_kernel = false;  // self-test negative hook
};

int cmd_simulate(const CliContext& ctx);
int cmd_stationary(const CliContext& ctx);
int cmd_depth(const CliContext& ctx);
int cmd_construct(const CliContext& ctx);
int cmd_sweep(const CliContext& ctx);
int cmd_selftest(const CliContext& ctx);

} // namespace nhfcli
