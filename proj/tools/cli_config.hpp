#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace nhfcli {

using ordered_json = nlohmann::ordered_json;

struct BumpSpec {
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double radius = 0.3;
    double amplitude = 1.0;
    std::string profile = "cos2";
};

struct InitialDataSpec {
    // one of: bumps | stationary_scaled | lemma54 | theorem12
    std::string kind = "bumps";
    std::vector<BumpSpec> bumps{BumpSpec{}};
    double scale = 1.0;        // stationary_scaled
    double target_energy = 0;  // theorem12 M
};

struct FlowSpec {
    double dt_init = 1e-3;
    double dt_min = 1e-9;
    double dt_max = 5e-2;
    double cfl_c = 0.1;
    double t_horizon = 10.0;
    double blowup_sup_threshold = 1e8;
    double decay_l2_threshold = 1e-8;
    int trace_stride = 1;
    bool energy_backtrack = true;
};

struct SweepSpec {
    double scale_min = 0.25;
    double scale_max = 2.0;
    int count = 16;
};

struct StationarySpec {
    double tol_residual = 1e-9;
    int max_iterations = 5000;
};

struct DepthSpec {
    int n_starts = 8;
    // Optional threshold sampling at a = a_over_d * d_est.
    double thresholds_a_over_d = 0.0;  // 0 disables
    int thresholds_samples = 64;
};

/// Whole-experiment configuration; round-trips losslessly through JSON.
struct ExperimentConfig {
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    int m = 31;
    double p = 2.5;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    FlowSpec flow;
    InitialDataSpec initial_data;
    SweepSpec sweep;
    StationarySpec stationary;
    DepthSpec depth;

    static ExperimentConfig from_json(const ordered_json& j);
    static ExperimentConfig from_file(const std::string& path);
    ordered_json to_json() const;

    /// Cross-field checks (exponent ranges vs initial-data kind, sweep grid
    /// nonempty, positive geometry). Throws std::invalid_argument.
    void validate() const;
};

} // namespace nhfcli
