#include "cli_config.hpp"

#include <fstream>
#include <stdexcept>

namespace nhfcli {

namespace {

template <typename T>
void read_if(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const ordered_json& j) {
    ExperimentConfig cfg;
    if (j.contains("domain")) {
        const auto& d = j.at("domain");
        if (d.contains("lengths")) {
            const auto v = d.at("lengths").get<std::vector<double>>();
            if (v.size() != 3) throw std::invalid_argument("domain.lengths needs 3 entries");
            cfg.lengths = {v[0], v[1], v[2]};
        }
        read_if(d, "m", cfg.m);
    }
    read_if(j, "p", cfg.p);
    read_if(j, "seed", cfg.seed);
    read_if(j, "output_dir", cfg.output_dir);

    if (j.contains("flow")) {
        const auto& f = j.at("flow");
        read_if(f, "dt_init", cfg.flow.dt_init);
        read_if(f, "dt_min", cfg.flow.dt_min);
        read_if(f, "dt_max", cfg.flow.dt_max);
        read_if(f, "cfl_c", cfg.flow.cfl_c);
        read_if(f, "t_horizon", cfg.flow.t_horizon);
        read_if(f, "blowup_sup_threshold", cfg.flow.blowup_sup_threshold);
        read_if(f, "decay_l2_threshold", cfg.flow.decay_l2_threshold);
        read_if(f, "trace_stride", cfg.flow.trace_stride);
        read_if(f, "energy_backtrack", cfg.flow.energy_backtrack);
    }
    if (j.contains("initial_data")) {
        const auto& d = j.at("initial_data");
        read_if(d, "kind", cfg.initial_data.kind);
        if (d.contains("bumps")) {
            cfg.initial_data.bumps.clear();
            for (const auto& b : d.at("bumps")) {
                BumpSpec spec;
                if (b.contains("center")) {
                    const auto c = b.at("center").get<std::vector<double>>();
                    if (c.size() != 3) throw std::invalid_argument("bump center needs 3 entries");
                    spec.center = {c[0], c[1], c[2]};
                }
                read_if(b, "radius", spec.radius);
                read_if(b, "amplitude", spec.amplitude);
                read_if(b, "profile", spec.profile);
                cfg.initial_data.bumps.push_back(spec);
            }
        }
        read_if(d, "scale", cfg.initial_data.scale);
        read_if(d, "M", cfg.initial_data.target_energy);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        read_if(s, "scale_min", cfg.sweep.scale_min);
        read_if(s, "scale_max", cfg.sweep.scale_max);
        read_if(s, "count", cfg.sweep.count);
    }
    if (j.contains("stationary")) {
        const auto& s = j.at("stationary");
        read_if(s, "tol_residual", cfg.stationary.tol_residual);
        read_if(s, "max_iterations", cfg.stationary.max_iterations);
    }
    if (j.contains("depth")) {
        const auto& d = j.at("depth");
        read_if(d, "n_starts", cfg.depth.n_starts);
        read_if(d, "thresholds_a_over_d", cfg.depth.thresholds_a_over_d);
        read_if(d, "thresholds_samples", cfg.depth.thresholds_samples);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    ordered_json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

ordered_json ExperimentConfig::to_json() const {
    ordered_json j;
    j["domain"] = {{"lengths", {lengths[0], lengths[1], lengths[2]}}, {"m", m}};
    j["p"] = p;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["flow"] = {{"dt_init", flow.dt_init},
                 {"dt_min", flow.dt_min},
                 {"dt_max", flow.dt_max},
                 {"cfl_c", flow.cfl_c},
                 {"t_horizon", flow.t_horizon},
                 {"blowup_sup_threshold", flow.blowup_sup_threshold},
                 {"decay_l2_threshold", flow.decay_l2_threshold},
                 {"trace_stride", flow.trace_stride},
                 {"energy_backtrack", flow.energy_backtrack}};
    ordered_json init;
    init["kind"] = initial_data.kind;
    init["bumps"] = ordered_json::array();
    for (const BumpSpec& b : initial_data.bumps) {
        init["bumps"].push_back({{"center", {b.center[0], b.center[1], b.center[2]}},
                                 {"radius", b.radius},
                                 {"amplitude", b.amplitude},
                                 {"profile", b.profile}});
    }
    init["scale"] = initial_data.scale;
    init["M"] = initial_data.target_energy;
    j["initial_data"] = init;
    j["sweep"] = {{"scale_min", sweep.scale_min},
                  {"scale_max", sweep.scale_max},
                  {"count", sweep.count}};
    j["stationary"] = {{"tol_residual", stationary.tol_residual},
                       {"max_iterations", stationary.max_iterations}};
    j["depth"] = {{"n_starts", depth.n_starts},
                  {"thresholds_a_over_d", depth.thresholds_a_over_d},
                  {"thresholds_samples", depth.thresholds_samples}};
    return j;
}

void ExperimentConfig::validate() const {
    for (double l : lengths) {
        if (!(l > 0.0)) throw std::invalid_argument("domain lengths must be positive");
    }
    if (m < 1) throw std::invalid_argument("domain.m must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("p must satisfy p > 1");
    const std::string& kind = initial_data.kind;
    if (kind != "bumps" && kind != "stationary_scaled" && kind != "lemma54" &&
        kind != "theorem12") {
        throw std::invalid_argument("unknown initial_data.kind: " + kind);
    }
    if (kind == "theorem12") {
        if (!(2.0 < p && p < 3.0)) {
            throw std::invalid_argument("theorem12 initial data requires 2 < p < 3");
        }
        if (!(initial_data.target_energy > 0.0)) {
            throw std::invalid_argument("theorem12 initial data requires M > 0");
        }
    }
    if ((kind == "stationary_scaled" || kind == "lemma54") && !(p < 3.0)) {
        throw std::invalid_argument("stationary-based initial data requires p < 3");
    }
    if (kind == "bumps" && initial_data.bumps.empty()) {
        throw std::invalid_argument("bumps initial data needs at least one bump");
    }
    if (sweep.count < 1) throw std::invalid_argument("sweep.count must be >= 1");
    if (!(sweep.scale_min <= sweep.scale_max)) {
        throw std::invalid_argument("sweep scale range is empty");
    }
    if (depth.n_starts < 8) throw std::invalid_argument("depth.n_starts must be >= 8");
}

} // namespace nhfcli
