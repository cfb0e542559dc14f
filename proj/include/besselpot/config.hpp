#pragma once

// Run configuration: a JSON document with an explicit schema version.
//
//   {
//     "schema_version": 1,
//     "problem": {"alpha": 2, "beta": 3, "dim": 1, "q": 4},
//     "grid":    {"half_width": 16, "points_per_dim": 1024},
//     "solver":  {"init_profile": "gaussian", "init_center": [], "init_width": 1,
//                 "init_file": null, "tol_residual": 1e-8, "tol_delta": 1e-10,
//                 "max_iters": 5000, "damping": 1, "lambda_min": 1e-8, "lambda_max": 1e8},
//     "verify":  {"asymmetry": 1e-6, "monotonicity": 1e-8, "tie_tolerance": 1e-9,
//                 "radius_fraction": 0.75, "plane_slack": 1e-9, "reflection_samples": 10000},
//     "seed": 1,
//     "out": "out"
//   }
//
// Every section except schema_version may be omitted. Unknown keys and wrong
// types raise SchemaError; values breaking an invariant raise ConfigError.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "besselpot/solver.hpp"
#include "besselpot/verify.hpp"

namespace besselpot {

inline constexpr int kSchemaVersion = 1;

struct VerifySettings {
    SymmetryThresholds symmetry;
    double plane_slack = 1e-9;
    std::size_t reflection_samples = 10000;
};

struct RunConfig {
    std::string name = "custom";
    ProblemParams problem;
    GridSpec grid;
    SolverConfig solver;
    std::string init_file;  // for init_profile custom-file; loaded by load_init
    VerifySettings verify;
    std::uint64_t seed = 1;
    std::string out = "out";

    void validate() const;  // throws ConfigError
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

/// Reads init_file into solver.custom_init when the profile asks for it.
/// Relative paths resolve against base_dir.
void load_init(RunConfig& config, const std::filesystem::path& base_dir);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);  // throws ConfigError for unknown names

}  // namespace besselpot
