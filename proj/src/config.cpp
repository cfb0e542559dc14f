#include "besselpot/config.hpp"

#include <fstream>
#include <set>

#include "besselpot/errors.hpp"
#include "besselpot/io.hpp"

namespace besselpot {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaError(where + " must be an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!known.count(key)) throw SchemaError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& target) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) throw SchemaError("");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw SchemaError("");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) throw SchemaError("");
        }
        target = it->get<T>();
    } catch (const std::exception&) {
        throw SchemaError(where + "." + key + " has the wrong type");
    }
}

}  // namespace

void RunConfig::validate() const {
    try {
        problem.validate();
        grid.validate();
        SolverConfig pending = solver;
        // The custom init arrives later through load_init.
        if (pending.init_profile == InitProfile::Custom && !pending.custom_init && !init_file.empty())
            pending.init_profile = InitProfile::Gaussian;
        pending.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (grid.dim != problem.dim) throw ConfigError("grid.dim differs from problem.dim");
    if (!solver.init_center.empty() && static_cast<int>(solver.init_center.size()) != problem.dim)
        throw ConfigError("solver.init_center needs one coordinate per dimension");
    if (solver.init_profile == InitProfile::Custom && init_file.empty() && !solver.custom_init)
        throw ConfigError("init_profile custom-file needs solver.init_file");
    const SymmetryThresholds& t = verify.symmetry;
    if (!(t.asymmetry > 0 && t.monotonicity > 0 && t.tie_tolerance >= 0))
        throw ConfigError("verify thresholds must be positive");
    if (!(t.radius_fraction > 0 && t.radius_fraction <= 1))
        throw ConfigError("verify.radius_fraction must be in (0, 1]");
    if (!(verify.plane_slack >= 0)) throw ConfigError("verify.plane_slack must be nonnegative");
    if (verify.reflection_samples == 0) throw ConfigError("verify.reflection_samples must be positive");
    if (out.empty()) throw ConfigError("out must be a nonempty path");
}

RunConfig parse_config(const json& doc) {
    reject_unknown(doc, "config", {"schema_version", "name", "problem", "grid", "solver", "verify", "seed", "out"});
    if (!doc.contains("schema_version")) throw SchemaError("schema_version is required");
    int version = 0;
    read(doc, "schema_version", "config", version);
    if (version != kSchemaVersion)
        throw SchemaError("unsupported schema_version " + std::to_string(version) + ", expected " +
                          std::to_string(kSchemaVersion));

    RunConfig c;
    read(doc, "name", "config", c.name);
    if (doc.contains("problem")) {
        const json& p = doc["problem"];
        reject_unknown(p, "problem", {"alpha", "beta", "dim", "q"});
        read(p, "alpha", "problem", c.problem.alpha);
        read(p, "beta", "problem", c.problem.beta);
        read(p, "dim", "problem", c.problem.dim);
        read(p, "q", "problem", c.problem.q_exponent);
    }
    c.grid.dim = c.problem.dim;
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        reject_unknown(g, "grid", {"dim", "half_width", "points_per_dim"});
        read(g, "dim", "grid", c.grid.dim);
        read(g, "half_width", "grid", c.grid.half_width);
        read(g, "points_per_dim", "grid", c.grid.points_per_dim);
    }
    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        reject_unknown(s, "solver",
                       {"init_profile", "init_center", "init_width", "init_file", "tol_residual", "tol_delta",
                        "max_iters", "damping", "lambda_min", "lambda_max"});
        std::string profile = to_string(c.solver.init_profile);
        read(s, "init_profile", "solver", profile);
        c.solver.init_profile = init_profile_from_string(profile);
        if (s.contains("init_center")) {
            const json& ctr = s["init_center"];
            if (!ctr.is_array()) throw SchemaError("solver.init_center must be an array");
            for (const json& v : ctr) {
                if (!v.is_number()) throw SchemaError("solver.init_center entries must be numbers");
                c.solver.init_center.push_back(v.get<double>());
            }
        }
        read(s, "init_width", "solver", c.solver.init_width);
        if (s.contains("init_file") && !s["init_file"].is_null()) read(s, "init_file", "solver", c.init_file);
        read(s, "tol_residual", "solver", c.solver.tol_residual);
        read(s, "tol_delta", "solver", c.solver.tol_delta);
        read(s, "max_iters", "solver", c.solver.max_iters);
        read(s, "damping", "solver", c.solver.damping);
        read(s, "lambda_min", "solver", c.solver.lambda_min);
        read(s, "lambda_max", "solver", c.solver.lambda_max);
    }
    if (doc.contains("verify")) {
        const json& v = doc["verify"];
        reject_unknown(
            v, "verify",
            {"asymmetry", "monotonicity", "tie_tolerance", "radius_fraction", "plane_slack", "reflection_samples"});
        read(v, "asymmetry", "verify", c.verify.symmetry.asymmetry);
        read(v, "monotonicity", "verify", c.verify.symmetry.monotonicity);
        read(v, "tie_tolerance", "verify", c.verify.symmetry.tie_tolerance);
        read(v, "radius_fraction", "verify", c.verify.symmetry.radius_fraction);
        read(v, "plane_slack", "verify", c.verify.plane_slack);
        read(v, "reflection_samples", "verify", c.verify.reflection_samples);
    }
    read(doc, "seed", "config", c.seed);
    read(doc, "out", "config", c.out);
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    RunConfig c = parse_config(doc);
    load_init(c, path.parent_path());
    return c;
}

void load_init(RunConfig& config, const std::filesystem::path& base_dir) {
    if (config.solver.init_profile != InitProfile::Custom || config.solver.custom_init) return;
    std::filesystem::path p(config.init_file);
    if (p.is_relative()) p = base_dir / p;
    StoredFunction stored = load_grid_function(p);
    if (!(stored.function.spec() == config.grid)) throw SchemaError("init_file grid differs from the config grid");
    config.solver.custom_init = std::move(stored.function);
}

json to_json(const RunConfig& c) {
    const SymmetryThresholds& t = c.verify.symmetry;
    return {
        {"schema_version", kSchemaVersion},
        {"name", c.name},
        {"problem",
         {{"alpha", c.problem.alpha}, {"beta", c.problem.beta}, {"dim", c.problem.dim}, {"q", c.problem.q_exponent}}},
        {"grid", {{"dim", c.grid.dim}, {"half_width", c.grid.half_width}, {"points_per_dim", c.grid.points_per_dim}}},
        {"solver",
         {{"init_profile", to_string(c.solver.init_profile)},
          {"init_center", c.solver.init_center},
          {"init_width", c.solver.init_width},
          {"init_file", c.init_file.empty() ? json(nullptr) : json(c.init_file)},
          {"tol_residual", c.solver.tol_residual},
          {"tol_delta", c.solver.tol_delta},
          {"max_iters", c.solver.max_iters},
          {"damping", c.solver.damping},
          {"lambda_min", c.solver.lambda_min},
          {"lambda_max", c.solver.lambda_max}}},
        {"verify",
         {{"asymmetry", t.asymmetry},
          {"monotonicity", t.monotonicity},
          {"tie_tolerance", t.tie_tolerance},
          {"radius_fraction", t.radius_fraction},
          {"plane_slack", c.verify.plane_slack},
          {"reflection_samples", c.verify.reflection_samples}}},
        {"seed", c.seed},
        {"out", c.out}};
}

std::vector<std::string> preset_names() { return {"sech1d", "frac1d", "iso2d", "small-oracle"}; }

RunConfig preset(const std::string& name) {
    RunConfig c;
    c.name = name;
    c.out = "out/" + name;
    if (name == "sech1d") {
        c.problem = {2.0, 3.0, 1, 4.0};
        c.grid = {1, 16.0, 1024};
    } else if (name == "frac1d") {
        c.problem = {1.5, 2.5, 1, 4.0};
        c.grid = {1, 16.0, 1024};
    } else if (name == "iso2d") {
        c.problem = {2.0, 3.0, 2, 4.0};
        c.grid = {2, 14.0, 256};
    } else if (name == "small-oracle") {
        c.problem = {2.0, 3.0, 1, 4.0};
        c.grid = {1, 16.0, 256};
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    c.validate();
    return c;
}

}  // namespace besselpot
