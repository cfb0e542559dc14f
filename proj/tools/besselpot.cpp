// besselpot: solve u = g_alpha * u^beta on a periodic grid and check the
// moving-plane predicates on the result.
//
// Exit codes: 0 ok, 1 check failure, 2 config/schema error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "besselpot/acceptance.hpp"
#include "besselpot/config.hpp"
#include "besselpot/errors.hpp"
#include "besselpot/io.hpp"
#include "besselpot/kernel.hpp"
#include "besselpot/potential.hpp"
#include "besselpot/solver.hpp"
#include "besselpot/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace besselpot;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Common {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON run configuration");
    cmd->add_option("--preset", c.preset, "sech1d, frac1d, iso2d or small-oracle");
    cmd->add_option("--out", c.out, "output directory (overrides the config)");
    cmd->add_option("--seed", c.seed, "seed for randomized checks (overrides the config)");
    cmd->add_flag("--quiet", c.quiet, "print nothing but errors");
}

RunConfig resolve(const Common& c, const char* fallback_preset = nullptr) {
    if (!c.config.empty() && !c.preset.empty()) throw ConfigError("give either --config or --preset, not both");
    RunConfig cfg;
    if (!c.config.empty())
        cfg = load_config(c.config);
    else if (!c.preset.empty())
        cfg = preset(c.preset);
    else if (fallback_preset)
        cfg = preset(fallback_preset);
    else
        throw ConfigError("one of --config or --preset is required");
    if (!c.out.empty()) cfg.out = c.out;
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

fs::path prepare_out(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

json versions() { return {{"besselpot", kVersion}, {"fft_backend", fft_backend_version()}, {"compiler", __VERSION__}}; }

class Log {
public:
    explicit Log(bool quiet) : quiet_(quiet) {}
    template <class... A>
    void operator()(const char* f, A... a) const {
        if (quiet_) return;
        std::printf(f, a...);
        std::fflush(stdout);
    }

private:
    bool quiet_;
};

int cmd_solve(const Common& common) {
    const RunConfig cfg = resolve(common);
    const Log log(common.quiet);
    const fs::path out = prepare_out(cfg.out);
    json manifest = {{"command", "solve"}, {"config", to_json(cfg)}, {"versions", versions()}};
    auto write_trace = [&](const SolverTrace& trace) {
        std::ofstream csv(out / "trace.csv");
        write_trace_csv(csv, trace);
    };
    try {
        const GroundState gs = solve_ground_state(cfg.problem, cfg.grid, cfg.solver);
        save_grid_function(out / "solution.txt", gs.solution, cfg.problem.alpha, cfg.problem.beta);
        write_trace(gs.trace);
        const double res = residual(gs.solution, cfg.problem);
        manifest["result"] = {{"status", to_string(gs.trace.status)},
                              {"iterations", gs.trace.records.size()},
                              {"lambda", gs.lambda},
                              {"residual", res},
                              {"sup_norm", gs.solution.sup_norm()},
                              {"solution", "solution.txt"},
                              {"trace", "trace.csv"}};
        write_json(out / "manifest.json", manifest);
        log("converged in %zu iterations, residual %.3e, max %.10f\n", gs.trace.records.size(), res,
            gs.solution.sup_norm());
        return kOk;
    } catch (const SolverFailure& e) {
        write_trace(e.trace());
        manifest["result"] = {
            {"status", to_string(e.trace().status)}, {"iterations", e.trace().records.size()}, {"trace", "trace.csv"}};
        manifest["error"] = {{"kind", dynamic_cast<const DivergenceError*>(&e) ? "divergence" : "non_convergence"},
                             {"message", e.what()}};
        write_json(out / "manifest.json", manifest);
        throw;
    }
}

int cmd_verify(const Common& common, const std::string& solution_path) {
    const RunConfig cfg = resolve(common);
    const Log log(common.quiet);
    const StoredFunction stored = load_grid_function(solution_path);
    if (stored.alpha && *stored.alpha != cfg.problem.alpha)
        throw SchemaError("solution file alpha " + format_double(*stored.alpha) + " differs from config alpha " +
                          format_double(cfg.problem.alpha));
    if (stored.beta && *stored.beta != cfg.problem.beta)
        throw SchemaError("solution file beta " + format_double(*stored.beta) + " differs from config beta " +
                          format_double(cfg.problem.beta));
    const GridFunction& u = stored.function;
    if (u.spec().dim != cfg.problem.dim) throw SchemaError("solution dimension differs from config dimension");
    const fs::path out = prepare_out(cfg.out);

    json summary = {
        {"command", "verify"}, {"solution", solution_path}, {"config", to_json(cfg)}, {"checks", json::array()}};
    bool all = true;
    auto record = [&](const std::string& name, const std::string& file, json report, bool pass) {
        write_json(out / file, report);
        summary["checks"].push_back({{"check", name}, {"report", file}, {"pass", pass}});
        all = all && pass;
        log("%s %s\n", pass ? "PASS" : "FAIL", name.c_str());
    };
    auto failed = [&](const std::string& name, const std::string& file, const std::exception& e) {
        record(name, file, {{"check", name}, {"error", e.what()}, {"pass", false}}, false);
    };

    double center0 = 0.0;
    try {
        const SymmetryReport sym = check_symmetry(u, cfg.verify.symmetry);
        center0 = sym.center[0];
        record("symmetry", "symmetry.json", to_json(sym), sym.pass);
    } catch (const AmbiguousCenterError& e) {
        json j = {{"check", "symmetry"}, {"error", e.what()}, {"candidates", e.candidates()}, {"pass", false}};
        record("symmetry", "symmetry.json", j, false);
    } catch (const DomainError& e) {
        failed("symmetry", "symmetry.json", e);
    }

    try {
        const double res = residual(u, cfg.problem);
        const bool pass = res <= cfg.solver.tol_residual * std::max(1.0, u.sup_norm());
        record(
            "equation_residual", "residual.json",
            {{"check", "equation_residual"}, {"residual", res}, {"tolerance", cfg.solver.tol_residual}, {"pass", pass}},
            pass);
    } catch (const DomainError& e) {
        failed("equation_residual", "residual.json", e);
    }

    try {
        const EmbeddingEstimate est = estimate_embedding_constant(u.spec(), cfg.problem, &u);
        for (int axis = 0; axis < u.spec().dim; ++axis) {
            const GridSpec& s = u.spec();
            MovingPlaneReport rep =
                sigma_minus_scan(u, axis, half_grid_lambdas(s, -s.half_width, s.half_width - 0.5 * s.spacing()),
                                 cfg.verify.plane_slack, cfg.verify.symmetry.radius_fraction);
            const bool monotone = attach_contraction(rep, u, cfg.problem, est.constant);
            json j = to_json(rep);
            j["contraction_monotone"] = monotone;
            j["c_hat"] = est.constant;
            const std::string file = "moving_plane_axis" + std::to_string(axis) + ".json";
            record("moving_plane_axis" + std::to_string(axis), file, j,
                   rep.pass && monotone && rep.contraction_threshold.has_value());
        }
        record("embedding_ratio", "embedding.json", to_json(est), std::isfinite(est.constant));
    } catch (const Error& e) {
        failed("moving_plane", "moving_plane.json", e);
    }

    {
        const auto rep = kernel_reflection_monotonicity({cfg.problem.alpha, cfg.problem.dim}, center0 - 1.0, 0,
                                                        cfg.verify.reflection_samples, cfg.seed);
        record("kernel_reflection", "kernel_reflection.json", to_json(rep), rep.violations == 0);
    }

    {
        std::vector<double> power(u.size());
        clamped_power(u.values(), cfg.problem.beta, power);
        const GridFunction f(u.spec(), std::move(power));
        const double scale = f.sup_norm();
        const double compose = compose_check(0.5 * cfg.problem.alpha, 0.5 * cfg.problem.alpha, f) / scale;
        const double p1 = nonexpansive_check(cfg.problem.alpha, f, 1.0);
        const double p2 = nonexpansive_check(cfg.problem.alpha, f, 2.0);
        const double pinf = nonexpansive_check(cfg.problem.alpha, f, kInfinityNorm);
        const bool pass = compose < 1e-12 && p2 <= 1.0 + 1e-14 && p1 <= 1.0 + 1e-6 && pinf <= 1.0 + 1e-6;
        record("operator", "operator.json",
               {{"check", "operator"},
                {"input", "u^beta"},
                {"compose_relative_discrepancy", compose},
                {"ratio_p1", p1},
                {"ratio_p2", p2},
                {"ratio_pinf", pinf},
                {"pass", pass}},
               pass);
    }

    if (u.size() <= BruteforceConfig{}.max_points) {
        const GridSpec& s = u.spec();
        const double plane = half_grid_value(s, std::lround(2.0 * (center0 + s.half_width) / s.spacing()));
        json reports = json::array();
        bool pass = true;
        for (double offset : {-4.0, -2.0, 0.0}) {
            try {
                const ReflectionIdentityReport rep =
                    reflection_identity_residual(u, cfg.problem.alpha, cfg.problem.beta, plane + offset, 0, {});
                pass = pass && rep.within_budget;
                reports.push_back(to_json(rep));
            } catch (const Error& e) {
                pass = false;
                reports.push_back({{"lambda", plane + offset}, {"error", e.what()}});
            }
        }
        record("reflection_identity", "reflection_identity.json",
               {{"check", "reflection_identity"}, {"planes", reports}, {"pass", pass}}, pass);
    } else {
        summary["skipped"] = {{"reflection_identity", "grid larger than the brute-force oracle limit"}};
    }

    summary["pass"] = all;
    write_json(out / "verify.json", summary);
    return all ? kOk : kCheckFailed;
}

int cmd_kernel_table(const Common& common, double alpha, int dim, std::vector<double> radii, double r_min, double r_max,
                     int count) {
    const KernelParams params{alpha, dim};
    try {
        params.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (radii.empty()) {
        if (!(r_min > 0 && r_max >= r_min && count >= 1)) throw ConfigError("need 0 < r-min <= r-max and count >= 1");
        for (int i = 0; i < count; ++i)
            radii.push_back(count == 1 ? r_min : r_min * std::pow(r_max / r_min, static_cast<double>(i) / (count - 1)));
    }
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!common.out.empty()) {
        file.open(prepare_out(common.out) / "kernel_table.csv");
        out = &file;
    }
    bool ok = true;
    *out << "alpha,dim,radius,value,quad_error,status\n";
    const std::string head = format_double(alpha) + "," + std::to_string(dim) + ",";
    for (double r : radii) {
        std::string status = "ok", value = "nan", err = "nan";
        try {
            const KernelValue kv = bessel_kernel(params, r);
            value = format_double(kv.value);
            err = format_double(kv.error);
        } catch (const SingularityError&) {
            status = "singular";
        } catch (const QuadratureError& e) {
            status = "quadrature_failure";
            err = format_double(e.achieved_error());
        } catch (const DomainError&) {
            status = "domain_error";
        }
        ok = ok && status == "ok";
        *out << head << format_double(r) << "," << value << "," << err << "," << status << "\n";
    }
    const KernelValue mass = kernel_mass(params);
    const bool mass_ok = std::abs(mass.value - 1.0) <= 1e-6;
    ok = ok && mass_ok;
    *out << head << "mass," << format_double(mass.value) << "," << format_double(mass.error) << ","
         << (mass_ok ? "ok" : "mass_not_one") << "\n";
    return ok ? kOk : kCheckFailed;
}

int cmd_sweep(const Common& common, const std::string& solution_path, std::optional<double> lo,
              std::optional<double> hi, int axis) {
    const RunConfig cfg = resolve(common);
    const Log log(common.quiet);
    GridFunction u = [&] {
        if (solution_path.empty()) return solve_ground_state(cfg.problem, cfg.grid, cfg.solver).solution;
        StoredFunction s = load_grid_function(solution_path);
        if (s.alpha && *s.alpha != cfg.problem.alpha) throw SchemaError("solution file alpha differs from config");
        if (s.beta && *s.beta != cfg.problem.beta) throw SchemaError("solution file beta differs from config");
        return std::move(s.function);
    }();
    const GridSpec& s = u.spec();
    if (s.dim != cfg.problem.dim) throw SchemaError("solution dimension differs from config dimension");
    if (axis < 0 || axis >= s.dim) throw ConfigError("axis out of range");
    const fs::path out = prepare_out(cfg.out);

    const auto lambdas =
        half_grid_lambdas(s, lo.value_or(-s.half_width), hi.value_or(s.half_width - 0.5 * s.spacing()));
    if (lambdas.empty()) throw ConfigError("lambda range contains no half-grid plane");
    MovingPlaneReport rep =
        sigma_minus_scan(u, axis, lambdas, cfg.verify.plane_slack, cfg.verify.symmetry.radius_fraction);
    const EmbeddingEstimate est = estimate_embedding_constant(s, cfg.problem, &u);
    const bool monotone = attach_contraction(rep, u, cfg.problem, est.constant);

    std::ofstream csv(out / "sweep.csv");
    csv << "lambda,side,judged,sigma_minus_fraction,max_violation,compared,excluded,contraction_factor,pass\n";
    for (const PlaneRecord& p : rep.planes)
        csv << format_double(p.lambda) << ',' << to_string(p.side) << ',' << (p.judged ? 1 : 0) << ','
            << format_double(p.sigma_minus_fraction) << ',' << format_double(p.max_violation) << ',' << p.compared
            << ',' << p.excluded << ',' << format_double(p.contraction_factor.value_or(NAN)) << ',' << (p.pass ? 1 : 0)
            << '\n';
    json j = to_json(rep);
    j["c_hat"] = est.constant;
    j["contraction_monotone"] = monotone;
    write_json(out / "sweep.json", j);
    log("%zu planes, center %.6g, threshold %s, %s\n", rep.planes.size(), rep.center,
        rep.contraction_threshold ? format_double(*rep.contraction_threshold).c_str() : "none",
        rep.pass && monotone ? "pass" : "fail");
    return rep.pass && monotone ? kOk : kCheckFailed;
}

int cmd_selftest(const Common& common) {
    std::uint64_t seed = 1;
    std::string out_dir = "out/selftest";
    if (!common.config.empty() || !common.preset.empty()) {
        const RunConfig cfg = resolve(common);
        seed = cfg.seed;
        out_dir = cfg.out;
    }
    if (common.seed) seed = *common.seed;
    if (!common.out.empty()) out_dir = common.out;
    const Log log(common.quiet);
    const fs::path out = prepare_out(out_dir);
    const AcceptanceReport report =
        run_acceptance(seed, [&](const CriterionResult& r) { log("%s\n", format_line(r).c_str()); });
    write_json(out / "selftest.json", to_json(report));
    return report.pass() ? kOk : kCheckFailed;
}

void report_error(const char* kind, const std::exception& e) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", e.what()}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bessel potential ground states and moving-plane checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    auto* solve = app.add_subcommand("solve", "solve the ground-state equation");
    add_common(solve, common);

    auto* verify = app.add_subcommand("verify", "check symmetry and moving-plane predicates of a solution");
    add_common(verify, common);
    std::string solution_path;
    verify->add_option("solution", solution_path, "solution file written by solve")->required();

    auto* table = app.add_subcommand("kernel-table", "tabulate g_alpha as CSV");
    add_common(table, common);
    double alpha = 2.0, r_min = 0.1, r_max = 10.0;
    int dim = 1, count = 20;
    std::vector<double> radii;
    table->add_option("--alpha", alpha, "kernel order")->capture_default_str();
    table->add_option("--dim", dim, "dimension")->capture_default_str();
    table->add_option("--radii", radii, "explicit radii (overrides the range)");
    table->add_option("--r-min", r_min)->capture_default_str();
    table->add_option("--r-max", r_max)->capture_default_str();
    table->add_option("--count", count, "log-spaced radii in [r-min, r-max]")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "lambda sweep of the moving-plane predicates");
    add_common(sweep, common);
    std::string sweep_solution;
    std::optional<double> lambda_lo, lambda_hi;
    int axis = 0;
    sweep->add_option("--solution", sweep_solution, "solution file (solves from the config if omitted)");
    sweep->add_option("--lambda-min", lambda_lo);
    sweep->add_option("--lambda-max", lambda_hi);
    sweep->add_option("--axis", axis)->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    add_common(selftest, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*solve) return cmd_solve(common);
        if (*verify) return cmd_verify(common, solution_path);
        if (*table) return cmd_kernel_table(common, alpha, dim, radii, r_min, r_max, count);
        if (*sweep) return cmd_sweep(common, sweep_solution, lambda_lo, lambda_hi, axis);
        if (*selftest) return cmd_selftest(common);
    } catch (const ConfigError& e) {
        report_error("config", e);
        return kConfigError;
    } catch (const SchemaError& e) {
        report_error("schema", e);
        return kConfigError;
    } catch (const SolverFailure& e) {
        report_error("solver", e);
        return kNumericalError;
    } catch (const PreconditionError& e) {
        report_error("config", e);
        return kConfigError;
    } catch (const Error& e) {
        report_error("numerical", e);
        return kNumericalError;
    } catch (const std::exception& e) {
        report_error("internal", e);
        return kNumericalError;
    }
    return kOk;
}
