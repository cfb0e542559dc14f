#include "besselpot/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "besselpot/config.hpp"
#include "besselpot/kernel.hpp"
#include "besselpot/potential.hpp"
#include "besselpot/solver.hpp"
#include "besselpot/verify.hpp"

namespace besselpot {

namespace {

using nlohmann::json;

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

GridFunction gaussian(const GridSpec& spec, double width, double scale = 1.0) {
    return GridFunction::sample(spec, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return scale * std::exp(-r2 / (width * width));
    });
}

GridFunction random_function(const GridSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(spec.size());
    for (double& x : v) x = normal(rng);
    return GridFunction(spec, std::move(v));
}

struct Run {
    std::string label;
    ProblemParams params;
    GridSpec spec;
    GroundState state;
};

class Solutions {
public:
    const Run& get(const std::string& preset_name, InitProfile profile = InitProfile::Gaussian,
                   std::vector<double> center = {}) {
        std::string label = preset_name + "/" + to_string(profile);
        for (double c : center) label += fmt("@%g", c);
        auto it = cache_.find(label);
        if (it != cache_.end()) return it->second;
        RunConfig cfg = preset(preset_name);
        cfg.solver.init_profile = profile;
        cfg.solver.init_center = std::move(center);
        GroundState gs = solve_ground_state(cfg.problem, cfg.grid, cfg.solver);
        return cache_.emplace(label, Run{label, cfg.problem, cfg.grid, std::move(gs)}).first->second;
    }

private:
    std::map<std::string, Run> cache_;
};

CriterionResult kernel_normalization() {
    CriterionResult r{1, "kernel normalization", true, "", json::object()};
    double worst = 0.0;
    json rows = json::array();
    for (double alpha : {0.5, 1.0, 2.0, 3.7})
        for (int n = 1; n <= 3; ++n) {
            const double mass = kernel_mass({alpha, n}).value;
            worst = std::max(worst, std::abs(mass - 1.0));
            rows.push_back({{"alpha", alpha}, {"dim", n}, {"mass", mass}});
        }
    r.pass = worst <= 1e-6;
    r.metrics = {{"tolerance", 1e-6}, {"max_abs_error", worst}, {"cases", rows}};
    r.summary = fmt("max |mass - 1| = %.3g over 12 (alpha, n) pairs (tol 1e-6)", worst);
    return r;
}

CriterionResult closed_forms() {
    CriterionResult r{2, "closed-form kernels", true, "", json::object()};
    double worst1 = 0.0, worst3 = 0.0;
    const int samples = 64;
    for (int i = 0; i < samples; ++i) {
        const double radius = 0.1 * std::pow(100.0, static_cast<double>(i) / (samples - 1));
        const double exact1 = 0.5 * std::exp(-radius);
        const double exact3 = std::exp(-radius) / (4.0 * std::numbers::pi * radius);
        worst1 = std::max(worst1, std::abs(bessel_kernel({2.0, 1}, radius).value / exact1 - 1.0));
        worst3 = std::max(worst3, std::abs(bessel_kernel({2.0, 3}, radius).value / exact3 - 1.0));
    }
    r.pass = worst1 <= 1e-8 && worst3 <= 1e-8;
    r.metrics = {{"tolerance", 1e-8},
                 {"radii", {{"min", 0.1}, {"max", 10.0}, {"count", samples}}},
                 {"max_rel_error_n1", worst1},
                 {"max_rel_error_n3", worst3}};
    r.summary = fmt("max rel error n=1: %.3g, n=3: %.3g on r in [0.1, 10] (tol 1e-8)", worst1, worst3);
    return r;
}

CriterionResult semigroup(std::mt19937_64& rng) {
    CriterionResult r{3, "semigroup law", true, "", json::object()};
    const std::vector<std::pair<double, double>> pairs{{1, 1}, {0.7, 1.3}, {2, 2}, {0, 1.5}};
    double worst = 0.0;
    json rows = json::array();
    for (const GridSpec& spec : {GridSpec{1, 16.0, 256}, GridSpec{2, 8.0, 64}, GridSpec{3, 4.0, 16}}) {
        const GridFunction f = random_function(spec, rng);
        const double scale = f.sup_norm();
        for (auto [a1, a2] : pairs) {
            const double rel = compose_check(a1, a2, f) / scale;
            worst = std::max(worst, rel);
            rows.push_back({{"dim", spec.dim}, {"alpha1", a1}, {"alpha2", a2}, {"relative_discrepancy", rel}});
        }
    }
    r.pass = worst < 1e-12;
    r.metrics = {{"tolerance", 1e-12}, {"max_relative_discrepancy", worst}, {"cases", rows}};
    r.summary = fmt("max |B_a B_b f - B_(a+b) f| / |f| = %.3g on random inputs, n = 1..3 (tol 1e-12)", worst);
    return r;
}

CriterionResult nonexpansive(std::mt19937_64& rng) {
    CriterionResult r{4, "nonexpansiveness", true, "", json::object()};
    double worst2 = 0.0, worst_smooth = 0.0, identity_gap = 0.0;
    json rows = json::array();
    for (const GridSpec& spec : {GridSpec{1, 16.0, 256}, GridSpec{2, 8.0, 64}}) {
        const GridFunction noise = random_function(spec, rng);
        for (double alpha : {0.5, 1.5, 2.0, 3.7}) {
            const double r2 = nonexpansive_check(alpha, noise, 2.0);
            worst2 = std::max(worst2, r2);
            rows.push_back({{"dim", spec.dim}, {"alpha", alpha}, {"input", "random"}, {"p", 2}, {"ratio", r2}});
            for (double width : {0.5, 1.0, 2.0}) {
                const GridFunction g = gaussian(spec, width);
                for (double p : {1.0, 2.0, static_cast<double>(kInfinityNorm)}) {
                    const double ratio = nonexpansive_check(alpha, g, p);
                    if (p == 2.0)
                        worst2 = std::max(worst2, ratio);
                    else
                        worst_smooth = std::max(worst_smooth, ratio);
                    rows.push_back({{"dim", spec.dim},
                                    {"alpha", alpha},
                                    {"input", fmt("gaussian(width=%g)", width)},
                                    {"p", p == kInfinityNorm ? json("inf") : json(p)},
                                    {"ratio", ratio}});
                }
            }
        }
        identity_gap = std::max(identity_gap, std::abs(nonexpansive_check(0.0, noise, 1.0) - 1.0));
    }
    // "Exact" for p = 2 means up to the roundoff of two FFTs.
    r.pass = worst2 <= 1.0 + 1e-14 && worst_smooth <= 1.0 + 1e-6 && identity_gap <= 1e-15;
    r.metrics = {{"tolerance_p2", 1e-14},      {"tolerance_p1_pinf", 1e-6},
                 {"max_ratio_p2", worst2},     {"max_ratio_p1_pinf", worst_smooth},
                 {"alpha0_gap", identity_gap}, {"cases", rows}};
    r.summary = fmt("max ratio p=2: %.17g, p in {1, inf}: %.17g", worst2, worst_smooth);
    return r;
}

CriterionResult ground_state(Solutions& sols) {
    CriterionResult r{5, "ground-state benchmark", true, "", json::object()};
    const Run& run = sols.get("sech1d");
    const GridFunction& u = run.state.solution;
    const double res = residual(u, run.params);
    const double peak = u.sup_norm();
    const double xc = locate_center(u)[0];
    const GridFunction exact = GridFunction::sample(
        run.spec, [&](std::span<const double> x) { return std::numbers::sqrt2 / std::cosh(x[0] - xc); });
    double dist = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dist = std::max(dist, std::abs(u[i] - exact[i]));
    const bool converged = run.state.trace.status == SolverStatus::Converged;
    r.pass = converged && res <= 1e-8 && std::abs(peak - std::numbers::sqrt2) <= 1e-3 && dist <= 1e-3;
    r.metrics = {{"iterations", run.state.trace.records.size()},
                 {"status", to_string(run.state.trace.status)},
                 {"residual", res},
                 {"max_value", peak},
                 {"center", xc},
                 {"sup_distance_to_sech", dist},
                 {"tolerances", {{"residual", 1e-8}, {"max_value", 1e-3}, {"profile", 1e-3}}}};
    r.summary = fmt("residual %.3g, |max - sqrt2| = %.3g", res, std::abs(peak - std::numbers::sqrt2)) +
                fmt(", sup |u - sqrt2 sech(x - xc)| = %.3g", dist);
    return r;
}

CriterionResult symmetry_suite(Solutions& sols) {
    CriterionResult r{6, "radial symmetry and monotone decrease", true, "", json::object()};
    const std::vector<std::tuple<std::string, InitProfile, std::vector<double>>> runs{
        {"sech1d", InitProfile::Gaussian, {}},        {"sech1d", InitProfile::ShiftedGaussian, {3.0}},
        {"sech1d", InitProfile::TwoBump, {0.3}},      {"frac1d", InitProfile::Gaussian, {}},
        {"frac1d", InitProfile::TwoBump, {0.3}},      {"iso2d", InitProfile::Gaussian, {}},
        {"iso2d", InitProfile::TwoBump, {0.3, -0.2}},
    };
    double worst_asym = 0.0, worst_mono = 0.0;
    json rows = json::array();
    for (const auto& [name, profile, center] : runs) {
        const Run& run = sols.get(name, profile, center);
        const SymmetryReport rep = check_symmetry(run.state.solution, {});
        r.pass = r.pass && rep.pass;
        worst_asym = std::max(worst_asym, rep.asymmetry);
        worst_mono = std::max(worst_mono, rep.monotonicity_violation / rep.sup_norm);
        json row = to_json(rep);
        row["run"] = run.label;
        rows.push_back(std::move(row));
    }
    r.metrics = {{"max_asymmetry", worst_asym}, {"max_relative_monotonicity_violation", worst_mono}, {"runs", rows}};
    r.summary =
        fmt("7 runs (3 asymmetric starts): max asymmetry %.3g (tol 1e-6), max monotonicity "
            "violation %.3g |u| (tol 1e-8)",
            worst_asym, worst_mono);
    return r;
}

CriterionResult moving_plane_suite(Solutions& sols) {
    CriterionResult r{7, "moving-plane sweep", true, "", json::object()};
    json rows = json::array();
    std::size_t below_planes = 0, below_bad = 0, above_judged = 0, above_bad = 0;
    for (const std::string& name : preset_names()) {
        const Run& run = sols.get(name);
        for (int axis = 0; axis < run.spec.dim; ++axis) {
            const auto lambdas =
                half_grid_lambdas(run.spec, -run.spec.half_width, run.spec.half_width - 0.5 * run.spec.spacing());
            const MovingPlaneReport rep = sigma_minus_scan(run.state.solution, axis, lambdas);
            std::size_t b = 0, bb = 0, a = 0, ab = 0;
            double worst_below = 0.0, min_above_fraction = 1.0;
            for (const PlaneRecord& p : rep.planes) {
                // Below the center every plane counts, inside the window or not.
                if (p.side == PlaneSide::Below) {
                    ++b;
                    worst_below = std::max(worst_below, p.max_violation);
                    if (p.sigma_minus_fraction > 0.0) ++bb;
                } else if (p.side == PlaneSide::Above && p.judged) {
                    ++a;
                    min_above_fraction = std::min(min_above_fraction, p.sigma_minus_fraction);
                    if (!(p.sigma_minus_fraction > 0.0)) ++ab;
                }
            }
            below_planes += b;
            below_bad += bb;
            above_judged += a;
            above_bad += ab;
            rows.push_back({{"run", run.label},
                            {"axis", axis},
                            {"center", rep.center},
                            {"planes_below", b},
                            {"planes_below_with_violations", bb},
                            {"max_violation_below", worst_below},
                            {"planes_above_judged", a},
                            {"planes_above_without_violations", ab},
                            {"min_fraction_above", min_above_fraction},
                            {"slack", rep.slack},
                            {"window", rep.window}});
        }
    }
    r.pass = below_bad == 0 && above_bad == 0 && below_planes > 0 && above_judged > 0;
    r.metrics = {{"planes_below", below_planes},
                 {"planes_below_with_violations", below_bad},
                 {"planes_above_judged", above_judged},
                 {"planes_above_without_violations", above_bad},
                 {"runs", rows}};
    r.summary = fmt("%.0f of %.0f planes below the center have a nonzero fraction; ", static_cast<double>(below_bad),
                    static_cast<double>(below_planes)) +
                fmt("%.0f of %.0f planes above it (within the window) have a zero fraction",
                    static_cast<double>(above_bad), static_cast<double>(above_judged));
    return r;
}

CriterionResult reflection_identity_suite(Solutions& sols) {
    CriterionResult r{8, "reflection identity oracle", true, "", json::object()};
    const Run& run = sols.get("small-oracle");
    const GridSpec& spec = run.spec;
    const double center = locate_center(run.state.solution)[0];
    const double plane = half_grid_value(spec, std::lround(2.0 * (center + spec.half_width) / spec.spacing()));
    json rows = json::array();
    double worst = 0.0;
    for (double offset : {-4.0, -2.0, 0.0}) {
        const ReflectionIdentityReport rep =
            reflection_identity_residual(run.state.solution, run.params.alpha, run.params.beta, plane + offset, 0, {});
        r.pass = r.pass && rep.within_budget && rep.residual < 1e-4;
        worst = std::max(worst, rep.residual);
        rows.push_back(to_json(rep));
    }
    const ReflectionIdentityReport control =
        reflection_identity_residual(gaussian(spec, 1.0), run.params.alpha, run.params.beta, plane - 2.0, 0, {});
    r.pass = r.pass && control.residual > 1e-2;
    r.metrics = {
        {"target", 1e-4}, {"control_threshold", 1e-2}, {"solution", rows}, {"gaussian_control", to_json(control)}};
    r.summary =
        fmt("max residual %.3g at center-4, center-2, center (target 1e-4, within budget); Gaussian "
            "control %.3g (> 1e-2)",
            worst, control.residual);
    return r;
}

CriterionResult reflection_monotonicity(std::uint64_t seed) {
    CriterionResult r{9, "kernel reflection monotonicity", true, "", json::object()};
    json rows = json::array();
    std::size_t violations = 0, samples = 0, configs = 0;
    for (double alpha : {0.5, 1.5, 2.0, 3.7})
        for (int n = 1; n <= 3; ++n)
            for (double lambda : {-1.0, 0.0, 2.5}) {
                const auto rep = kernel_reflection_monotonicity({alpha, n}, lambda, 0, 10000, seed + configs);
                ++configs;
                violations += rep.violations;
                samples += rep.samples;
                rows.push_back(to_json(rep));
            }
    r.pass = violations == 0;
    r.metrics = {{"configurations", configs}, {"samples", samples}, {"violations", violations}, {"cases", rows}};
    r.summary = fmt("%.0f violations over %.0f configurations x 10^4 seeded pairs", static_cast<double>(violations),
                    static_cast<double>(configs));
    return r;
}

CriterionResult contraction_suite(Solutions& sols) {
    CriterionResult r{10, "contraction factor", true, "", json::object()};
    json rows = json::array();
    for (const std::string& name : preset_names()) {
        const Run& run = sols.get(name);
        const EmbeddingEstimate est = estimate_embedding_constant(run.spec, run.params, &run.state.solution);
        MovingPlaneReport rep = sigma_minus_scan(
            run.state.solution, 0,
            half_grid_lambdas(run.spec, -run.spec.half_width, run.spec.half_width - 0.5 * run.spec.spacing()));
        const bool monotone = attach_contraction(rep, run.state.solution, run.params, est.constant);
        const double largest = rep.planes.back().contraction_factor.value_or(0.0);
        r.pass = r.pass && monotone && rep.contraction_threshold.has_value();
        rows.push_back(
            {{"run", run.label},
             {"c_hat", est.constant},
             {"monotone", monotone},
             {"threshold_lambda", rep.contraction_threshold ? json(*rep.contraction_threshold) : json(nullptr)},
             {"largest_factor", largest},
             {"embedding", to_json(est)}});
    }
    r.metrics = {{"runs", rows}};
    r.summary = "factor nonincreasing as lambda decreases and <= 1/2 below a finite lambda on all presets";
    if (!r.pass) r.summary = "factor not monotone or never reaches 1/2 on some preset";
    return r;
}

CriterionResult oracle_equivalence() {
    CriterionResult r{11, "spectral vs brute-force convolution", true, "", json::object()};
    const GridSpec spec{1, 16.0, 256};
    const GridFunction f = gaussian(spec, 1.0);
    json rows = json::array();
    double worst = 0.0;
    for (double alpha : {1.5, 2.0}) {
        const GridFunction fast = PotentialOperator(spec, alpha).apply(f);
        const GridFunction slow = apply_bruteforce(alpha, f, {});
        double diff = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) diff = std::max(diff, std::abs(fast[i] - slow[i]));
        const double rel = diff / fast.sup_norm();
        worst = std::max(worst, rel);
        rows.push_back({{"alpha", alpha}, {"relative_sup_difference", rel}, {"peak", fast.sup_norm()}});
    }
    r.pass = worst <= 1e-6;
    r.metrics = {{"tolerance", 1e-6}, {"max_relative_difference", worst}, {"cases", rows}};
    r.summary = fmt("max sup difference %.3g of peak for alpha in {1.5, 2} (tol 1e-6)", worst);
    return r;
}

}  // namespace

bool AcceptanceReport::pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return !criteria.empty();
}

AcceptanceReport run_acceptance(std::uint64_t seed, const std::function<void(const CriterionResult&)>& on_result) {
    AcceptanceReport report;
    report.seed = seed;
    std::mt19937_64 rng(seed);
    Solutions sols;
    auto add = [&](auto&& make, int id, const char* name) {
        CriterionResult c;
        try {
            c = make();
        } catch (const std::exception& e) {
            c = {id, name, false, std::string("error: ") + e.what(), json::object()};
        }
        if (on_result) on_result(c);
        report.criteria.push_back(std::move(c));
    };
    add([] { return kernel_normalization(); }, 1, "kernel normalization");
    add([] { return closed_forms(); }, 2, "closed-form kernels");
    add([&] { return semigroup(rng); }, 3, "semigroup law");
    add([&] { return nonexpansive(rng); }, 4, "nonexpansiveness");
    add([&] { return ground_state(sols); }, 5, "ground-state benchmark");
    add([&] { return symmetry_suite(sols); }, 6, "radial symmetry and monotone decrease");
    add([&] { return moving_plane_suite(sols); }, 7, "moving-plane sweep");
    add([&] { return reflection_identity_suite(sols); }, 8, "reflection identity oracle");
    add([&] { return reflection_monotonicity(seed); }, 9, "kernel reflection monotonicity");
    add([&] { return contraction_suite(sols); }, 10, "contraction factor");
    add([] { return oracle_equivalence(); }, 11, "spectral vs brute-force convolution");
    return report;
}

json to_json(const AcceptanceReport& report) {
    json criteria = json::array();
    for (const auto& c : report.criteria)
        criteria.push_back(
            {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"summary", c.summary}, {"metrics", c.metrics}});
    return {{"suite", "acceptance"}, {"seed", report.seed}, {"pass", report.pass()}, {"criteria", criteria}};
}

std::string format_line(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "%s %2d ", r.pass ? "PASS" : "FAIL", r.id);
    return head + r.name + ": " + r.summary;
}

}  // namespace besselpot
