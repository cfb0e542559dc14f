#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "besselpot/config.hpp"
#include "besselpot/errors.hpp"
#include "besselpot/solver.hpp"
#include "besselpot/verify.hpp"
#include "oracles.hpp"

using namespace besselpot;
using doctest::Approx;

namespace {

const GroundState& solved(const std::string& name, InitProfile profile = InitProfile::Gaussian,
                          std::vector<double> center = {}) {
    static std::map<std::string, GroundState> cache;
    std::string key = name + to_string(profile);
    for (double c : center) key += "," + std::to_string(c);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    RunConfig cfg = preset(name);
    cfg.solver.init_profile = profile;
    cfg.solver.init_center = center;
    return cache.emplace(key, solve_ground_state(cfg.problem, cfg.grid, cfg.solver)).first->second;
}

GridFunction sample1d(const GridSpec& s, double (*f)(double)) {
    return GridFunction::sample(s, [&](auto x) { return f(x[0]); });
}

}  // namespace

TEST_SUITE("verify") {
    TEST_CASE("exactly symmetric input") {
        const GridSpec s{1, 16.0, 1024};
        const SymmetryReport r =
            check_symmetry(sample1d(s, [](double x) { return std::numbers::sqrt2 / std::cosh(x); }), {});
        CHECK(r.asymmetry < 1e-12);
        CHECK(r.monotonicity_violation == 0.0);
        CHECK(std::abs(r.center[0]) < 1e-12);
        CHECK(r.pass);

        const GridSpec plane{2, 8.0, 64};
        const SymmetryReport r2 = check_symmetry(
            GridFunction::sample(plane, [](auto x) { return 1.0 / std::cosh(std::hypot(x[0], x[1])); }), {});
        CHECK(r2.asymmetry < 1e-12);
        CHECK(r2.pass);
    }

    TEST_CASE("deliberately asymmetric input fails") {
        const GridSpec s{1, 16.0, 1024};
        const SymmetryReport r =
            check_symmetry(sample1d(s, [](double x) { return 1.0 / std::cosh(x) + 0.2 / std::cosh(x - 4.0); }), {});
        CHECK(r.asymmetry > 0.05);
        CHECK(r.asymmetry == Approx(0.198).epsilon(0.01));  // pinned
        CHECK_FALSE(r.pass);
    }

    TEST_CASE("non-monotone profile fails") {
        const GridSpec s{1, 16.0, 512};
        // Symmetric about 0 with a ring-shaped bump at |x| = 5.
        const SymmetryReport r = check_symmetry(
            sample1d(
                s, [](double x) { return std::exp(-x * x) + 0.1 * std::exp(-(std::abs(x) - 5) * (std::abs(x) - 5)); }),
            {});
        CHECK(r.asymmetry < 1e-12);
        CHECK(r.monotonicity_violation > 1e-3);  // one bin step of the rising flank
        CHECK_FALSE(r.pass);
    }

    TEST_CASE("center location") {
        const GridSpec s{1, 16.0, 256};
        for (double c : {0.0, 0.3 * s.spacing(), 0.5 * s.spacing(), -2.71}) {
            // Periodic to roundoff on this box, so interpolation is spectrally accurate.
            const GridFunction u =
                GridFunction::sample(s, [&](auto x) { return std::exp(-(x[0] - c) * (x[0] - c) / 4.0); });
            CHECK(std::abs(locate_center(u)[0] - c) < 1e-10);
            CHECK(check_symmetry(u, {}).asymmetry < 1e-12);
        }
        const GridSpec p{2, 8.0, 64};
        const GridFunction u2 = GridFunction::sample(
            p, [](auto x) { return std::exp(-(x[0] - 0.41) * (x[0] - 0.41) - (x[1] + 1.1) * (x[1] + 1.1)); });
        const auto c2 = locate_center(u2);
        CHECK(c2[0] == Approx(0.41).epsilon(1e-8));
        CHECK(c2[1] == Approx(-1.1).epsilon(1e-8));
    }

    TEST_CASE("ambiguous center") {
        const GridSpec s{1, 16.0, 256};
        const GridFunction u =
            sample1d(s, [](double x) { return std::exp(-(x - 4) * (x - 4)) + std::exp(-(x + 4) * (x + 4)); });
        try {
            check_symmetry(u, {});
            FAIL("expected AmbiguousCenterError");
        } catch (const AmbiguousCenterError& e) {
            CHECK(e.candidates().size() == 2);
        }
        CHECK_THROWS_AS(check_symmetry(GridFunction(s), {}), DomainError);
    }

    TEST_CASE("solver output is radially symmetric and decreasing, including asymmetric starts") {
        for (auto [name, profile, center] : {std::tuple{"sech1d", InitProfile::TwoBump, std::vector<double>{0.3}},
                                             std::tuple{"frac1d", InitProfile::TwoBump, std::vector<double>{0.3}},
                                             std::tuple{"iso2d", InitProfile::TwoBump, std::vector<double>{0.3, -0.2}},
                                             std::tuple{"iso2d", InitProfile::Gaussian, std::vector<double>{}}}) {
            const SymmetryReport r = check_symmetry(solved(name, profile, center).solution, {});
            CAPTURE(name);
            CHECK(r.asymmetry < 1e-6);
            CHECK(r.monotonicity_violation <= 1e-8 * r.sup_norm);
            CHECK(r.pass);
        }
    }

    TEST_CASE("sigma_minus_scan orientation") {
        const GridFunction& u = solved("sech1d").solution;
        const GridSpec& s = u.spec();
        const double c = locate_center(u)[0];
        const double at = half_grid_value(s, std::lround(2.0 * (c + s.half_width) / s.spacing()));
        const MovingPlaneReport r = sigma_minus_scan(u, 0, {at + 2.0, at, at - 4.0});
        REQUIRE(r.planes.size() == 3);
        CHECK(r.planes[0].lambda == at - 4.0);  // lambda-ordered
        CHECK(r.planes[0].side == PlaneSide::Below);
        CHECK(r.planes[0].sigma_minus_fraction == 0.0);
        CHECK(r.planes[1].side == PlaneSide::At);
        CHECK(r.planes[1].max_violation <= r.slack);
        CHECK(r.planes[2].side == PlaneSide::Above);
        CHECK(r.planes[2].sigma_minus_fraction > 0.0);
        CHECK(r.pass);
        for (const auto& p : r.planes) {
            CHECK(p.sigma_minus_fraction >= 0.0);
            CHECK(p.sigma_minus_fraction <= 1.0);
        }
        CHECK_THROWS_AS(sigma_minus_scan(u, 0, {0.01}), AlignmentError);
    }

    TEST_CASE("every plane below the center is clean on every preset") {
        for (const std::string& name : preset_names()) {
            const GridFunction& u = solved(name).solution;
            const GridSpec& s = u.spec();
            for (int axis = 0; axis < s.dim; ++axis) {
                const MovingPlaneReport r =
                    sigma_minus_scan(u, axis, half_grid_lambdas(s, -s.half_width, s.half_width - 0.5 * s.spacing()));
                CAPTURE(name);
                CHECK(r.pass);
                for (const auto& p : r.planes)
                    if (p.side == PlaneSide::Below) CHECK(p.sigma_minus_fraction == 0.0);
            }
        }
    }

    TEST_CASE("half_grid_lambdas") {
        const GridSpec s{1, 2.0, 8};
        const auto l = half_grid_lambdas(s, -0.3, 0.3);
        CHECK(l == std::vector<double>{-0.25, 0.0, 0.25});
    }

    TEST_CASE("reflection identity on the oracle grid") {
        const GridFunction& u = solved("small-oracle").solution;
        for (double lambda : {-4.0, -2.0, 0.0}) {
            const ReflectionIdentityReport r = reflection_identity_residual(u, 2.0, 3.0, lambda, 0, {});
            CHECK(r.within_budget);
            CHECK(r.residual < 1e-4);
            if (lambda == 0.0) {
                CHECK(r.lhs_max < 1e-12);
                CHECK(r.residual < 1e-12);
            }
        }
        const GridFunction g = GridFunction::sample(u.spec(), [](auto x) { return std::exp(-x[0] * x[0]); });
        CHECK(reflection_identity_residual(g, 2.0, 3.0, -2.0, 0, {}).residual > 1e-2);
        CHECK_THROWS_AS(reflection_identity_residual(solved("iso2d").solution, 2.0, 3.0, -2.0, 0, {}), CostGuardError);
        CHECK_THROWS_AS(reflection_identity_residual(u, 2.0, 3.0, -2.01, 0, {}), AlignmentError);
    }

    TEST_CASE("kernel reflection monotonicity") {
        for (double alpha : {0.5, 2.0, 3.7})
            for (int n = 1; n <= 3; ++n) {
                const auto r = kernel_reflection_monotonicity({alpha, n}, 0.5, 0, 2000, 17);
                CHECK(r.samples == 2000);
                CHECK(r.violations == 0);
                CHECK(r.max_violation == 0.0);
                CHECK(r.on_plane > 0);
                CHECK(r.max_on_plane_difference == 0.0);
            }
        const auto a = kernel_reflection_monotonicity({1.5, 2}, -1.0, 1, 500, 99);
        const auto b = kernel_reflection_monotonicity({1.5, 2}, -1.0, 1, 500, 99);
        CHECK(to_json(a) == to_json(b));
        CHECK_THROWS_AS(kernel_reflection_monotonicity({1.5, 2}, 0.0, 2, 10, 1), DomainError);
    }

    TEST_CASE("contraction factor") {
        const RunConfig cfg = preset("sech1d");
        const GridFunction& u = solved("sech1d").solution;
        const GridSpec& s = u.spec();
        const EmbeddingEstimate est = estimate_embedding_constant(s, cfg.problem, &u);
        CHECK(est.ratios.size() == 16);
        CHECK(est.constant > 0.0);
        CHECK(check_contraction(u, cfg.problem, -s.half_width, 0, est.constant) == 0.0);
        // Strictly decreasing as lambda moves down from the center.
        double previous = check_contraction(u, cfg.problem, 0.0, 0, est.constant);
        CHECK(std::isfinite(previous));
        for (double lambda = -0.5; lambda > -8.0; lambda -= 0.5) {
            const double f = check_contraction(u, cfg.problem, lambda, 0, est.constant);
            CHECK(f < previous);
            previous = f;
        }
        // Whole box: C ||u||_q^{beta - 1}.
        double integral = 0.0;
        for (double v : u.values()) integral += std::pow(v, 4) * s.spacing();
        CHECK(check_contraction(u, cfg.problem, s.half_width, 0, est.constant) ==
              Approx(est.constant * std::pow(integral, 0.5)).epsilon(1e-12));

        MovingPlaneReport r = sigma_minus_scan(u, 0, half_grid_lambdas(s, -s.half_width, s.half_width - s.spacing()));
        CHECK(attach_contraction(r, u, cfg.problem, est.constant));
        REQUIRE(r.contraction_threshold.has_value());
        for (const auto& p : r.planes)
            if (p.lambda <= *r.contraction_threshold) CHECK(*p.contraction_factor <= 0.5);
    }

    TEST_CASE("reports serialize") {
        const GridFunction& u = solved("small-oracle").solution;
        const auto j = to_json(check_symmetry(u, {}));
        CHECK(j["pass"] == true);
        CHECK(j["thresholds"]["asymmetry"] == 1e-6);
        const auto m = to_json(sigma_minus_scan(u, 0, {-1.0, 1.0}));
        CHECK(m["planes"].size() == 2);
        CHECK(m["contraction_threshold"].is_null());
    }

}  // TEST_SUITE
