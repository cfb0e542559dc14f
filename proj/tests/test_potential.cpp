#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besselpot/errors.hpp"
#include "besselpot/potential.hpp"
#include "besselpot/verify.hpp"
#include "oracles.hpp"

using namespace besselpot;
using doctest::Approx;

namespace {

GridFunction gaussian(const GridSpec& s, double width = 1.0, double scale = 1.0, double center = 0.0) {
    return GridFunction::sample(s, [&](auto x) {
        double r2 = 0.0;
        for (double v : x) r2 += (v - center) * (v - center);
        return scale * std::exp(-r2 / (width * width));
    });
}

GridFunction random_function(const GridSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(spec.size());
    for (double& x : v) x = normal(rng);
    return GridFunction(spec, std::move(v));
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_SUITE("potential") {
    TEST_CASE("symbol table") {
        const PotentialOperator op({2, 4.0, 16}, 1.3);
        CHECK(op.symbol_table().size() == 16 * 9);
        CHECK(op.symbol_table()[0] == 1.0);
        for (double v : op.symbol_table()) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
        CHECK_THROWS_AS(PotentialOperator({1, 4.0, 16}, -0.5), DomainError);
    }

    TEST_CASE("constants are fixed and alpha = 0 is the identity") {
        const GridSpec s{2, 3.0, 32};
        const GridFunction c = GridFunction::sample(s, [](auto) { return 2.75; });
        const GridFunction out = PotentialOperator(s, 1.7).apply(c);
        for (double v : out.values()) CHECK(v == Approx(2.75).epsilon(1e-14));
        const GridFunction f = random_function(s, 3);
        CHECK(PotentialOperator(s, 0.0).apply(f) == f);
    }

    TEST_CASE("discrete plane waves are eigenfunctions") {
        const GridSpec s{1, 8.0, 64};
        for (int m : {1, 5, 17}) {
            const double xi = m / (2.0 * s.half_width);
            const GridFunction wave =
                GridFunction::sample(s, [&](auto x) { return std::cos(2.0 * std::numbers::pi * xi * x[0]); });
            for (double alpha : {0.5, 2.0}) {
                const double factor = std::pow(1.0 + 4.0 * std::numbers::pi * std::numbers::pi * xi * xi, -0.5 * alpha);
                const GridFunction out = PotentialOperator(s, alpha).apply(wave);
                for (std::size_t i = 0; i < s.size(); ++i)
                    CHECK(out[i] == Approx(factor * wave[i]).epsilon(1e-12).scale(1.0));
            }
        }
    }

    TEST_CASE("apply is linear and rejects other grids") {
        const GridSpec s{2, 4.0, 32};
        const PotentialOperator op(s, 1.5);
        const GridFunction f = random_function(s, 1), g = random_function(s, 2);
        std::vector<double> combo(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) combo[i] = 2.0 * f[i] - 3.0 * g[i];
        const GridFunction lhs = op.apply(GridFunction(s, combo));
        const GridFunction bf = op.apply(f), bg = op.apply(g);
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(lhs[i] == Approx(2.0 * bf[i] - 3.0 * bg[i]).scale(10.0).epsilon(1e-13));
        CHECK_THROWS_AS(op.apply(gaussian({2, 4.0, 16})), ShapeError);
    }

    TEST_CASE("apply preserves radial symmetry") {
        // The torus itself is not radially symmetric; periodic images of the
        // kernel tail enter at ~exp(-(2L - r)), so the box is wide and the
        // comparison stays within half of it.
        const GridSpec s{2, 16.0, 128};
        const GridFunction f = gaussian(s, 1.2);
        const GridFunction out = PotentialOperator(s, 2.0).apply(f);
        SymmetryThresholds t;
        t.radius_fraction = 0.5;
        const double in_asym = check_symmetry(f, t).asymmetry;
        CHECK(check_symmetry(out, t).asymmetry <= in_asym + 1e-9);
    }

    TEST_CASE("brute-force convolution of a unit spike reproduces the kernel") {
        const GridSpec s{1, 8.0, 64};
        std::vector<double> spike(s.size(), 0.0);
        const int center = 32;
        spike[center] = 1.0 / s.spacing();
        const GridFunction out = apply_bruteforce(2.0, GridFunction(s, spike));
        for (int i = 0; i < 64; ++i) {
            const double r = std::abs(s.coordinate(i));
            if (std::abs(i - center) >= 2) CHECK(out[i] == Approx(0.5 * std::exp(-r)).epsilon(1e-12));
        }
        // Diagonal and neighbour weights carry the moment correction.
        CHECK(out[center] == Approx(0.5).epsilon(0.05));
        CHECK(apply_bruteforce(2.0, GridFunction(s)) == GridFunction(s));
    }

    TEST_CASE("spectral and brute-force paths agree") {
        const GridSpec s{1, 16.0, 256};
        const GridFunction f = gaussian(s);
        for (double alpha : {1.5, 2.0}) {
            const GridFunction fast = PotentialOperator(s, alpha).apply(f);
            const double peak = fast.sup_norm();
            CHECK(sup_diff(fast, apply_bruteforce(alpha, f)) < 1e-6 * peak);
            // The simpler self weights are kept selectable; their error is larger.
            BruteforceConfig mass;
            mass.self_weight = SelfWeight::MassConsistent;
            CHECK(sup_diff(fast, apply_bruteforce(alpha, f, mass)) < 1e-4 * peak);
            BruteforceConfig cell;
            cell.self_weight = SelfWeight::CellAverage;
            const double cell_err = sup_diff(fast, apply_bruteforce(alpha, f, cell));
            CHECK(cell_err < 5e-2 * peak);
            CHECK(cell_err > 1e-6 * peak);
        }
    }

    TEST_CASE("lattice kernel moments") {
        for (double alpha : {1.5, 2.0, 3.0}) {
            const double h = 0.125;
            LatticeKernel k({alpha, 1}, h);
            double mass = k(0), second = 0.0;
            for (long j = 1; j < 4000; ++j) {
                mass += 2.0 * k(j * j);
                second += 2.0 * k(j * j) * (j * h) * (j * h);
            }
            CHECK(mass * h == Approx(1.0).epsilon(1e-9));
            CHECK(second * h == Approx(alpha).epsilon(1e-8));
        }
    }

    TEST_CASE("brute-force cost guard") {
        CHECK_THROWS_AS(apply_bruteforce(2.0, gaussian({2, 4.0, 128})), CostGuardError);
        CHECK_THROWS_AS(apply_bruteforce(0.0, gaussian({1, 4.0, 16})), DomainError);
    }

    TEST_CASE("compose_check examples") {
        for (const GridSpec& s : {GridSpec{1, 8.0, 128}, GridSpec{2, 4.0, 32}}) {
            const GridFunction f = random_function(s, 99);
            const double scale = f.sup_norm();
            CHECK(compose_check(2.0, 2.0, f) < 1e-12 * scale);
            CHECK(compose_check(0.7, 1.3, f) < 1e-12 * scale);
            CHECK(compose_check(1.0, 1.0, f) < 1e-12 * scale);
            CHECK(compose_check(0.0, 1.7, f) < 1e-14 * scale);
        }
        CHECK_THROWS_AS(compose_check(-1.0, 1.0, gaussian({1, 4.0, 16})), DomainError);
    }

    TEST_CASE("nonexpansive_check examples") {
        const GridSpec s{1, 16.0, 256};
        const GridFunction noise = random_function(s, 5);
        for (double alpha : {0.3, 1.0, 2.0}) {
            CHECK(nonexpansive_check(alpha, noise, 2.0) <= 1.0 + 1e-15);
            for (double p : {1.0, kInfinityNorm}) CHECK(nonexpansive_check(alpha, gaussian(s), p) <= 1.0 + 1e-6);
        }
        CHECK(nonexpansive_check(0.0, noise, 3.0) == Approx(1.0).epsilon(1e-15));
        CHECK_THROWS_AS(nonexpansive_check(1.0, GridFunction(s), 2.0), UndefinedRatioError);
    }

    TEST_CASE("embedding ratio") {
        const GridSpec s{1, 16.0, 512};
        const GridFunction base = gaussian(s);
        const double r1 = embedding_ratio(2.0, base, 4.0, 3.0);
        CHECK(std::isfinite(r1));
        // Both norms are 1-homogeneous and B is linear.
        for (double c : {0.1, 3.0, 10.0})
            CHECK(embedding_ratio(2.0, gaussian(s, 1.0, c), 4.0, 3.0) == Approx(r1).epsilon(1e-12));
        // Dilations s in [0.5, 2] stay within 10x of the s = 1 value (measured spread below 2x).
        for (double w : {0.5, 0.75, 1.5, 2.0}) {
            const double rw = embedding_ratio(2.0, gaussian(s, w), 4.0, 3.0);
            CHECK(rw < 10.0 * r1);
            CHECK(rw > 0.1 * r1);
        }
        CHECK_THROWS_AS(embedding_ratio(2.0, base, 2.5, 3.0), PreconditionError);
        CHECK_THROWS_AS(embedding_ratio(2.0, GridFunction(s), 4.0, 3.0), UndefinedRatioError);
        CHECK_NOTHROW(require_embedding_exponent(2.0, 3.0, 3, 3.01));
        CHECK_THROWS_AS(require_embedding_exponent(1.0, 3.0, 3, 5.0), PreconditionError);
    }

}  // TEST_SUITE
