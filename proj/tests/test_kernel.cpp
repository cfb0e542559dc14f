#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besselpot/errors.hpp"
#include "besselpot/kernel.hpp"
#include "oracles.hpp"

using namespace besselpot;
using doctest::Approx;

TEST_SUITE("kernel") {
    TEST_CASE("gamma_alpha examples") {
        CHECK(gamma_alpha(2.0) == Approx(4.0 * std::numbers::pi).epsilon(1e-15));
        CHECK(gamma_alpha(1.0) == Approx(2.0 * std::numbers::pi).epsilon(1e-15));
        CHECK(gamma_alpha(4.0) == Approx(16.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
        CHECK_THROWS_AS(gamma_alpha(0.0), DomainError);
        CHECK_THROWS_AS(gamma_alpha(-1.0), DomainError);
    }

    TEST_CASE("closed forms are Fourier inverses of the symbol") {
        // Before trusting 1/2 e^{-|x|} (n = 1) and e^{-r} / (4 pi r) (n = 3) as
        // references, transform them numerically and compare with the symbol.
        for (double xi : {0.0, 0.05, 1.0 / (2.0 * std::numbers::pi), 0.3, 0.8}) {
            const double symbol = 1.0 / (1.0 + 4.0 * std::numbers::pi * std::numbers::pi * xi * xi);
            const double ft1 = oracle::fourier_even_1d([](double x) { return 0.5 * std::exp(-x); }, xi, 60.0, 200000);
            CHECK(std::abs(ft1 - symbol) < 1e-9);
            if (xi > 0.0) {
                const double ft3 = oracle::fourier_radial_3d(
                    [](double r) { return std::exp(-r) / (4.0 * std::numbers::pi); }, xi, 60.0, 200000);
                CHECK(std::abs(ft3 - symbol) < 1e-9);
            }
        }
    }

    TEST_CASE("bessel_kernel matches closed forms") {
        CHECK(bessel_kernel({2.0, 1}, 0.0).value == Approx(0.5).epsilon(1e-12));
        CHECK(bessel_kernel({2.0, 1}, 3.0).value == Approx(0.5 * std::exp(-3.0)).epsilon(1e-12));
        CHECK(bessel_kernel({2.0, 1}, 3.0).value == Approx(0.0248935).epsilon(1e-5));
        // e^{-1} / (4 pi) = 0.0292749...
        CHECK(bessel_kernel({2.0, 3}, 1.0).value == Approx(std::exp(-1.0) / (4.0 * std::numbers::pi)).epsilon(1e-12));
        CHECK(bessel_kernel({2.0, 3}, 1.0).value == Approx(0.0292749).epsilon(1e-5));
        for (double r = 0.1; r <= 10.0; r *= 1.3) {
            CHECK(std::abs(bessel_kernel({2.0, 1}, r).value / (0.5 * std::exp(-r)) - 1.0) < 1e-8);
            CHECK(std::abs(bessel_kernel({2.0, 3}, r).value / (std::exp(-r) / (4.0 * std::numbers::pi * r)) - 1.0) <
                  1e-8);
        }
    }

    TEST_CASE("bessel_kernel matches the Macdonald-function form for fractional orders") {
        for (double alpha : {0.5, 1.0, 1.5, 2.5, 3.7})
            for (int n = 1; n <= 3; ++n)
                for (double r : {0.05, 0.5, 1.0, 4.0, 15.0}) {
                    const double ref = oracle::kernel_via_macdonald(alpha, n, r);
                    const double got = bessel_kernel({alpha, n}, r).value;
                    CAPTURE(alpha);
                    CAPTURE(n);
                    CAPTURE(r);
                    CHECK(std::abs(got / ref - 1.0) < 1e-9);
                }
    }

    TEST_CASE("bessel_kernel at the origin") {
        CHECK_THROWS_AS(bessel_kernel({1.0, 1}, 0.0), SingularityError);
        CHECK_THROWS_AS(bessel_kernel({2.0, 2}, 0.0), SingularityError);
        CHECK_THROWS_AS(bessel_kernel({2.0, 3}, 0.0), SingularityError);
        CHECK_THROWS_AS(bessel_kernel({2.0, 1}, -1.0), DomainError);
        // alpha > n: the limit of the Macdonald form, Gamma((a-n)/2) / ((4 pi)^{n/2} Gamma(a/2)).
        for (auto [alpha, n] : {std::pair{1.5, 1}, std::pair{3.7, 2}, std::pair{5.0, 3}}) {
            const double limit =
                std::tgamma(0.5 * (alpha - n)) / (std::pow(4.0 * std::numbers::pi, 0.5 * n) * std::tgamma(0.5 * alpha));
            CHECK(bessel_kernel({alpha, n}, 0.0).value == Approx(limit).epsilon(1e-12));
            CHECK(bessel_kernel({alpha, n}, 1e-3).value < limit);
        }
    }

    TEST_CASE("kernel error paths") {
        CHECK_THROWS_AS(bessel_kernel({0.0, 1}, 1.0), DomainError);
        CHECK_THROWS_AS(bessel_kernel({1.0, 4}, 1.0), DomainError);
        QuadratureConfig bad;
        bad.rel_tol = 0.0;
        CHECK_THROWS_AS(bad.validate(), DomainError);
        bad = {};
        bad.t_min = 1.0;
        bad.t_max = 0.0;
        CHECK_THROWS_AS(bad.validate(), DomainError);
        QuadratureConfig starved;
        starved.max_subdivisions = 1;
        starved.rel_tol = 1e-15;
        try {
            bessel_kernel({0.5, 3}, 1e-3, starved);
            FAIL("expected QuadratureError");
        } catch (const QuadratureError& e) {
            CHECK(e.achieved_error() > 0.0);
        }
    }

    TEST_CASE("bessel_symbol examples and properties") {
        const double z[] = {0.0};
        CHECK(bessel_symbol({2.0, 1}, z) == 1.0);
        CHECK(bessel_symbol({0.7, 1}, z) == 1.0);
        const double f1[] = {1.0 / (2.0 * std::numbers::pi)};
        CHECK(bessel_symbol({2.0, 1}, f1) == Approx(0.5).epsilon(1e-15));
        const double f2[] = {1.0 / (2.0 * std::numbers::pi), 0.0};
        CHECK(bessel_symbol({1.0, 2}, f2) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
        double previous = 1.0;
        for (double x = 0.01; x < 10.0; x *= 1.5) {
            const double f[] = {x, 0.0, 0.0};
            const double s = bessel_symbol({1.3, 3}, f);
            CHECK(s > 0.0);
            CHECK(s < previous);
            previous = s;
        }
    }

    TEST_CASE("numerical transform of the sampled kernel matches the symbol") {
        for (double alpha : {1.5, 3.0}) {
            const KernelParams p{alpha, 1};
            for (double xi : {0.0, 0.1, 0.25}) {
                // r = s^2 smooths the r^{alpha-1} cusp at the origin.
                const double ft = 2.0 * oracle::simpson(
                                            [&](double s) {
                                                return 2.0 * s * bessel_kernel(p, s * s).value *
                                                       std::cos(2.0 * std::numbers::pi * xi * s * s);
                                            },
                                            0.0, std::sqrt(50.0), 20000);
                const double f[] = {xi};
                CHECK(std::abs(ft - bessel_symbol(p, f)) < 1e-7);
            }
        }
    }

    TEST_CASE("kernel_mass is one") {
        for (double alpha : {0.5, 1.0, 2.0, 3.7})
            for (int n = 1; n <= 3; ++n) CHECK(std::abs(kernel_mass({alpha, n}).value - 1.0) < 1e-6);
    }

    TEST_CASE("moments and tails") {
        for (auto [alpha, n] : {std::pair{2.0, 1}, std::pair{1.5, 2}, std::pair{0.5, 3}}) {
            CHECK(kernel_second_moment({alpha, n}).value == Approx(n * alpha).epsilon(1e-9));
            const double tail = radial_tail_mass({alpha, n}, 2.0).value;
            CHECK(tail > 0.0);
            CHECK(tail < 1.0);
            CHECK(radial_tail_mass({alpha, n}, 4.0).value < tail);
            CHECK(radial_tail_second_moment({alpha, n}, 2.0).value > 4.0 * tail);
        }
        // n = 1, alpha = 2: int_{|x| > R} 1/2 e^{-|x|} = e^{-R}.
        CHECK(radial_tail_mass({2.0, 1}, 3.0).value == Approx(std::exp(-3.0)).epsilon(1e-10));
    }

    TEST_CASE("cell_average against the elementary integral") {
        for (double h : {0.05, 0.125, 0.5}) {
            const double exact = (1.0 - std::exp(-0.5 * h)) / (0.5 * h) * 0.5;
            CHECK(cell_average({2.0, 1}, h).value == Approx(exact).epsilon(1e-10));
        }
        CHECK(std::isfinite(cell_average({0.5, 3}, 0.1).value));
    }

    TEST_CASE("radial monotonicity and positivity on random radii") {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> radius(1e-3, 20.0);
        for (int i = 0; i < 200; ++i) {
            const KernelParams p{0.3 + 3.5 * (i % 7) / 6.0, 1 + i % 3};
            double a = radius(rng), b = radius(rng);
            if (a > b) std::swap(a, b);
            if (b - a < 1e-9) continue;
            const double ga = bessel_kernel(p, a).value, gb = bessel_kernel(p, b).value;
            CHECK(gb > 0.0);
            CHECK(ga > gb);
            const KernelValue d = bessel_kernel_difference(p, a, b);
            CHECK(d.value >= 0.0);
            CHECK(std::abs(d.value - (ga - gb)) <= 1e-10 * ga);
        }
        CHECK(bessel_kernel_difference({1.0, 2}, 1.5, 1.5).value == 0.0);
        CHECK_THROWS_AS(bessel_kernel_difference({1.0, 2}, 2.0, 1.0), DomainError);
    }

}  // TEST_SUITE
