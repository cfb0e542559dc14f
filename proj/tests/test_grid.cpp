#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "besselpot/errors.hpp"
#include "besselpot/grid.hpp"

using namespace besselpot;
using doctest::Approx;

namespace {

GridFunction random_function(const GridSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(spec.size());
    for (double& x : v) x = normal(rng);
    return GridFunction(spec, std::move(v));
}

}  // namespace

TEST_SUITE("grid") {
    TEST_CASE("GridSpec geometry") {
        const GridSpec s{2, 4.0, 16};
        CHECK(s.spacing() == 0.5);
        CHECK(s.cell_volume() == 0.25);
        CHECK(s.size() == 256);
        CHECK(s.coordinate(0) == -4.0);
        CHECK(s.coordinate(8) == 0.0);
        CHECK(s.stride(0) == 16);
        CHECK(s.stride(1) == 1);
        for (std::size_t i : {0u, 17u, 255u}) CHECK(s.ravel(s.unravel(i)) == i);
        CHECK_THROWS_AS((GridSpec{4, 1.0, 8}.validate()), DomainError);
        CHECK_THROWS_AS((GridSpec{1, 1.0, 7}.validate()), DomainError);
        CHECK_THROWS_AS((GridSpec{1, -1.0, 8}.validate()), DomainError);
    }

    TEST_CASE("GridFunction validation") {
        const GridSpec s{1, 1.0, 4};
        CHECK_THROWS_AS(GridFunction(s, {1, 2, 3}), ShapeError);
        CHECK_THROWS_AS(GridFunction(s, {1, 2, std::numeric_limits<double>::quiet_NaN(), 4}), DomainError);
        CHECK_THROWS_AS(GridFunction(s, {1, 2, std::numeric_limits<double>::infinity(), 4}), DomainError);
        CHECK(GridFunction(s, {1, 2, 3, 4}).is_positive());
        CHECK_FALSE(GridFunction(s, {1, 0, 3, 4}).is_positive());
        CHECK(GridFunction(s, {1, -5, 3, 4}).sup_norm() == 5.0);
    }

    TEST_CASE("lp_norm examples") {
        for (int n : {8, 16, 64}) {
            const GridSpec s{1, 2.0, n};
            const GridFunction one = GridFunction::sample(s, [](auto) { return 1.0; });
            CHECK(lp_norm(one, 1.0) == Approx(4.0).epsilon(1e-14));
            const GridFunction zero(s);
            for (double p : {1.0, 2.0, 3.5, kInfinityNorm}) CHECK(lp_norm(zero, p) == 0.0);
            const GridFunction indicator = GridFunction::sample(s, [](auto x) { return x[0] >= 0.0 ? 1.0 : 0.0; });
            CHECK(std::abs(lp_norm(indicator, 1.0) - 2.0) <= s.spacing());
        }
        const GridSpec s{1, 2.0, 8};
        CHECK_THROWS_AS(lp_norm(GridFunction(s), 0.5), DomainError);
        const GridFunction f(s, {1, 2, 3, 4, 5, 6, 7, -9});
        CHECK(lp_norm(f, kInfinityNorm) == 9.0);
        CHECK(lp_norm(f, kInfinityNorm, sigma_mask(s, 0, 0.0).complemented()) == 4.0);
        CHECK(lp_norm(f, 2.0) == Approx(std::sqrt((1 + 4 + 9 + 16 + 25 + 36 + 49 + 81) * 0.5)));
    }

    TEST_CASE("lp_norm is absolutely homogeneous") {
        const GridSpec s{2, 3.0, 16};
        const GridFunction f = random_function(s, 7);
        std::vector<double> scaled(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) scaled[i] = -2.5 * f[i];
        const GridFunction g(s, scaled);
        for (double p : {1.0, 2.0, 4.0, kInfinityNorm})
            CHECK(lp_norm(g, p) == Approx(2.5 * lp_norm(f, p)).epsilon(1e-13));
    }

    TEST_CASE("sigma_mask examples") {
        const GridSpec s{1, 2.0, 8};
        std::vector<double> inside;
        const HalfSpaceMask m = sigma_mask(s, 0, 0.0);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (m.contains(i)) inside.push_back(s.coordinate(static_cast<int>(i)));
        CHECK(inside == std::vector<double>{0.0, 0.5, 1.0, 1.5});

        std::size_t all = 0, last = 0;
        // The last node is L - h itself, so the last slab is selected by lambda = L - h.
        const HalfSpaceMask whole = sigma_mask(s, 0, -2.0), slab = sigma_mask(s, 0, 2.0 - 0.5);
        for (std::size_t i = 0; i < s.size(); ++i) {
            all += whole.contains(i);
            last += slab.contains(i);
        }
        CHECK(all == s.size());
        CHECK(last == 1);
        std::size_t none = 0;
        for (std::size_t i = 0; i < s.size(); ++i) none += sigma_mask(s, 0, 2.0 - 0.5 + 1e-6).contains(i);
        CHECK(none == 0);

        const GridSpec plane{2, 2.0, 8};
        std::size_t slab2 = 0;
        for (std::size_t i = 0; i < plane.size(); ++i) slab2 += sigma_mask(plane, 1, 1.5).contains(i);
        CHECK(slab2 == 8);
    }

    TEST_CASE("masks partition and nest") {
        const GridSpec s{2, 2.0, 16};
        for (double l1 : {-1.75, -0.5, 0.25}) {
            const HalfSpaceMask m = sigma_mask(s, 1, l1), c = m.complemented();
            const HalfSpaceMask inner = sigma_mask(s, 1, l1 + 0.75);
            for (std::size_t i = 0; i < s.size(); ++i) {
                CHECK(m.contains(i) != c.contains(i));
                if (inner.contains(i)) CHECK(m.contains(i));
            }
        }
    }

    TEST_CASE("half-grid indexing") {
        const GridSpec s{1, 2.0, 8};
        CHECK(half_grid_index(s, -2.0) == 0);
        CHECK(half_grid_index(s, 0.0) == 8);
        CHECK(half_grid_index(s, 0.25) == 9);
        CHECK(half_grid_value(s, 9) == 0.25);
        CHECK(half_grid_below(s, 0.3) == 0.25);
        CHECK(half_grid_below(s, 0.25) == 0.0);
        CHECK_THROWS_AS(half_grid_index(s, 0.1), AlignmentError);
    }

    TEST_CASE("reflect examples") {
        const GridSpec s{1, 2.0, 8};
        const GridFunction even = GridFunction::sample(s, [](auto x) { return std::exp(-x[0] * x[0]); });
        // x = -2 has no partner inside [-2, 2); its wrapped mirror is itself.
        CHECK(reflect(even, 0, 0.0) == even);

        std::vector<double> spike(8, 0.0);
        spike[6] = 1.0;  // x = 1
        const GridFunction r = reflect(GridFunction(s, spike), 0, 0.0);
        CHECK(r[2] == 1.0);  // x = -1
        double total = 0.0;
        for (double v : r.values()) total += v;
        CHECK(total == 1.0);

        CHECK_THROWS_AS(reflect(even, 0, 0.1), AlignmentError);
        CHECK_THROWS_AS(reflect(even, 1, 0.0), DomainError);
    }

    TEST_CASE("reflection is an involution and preserves norms") {
        for (const GridSpec& s : {GridSpec{1, 4.0, 32}, GridSpec{2, 4.0, 16}, GridSpec{3, 2.0, 8}}) {
            const GridFunction f = random_function(s, 11 + s.dim);
            for (int axis = 0; axis < s.dim; ++axis)
                for (long k : {0L, 3L, static_cast<long>(s.points_per_dim), 2L * s.points_per_dim - 1}) {
                    const double lambda = half_grid_value(s, k);
                    const GridFunction r = reflect(f, axis, lambda);
                    CHECK(reflect(r, axis, lambda) == f);
                    for (double p : {1.0, 2.0, 3.0, kInfinityNorm})
                        CHECK(lp_norm(r, p) == Approx(lp_norm(f, p)).epsilon(1e-13));
                }
        }
    }

}  // TEST_SUITE
