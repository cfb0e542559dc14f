#pragma once

// Truncated periodic box [-L, L)^n sampled at x_i = -L + i h, h = 2L/N.
// Values are stored row-major with axis 0 varying slowest.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace besselpot {

struct GridSpec {
    int dim = 1;
    double half_width = 16.0;
    int points_per_dim = 256;

    void validate() const;

    double spacing() const { return 2.0 * half_width / points_per_dim; }
    double cell_volume() const;
    std::size_t size() const;
    double coordinate(int i) const { return -half_width + i * spacing(); }
    std::size_t stride(int axis) const;

    std::array<int, 3> unravel(std::size_t flat) const;
    std::size_t ravel(const std::array<int, 3>& idx) const;

    bool operator==(const GridSpec&) const = default;
};

class GridFunction {
public:
    /// Throws DomainError on non-finite values, ShapeError on a length mismatch.
    GridFunction(GridSpec spec, std::vector<double> values);
    explicit GridFunction(GridSpec spec);  // zeros

    /// Samples f at every node; f receives the n coordinates of the node.
    static GridFunction sample(const GridSpec& spec, const std::function<double(std::span<const double>)>& f);

    const GridSpec& spec() const { return spec_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool is_positive() const;
    double sup_norm() const;

    bool operator==(const GridFunction&) const = default;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Sample points with x_axis >= lambda (or < lambda when complemented).
struct HalfSpaceMask {
    GridSpec spec;
    int axis = 0;
    double lambda = 0.0;
    bool complement = false;

    bool contains_index(int i_axis) const;
    bool contains(std::size_t flat) const { return contains_index(spec.unravel(flat)[axis]); }
    HalfSpaceMask complemented() const { return {spec, axis, lambda, !complement}; }
};

HalfSpaceMask sigma_mask(const GridSpec& spec, int axis, double lambda);

inline constexpr double kInfinityNorm = -1.0;

/// Riemann-sum L^p norm (sum |f|^p h^n)^(1/p); pass kInfinityNorm for p = inf.
double lp_norm(const GridFunction& f, double p, const std::optional<HalfSpaceMask>& mask = std::nullopt);

/// Integer k with lambda = -L + k h / 2. Throws AlignmentError off the half-grid.
long half_grid_index(const GridSpec& spec, double lambda);
double half_grid_value(const GridSpec& spec, long k);

/// Largest half-grid value strictly below x.
double half_grid_below(const GridSpec& spec, double x);

/// u_lambda(x) = u(2 lambda - x_axis, ...), coordinates wrapped periodically.
GridFunction reflect(const GridFunction& f, int axis, double lambda);

}  // namespace besselpot
