#include "besselpot/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "besselpot/errors.hpp"

namespace besselpot {

void GridSpec::validate() const {
    if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("grid half_width must be positive");
    if (points_per_dim < 2 || points_per_dim % 2 != 0) throw DomainError("points_per_dim must be even and >= 2");
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_dim);
    return n;
}

std::size_t GridSpec::stride(int axis) const {
    std::size_t s = 1;
    for (int a = dim - 1; a > axis; --a) s *= static_cast<std::size_t>(points_per_dim);
    return s;
}

std::array<int, 3> GridSpec::unravel(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % points_per_dim);
        flat /= points_per_dim;
    }
    return idx;
}

std::size_t GridSpec::ravel(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) flat = flat * points_per_dim + static_cast<std::size_t>(idx[a]);
    return flat;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (values_.size() != spec_.size()) throw ShapeError("value array length does not match grid size");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
}

GridFunction::GridFunction(GridSpec spec) : spec_(spec) {
    spec_.validate();
    values_.assign(spec_.size(), 0.0);
}

GridFunction GridFunction::sample(const GridSpec& spec, const std::function<double(std::span<const double>)>& f) {
    spec.validate();
    std::vector<double> values(spec.size());
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto idx = spec.unravel(i);
        for (int a = 0; a < spec.dim; ++a) x[a] = spec.coordinate(idx[a]);
        values[i] = f(std::span<const double>(x.data(), spec.dim));
    }
    return GridFunction(spec, std::move(values));
}

bool GridFunction::is_positive() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool HalfSpaceMask::contains_index(int i_axis) const {
    // Nodes on the plane belong to Sigma_lambda; the slack absorbs roundoff in lambda.
    const bool in_sigma = spec.coordinate(i_axis) >= lambda - 1e-9 * spec.spacing();
    return complement ? !in_sigma : in_sigma;
}

HalfSpaceMask sigma_mask(const GridSpec& spec, int axis, double lambda) {
    spec.validate();
    if (axis < 0 || axis >= spec.dim) throw DomainError("axis out of range");
    return {spec, axis, lambda, false};
}

double lp_norm(const GridFunction& f, double p, const std::optional<HalfSpaceMask>& mask) {
    const bool inf = (p == kInfinityNorm) || std::isinf(p);
    if (!inf && !(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
    if (mask && !(mask->spec == f.spec())) throw ShapeError("mask and grid function live on different grids");
    const auto values = f.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (mask && !mask->contains(i)) continue;
        const double a = std::abs(values[i]);
        if (inf)
            acc = std::max(acc, a);
        else
            acc += std::pow(a, p);
    }
    if (inf) return acc;
    return std::pow(acc * f.spec().cell_volume(), 1.0 / p);
}

long half_grid_index(const GridSpec& spec, double lambda) {
    const double k = 2.0 * (lambda + spec.half_width) / spec.spacing();
    const double rounded = std::round(k);
    if (!std::isfinite(k) || std::abs(k - rounded) > 1e-9 * std::max(1.0, std::abs(k))) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " is not on the half-grid (multiples of h/2 = " << 0.5 * spec.spacing() << ")";
        throw AlignmentError(msg.str());
    }
    return static_cast<long>(rounded);
}

double half_grid_value(const GridSpec& spec, long k) { return -spec.half_width + 0.5 * spec.spacing() * k; }

double half_grid_below(const GridSpec& spec, double x) {
    const double half = 0.5 * spec.spacing();
    long k = static_cast<long>(std::ceil((x + spec.half_width) / half)) - 1;
    while (half_grid_value(spec, k) >= x) --k;
    return half_grid_value(spec, k);
}

GridFunction reflect(const GridFunction& f, int axis, double lambda) {
    const GridSpec& spec = f.spec();
    if (axis < 0 || axis >= spec.dim) throw DomainError("axis out of range");
    const long k = half_grid_index(spec, lambda);
    const long n = spec.points_per_dim;
    const std::size_t stride = spec.stride(axis);
    const auto src = f.values();
    std::vector<double> out(src.size());
    for (std::size_t flat = 0; flat < src.size(); ++flat) {
        const long i = spec.unravel(flat)[axis];
        // 2 lambda - x_i = -L + (k - i) h
        const long j = (((k - i) % n) + n) % n;
        out[flat] = src[static_cast<std::size_t>(static_cast<long>(flat) + (j - i) * static_cast<long>(stride))];
    }
    return GridFunction(spec, std::move(out));
}

}  // namespace besselpot
