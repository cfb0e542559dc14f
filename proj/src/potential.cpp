#include "besselpot/potential.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <sstream>

#include "besselpot/errors.hpp"
#include "fftw_util.hpp"

namespace besselpot {

namespace {

using detail::fftw_buffer;

std::size_t half_spectrum_size(const GridSpec& spec) {
    std::size_t n = static_cast<std::size_t>(spec.points_per_dim / 2 + 1);
    for (int a = 0; a + 1 < spec.dim; ++a) n *= static_cast<std::size_t>(spec.points_per_dim);
    return n;
}

}  // namespace

struct PotentialOperator::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::size_t real_size = 0;
    std::size_t complex_size = 0;

    explicit Plans(const GridSpec& spec) : real_size(spec.size()), complex_size(half_spectrum_size(spec)) {
        std::array<int, 3> dims{};
        for (int a = 0; a < spec.dim; ++a) dims[a] = spec.points_per_dim;
        auto in = fftw_buffer<double>(real_size);
        auto out = fftw_buffer<fftw_complex>(complex_size);
        std::lock_guard lock(detail::fftw_planner_mutex());
        // FFTW_ESTIMATE keeps plans, and therefore rounding, identical from run to run.
        forward = fftw_plan_dft_r2c(spec.dim, dims.data(), in.get(), out.get(), FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r(spec.dim, dims.data(), out.get(), in.get(), FFTW_ESTIMATE);
        if (!forward || !backward) throw std::runtime_error("FFTW planning failed");
    }
    ~Plans() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
};

PotentialOperator::PotentialOperator(const GridSpec& spec, double alpha) : spec_(spec), alpha_(alpha) {
    spec_.validate();
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("potential order alpha must be >= 0");
    if (alpha_ == 0.0) return;

    const int n = spec_.points_per_dim;
    const double inv_period = 1.0 / (2.0 * spec_.half_width);
    auto freq = [&](int m) { return (m < n / 2 ? m : m - n) * inv_period; };

    symbol_.resize(half_spectrum_size(spec_));
    const int last = n / 2 + 1;
    for (std::size_t flat = 0; flat < symbol_.size(); ++flat) {
        std::size_t rest = flat;
        double sq = 0.0;
        const int m_last = static_cast<int>(rest % last);
        rest /= last;
        sq += std::pow(m_last * inv_period, 2);
        for (int a = spec_.dim - 2; a >= 0; --a) {
            const int m = static_cast<int>(rest % n);
            rest /= n;
            sq += std::pow(freq(m), 2);
        }
        symbol_[flat] = bessel_symbol_sq(alpha_, sq);
    }
    plans_ = std::make_shared<const Plans>(spec_);
}

void PotentialOperator::apply_inplace(std::span<double> values) const {
    if (values.size() != spec_.size()) throw ShapeError("value array does not match the operator grid");
    if (alpha_ == 0.0) return;
    auto real = fftw_buffer<double>(plans_->real_size);
    auto spectrum = fftw_buffer<fftw_complex>(plans_->complex_size);
    std::copy(values.begin(), values.end(), real.get());
    fftw_execute_dft_r2c(plans_->forward, real.get(), spectrum.get());
    const double scale = 1.0 / static_cast<double>(plans_->real_size);
    for (std::size_t k = 0; k < plans_->complex_size; ++k) {
        const double s = symbol_[k] * scale;
        spectrum[k][0] *= s;
        spectrum[k][1] *= s;
    }
    fftw_execute_dft_c2r(plans_->backward, spectrum.get(), real.get());
    std::copy(real.get(), real.get() + plans_->real_size, values.begin());
}

GridFunction PotentialOperator::apply(const GridFunction& f) const {
    if (!(f.spec() == spec_)) throw ShapeError("grid function and operator live on different grids");
    std::vector<double> v(f.values().begin(), f.values().end());
    apply_inplace(v);
    return GridFunction(spec_, std::move(v));
}

namespace {

constexpr double kLatticeSumRadius = 30.0;

}  // namespace

LatticeKernel::LatticeKernel(const KernelParams& params, double spacing, const QuadratureConfig& quad,
                             SelfWeight self_weight)
    : params_(params), spacing_(spacing), quad_(quad) {
    params_.validate();
    if (!(spacing > 0.0)) throw DomainError("lattice spacing must be positive");
    switch (self_weight) {
        case SelfWeight::MomentCorrected: fit_moments(true); break;
        case SelfWeight::MassConsistent: fit_moments(false); break;
        case SelfWeight::CellAverage:
            self_value_ = params_.alpha <= params_.dim ? cell_average(params_, spacing_, quad_).value
                                                       : bessel_kernel(params_, 0.0, quad_).value;
            break;
    }
}

// Lattice sums over 0 < |j| h <= R plus radial tail integrals give the
// moments of the uncorrected sum; the corrections absorb the mismatch:
//   w0 h^n + 2n c1 h^n = 1 - A0
//   2 c1 h^2 h^n       = m2 - A2      (per-axis second moment m2 = int g x_1^2)
void LatticeKernel::fit_moments(bool second_moment) {
    const int n = params_.dim;
    const double h = spacing_;
    const long m = static_cast<long>(std::floor(kLatticeSumRadius / h));
    const long r2 = m * m;
    std::vector<long> multiplicity(static_cast<std::size_t>(r2) + 1, 0);
    std::array<long, 3> j{0, 0, 0};
    auto visit = [&](auto&& self, int axis, long sq, long weight) -> void {
        if (axis == n) {
            if (sq > 0) multiplicity[sq] += weight;
            return;
        }
        for (j[axis] = 0; j[axis] <= m; ++j[axis]) {
            const long s = sq + j[axis] * j[axis];
            if (s > r2) break;
            self(self, axis + 1, s, weight * (j[axis] == 0 ? 1 : 2));
        }
    };
    visit(visit, 0, 0, 1);

    const double cell = std::pow(h, n);
    double a0 = 0.0, a2 = 0.0;
    for (long sq = r2; sq > 0; --sq) {
        if (multiplicity[sq] == 0) continue;
        const double w = multiplicity[sq] * raw(sq) * cell;
        a0 += w;
        a2 += w * sq * h * h / n;  // cubic symmetry: sum j_1^2 = sum |j|^2 / n
    }
    const double radius = std::sqrt(static_cast<double>(r2)) * h;
    a0 += radial_tail_mass(params_, radius, quad_).value;
    if (second_moment) {
        a2 += radial_tail_second_moment(params_, radius, quad_).value / n;
        const double m2 = kernel_second_moment(params_, quad_).value / n;
        neighbour_correction_ = (m2 - a2) / (2.0 * h * h * cell);
    }
    self_value_ = (1.0 - a0) / cell - 2.0 * n * neighbour_correction_;
}

double LatticeKernel::raw(long sq) {
    if (static_cast<std::size_t>(sq) >= table_.size())
        table_.resize(static_cast<std::size_t>(sq) + 1, std::numeric_limits<double>::quiet_NaN());
    double& slot = table_[sq];
    if (std::isnan(slot)) slot = bessel_kernel(params_, spacing_ * std::sqrt(static_cast<double>(sq)), quad_).value;
    return slot;
}

double LatticeKernel::operator()(long sq) {
    if (sq == 0) return self_value_;
    if (sq < 0) throw DomainError("squared lattice distance must be nonnegative");
    if (sq == 1) return raw(1) + neighbour_correction_;
    return raw(sq);
}

GridFunction apply_bruteforce(double alpha, const GridFunction& f, const BruteforceConfig& cfg) {
    const GridSpec& spec = f.spec();
    if (!(alpha > 0.0)) throw DomainError("apply_bruteforce requires alpha > 0");
    if (spec.size() > cfg.max_points) {
        std::ostringstream msg;
        msg << "brute-force convolution limited to " << cfg.max_points << " points, grid has " << spec.size();
        throw CostGuardError(msg.str());
    }
    LatticeKernel kernel(KernelParams{alpha, spec.dim}, spec.spacing(), cfg.quad, cfg.self_weight);
    const double cell = spec.cell_volume();
    const auto src = f.values();
    std::vector<double> out(spec.size(), 0.0);
    for (std::size_t x = 0; x < out.size(); ++x) {
        const auto ix = spec.unravel(x);
        double acc = 0.0;
        for (std::size_t y = 0; y < out.size(); ++y) {
            if (src[y] == 0.0) continue;
            const auto iy = spec.unravel(y);
            long sq = 0;
            for (int a = 0; a < spec.dim; ++a) sq += static_cast<long>(ix[a] - iy[a]) * (ix[a] - iy[a]);
            acc += kernel(sq) * src[y];
        }
        out[x] = acc * cell;
    }
    return GridFunction(spec, std::move(out));
}

double compose_check(double alpha1, double alpha2, const GridFunction& f) {
    if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0)) throw DomainError("compose_check requires nonnegative orders");
    const PotentialOperator b1(f.spec(), alpha1), b2(f.spec(), alpha2), b12(f.spec(), alpha1 + alpha2);
    const GridFunction lhs = b1.apply(b2.apply(f));
    const GridFunction rhs = b12.apply(f);
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, std::abs(lhs[i] - rhs[i]));
    return sup;
}

double nonexpansive_check(double alpha, const GridFunction& f, double p) {
    const double denom = lp_norm(f, p);
    if (denom == 0.0) throw UndefinedRatioError("nonexpansive ratio undefined for f = 0");
    const PotentialOperator b(f.spec(), alpha);
    return lp_norm(b.apply(f), p) / denom;
}

void require_embedding_exponent(double alpha, double beta, int dim, double q) {
    if (!(alpha > 0.0) || !(beta > 1.0)) throw PreconditionError("embedding bound requires alpha > 0 and beta > 1");
    const double bound = std::max(beta, dim * (beta - 1.0) / alpha);
    if (!(q > bound)) {
        std::ostringstream msg;
        msg << "q = " << q << " must exceed max{beta, n(beta-1)/alpha} = " << bound;
        throw PreconditionError(msg.str());
    }
}

double embedding_ratio(double alpha, const GridFunction& f, double q, double beta) {
    require_embedding_exponent(alpha, beta, f.spec().dim, q);
    for (double v : f.values())
        if (v < 0.0) throw PreconditionError("embedding ratio requires f >= 0");
    const double denom = lp_norm(f, q / beta);
    if (denom == 0.0) throw UndefinedRatioError("embedding ratio undefined for f = 0");
    const PotentialOperator b(f.spec(), alpha);
    return lp_norm(b.apply(f), q) / denom;
}

std::string fft_backend_version() { return fftw_version; }

}  // namespace besselpot
