#include "besselpot/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "besselpot/errors.hpp"
#include "besselpot/quadrature.hpp"

namespace besselpot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

// Integrand is dropped where it falls this many e-folds below its peak.
constexpr double kCutoffDepth = 60.0;

// Log of the t-integrand without the 1/gamma(alpha) prefactor:
//   phi(t) = c t - a e^{-t} - e^{t} / (4 pi),  c = (alpha - n)/2,  a = pi r^2.
struct LogIntegrand {
    double c;
    double a;

    double operator()(double t) const { return c * t - a * std::exp(-t) - std::exp(t) / kFourPi; }
    double slope(double t) const { return c + a * std::exp(-t) - std::exp(t) / kFourPi; }
};

struct Support {
    double left, peak, right;
};

// phi is strictly concave, so the peak is the unique root of phi' and the
// cut points are found by outward doubling followed by bisection.
Support locate_support(const LogIntegrand& phi, const QuadratureConfig& quad) {
    double lo = quad.t_min, hi = quad.t_max;
    for (double step = 1.0; phi.slope(lo) <= 0.0; step *= 2.0) lo -= step;
    for (double step = 1.0; phi.slope(hi) >= 0.0; step *= 2.0) hi += step;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi.slope(mid) > 0.0 ? lo : hi) = mid;
    }
    const double peak = 0.5 * (lo + hi);
    const double level = phi(peak) - kCutoffDepth;

    auto cut = [&](double direction) {
        double inner = peak, outer = peak;
        for (double step = 1.0;; step *= 2.0) {
            outer = peak + direction * step;
            if (phi(outer) < level) break;
            inner = outer;
        }
        for (int it = 0; it < 60 && std::abs(outer - inner) > 1e-3; ++it) {
            const double mid = 0.5 * (inner + outer);
            (phi(mid) < level ? outer : inner) = mid;
        }
        return outer;
    };
    return {cut(-1.0), peak, cut(+1.0)};
}

std::vector<double> panel_breaks(const Support& s, int per_side) {
    std::vector<double> breaks;
    breaks.reserve(2 * per_side + 1);
    for (int i = 0; i < per_side; ++i) breaks.push_back(s.left + (s.peak - s.left) * i / per_side);
    for (int i = 0; i <= per_side; ++i) breaks.push_back(s.peak + (s.right - s.peak) * i / per_side);
    return breaks;
}

// Breaks for a unimodal log-profile with no closed-form slope: coarse scan
// for the peak on [lo, hi], then unit steps outward until the cutoff depth.
template <class Psi>
std::vector<double> scanned_breaks(const Psi& psi, double lo, double hi) {
    double best_t = lo, best = psi(lo);
    for (double t = lo; t <= hi; t += 0.25) {
        const double v = psi(t);
        if (v > best) best = v, best_t = t;
    }
    const double level = best - kCutoffDepth;
    double left = best_t, right = best_t;
    while (psi(left) >= level) left -= 1.0;
    while (psi(right) >= level) right += 1.0;
    Support s{left, best_t, right};
    return panel_breaks(s, 8);
}

}  // namespace

void KernelParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("kernel order alpha must be positive");
    if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (!(t_min < t_max)) throw DomainError("quadrature bracket requires t_min < t_max");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

double gamma_alpha(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("gamma_alpha requires alpha > 0");
    return std::exp(0.5 * alpha * std::log(kFourPi) + std::lgamma(0.5 * alpha));
}

double unit_sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        default: throw DomainError("dimension must be 1, 2 or 3");
    }
}

KernelValue bessel_kernel(const KernelParams& params, double radius, const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw DomainError("radius must be finite and nonnegative");
    const double c = 0.5 * (params.alpha - params.dim);
    const double log_gamma = std::log(gamma_alpha(params.alpha));

    if (radius == 0.0) {
        if (c <= 0.0) {
            std::ostringstream msg;
            msg << "g_alpha diverges at the origin for alpha = " << params.alpha << " <= n = " << params.dim;
            throw SingularityError(msg.str());
        }
        // int_0^inf d^{c-1} e^{-d/4pi} dd = (4 pi)^c Gamma(c)
        const double v = std::exp(c * std::log(kFourPi) + std::lgamma(c) - log_gamma);
        return {v, 4.0 * std::numeric_limits<double>::epsilon() * v};
    }

    const LogIntegrand phi{c, kPi * radius * radius};
    const Support s = locate_support(phi, quad);
    const auto breaks = panel_breaks(s, 4);
    // Folding log(gamma) into the exponent keeps values away from under/overflow.
    auto f = [&](double t) { return std::exp(phi(t) - log_gamma); };
    const QuadratureResult r =
        integrate_adaptive(f, std::span<const double>(breaks), quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
    return {r.value, r.error};
}

KernelValue bessel_kernel_difference(const KernelParams& params, double r_near, double r_far,
                                     const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    if (!(r_near >= 0.0) || !(r_far >= r_near) || !std::isfinite(r_far))
        throw DomainError("bessel_kernel_difference requires 0 <= r_near <= r_far");
    if (r_near == r_far) return {0.0, 0.0};
    const double c = 0.5 * (params.alpha - params.dim);
    if (r_near == 0.0 && c <= 0.0) throw SingularityError("g_alpha diverges at the origin for alpha <= n");

    const double log_gamma = std::log(gamma_alpha(params.alpha));
    const LogIntegrand phi{c, kPi * r_near * r_near};
    const double gap = kPi * (r_far - r_near) * (r_far + r_near);
    const Support s = locate_support(phi, quad);
    const auto breaks = panel_breaks(s, 4);
    // exp(-a1 e^-t) - exp(-a2 e^-t) = exp(-a1 e^-t) * (-expm1(-(a2 - a1) e^-t)) >= 0
    auto f = [&](double t) { return std::exp(phi(t) - log_gamma) * -std::expm1(-gap * std::exp(-t)); };
    const QuadratureResult r =
        integrate_adaptive(f, std::span<const double>(breaks), quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
    return {r.value, r.error};
}

double bessel_symbol_sq(double alpha, double freq_norm_sq) {
    return std::pow(1.0 + 4.0 * kPi * kPi * freq_norm_sq, -0.5 * alpha);
}

double bessel_symbol(const KernelParams& params, std::span<const double> freq) {
    params.validate();
    if (static_cast<int>(freq.size()) != params.dim) throw DomainError("frequency vector length must equal dim");
    double sq = 0.0;
    for (double xi : freq) sq += xi * xi;
    return bessel_symbol_sq(params.alpha, sq);
}

namespace {

// S_n int_{exp(s_lo)}^{exp(s_hi)} r^(n + power) g(r) ds with r = e^s.
KernelValue radial_moment(const KernelParams& params, double s_lo, double s_hi, int power,
                          const QuadratureConfig& quad) {
    const double area = unit_sphere_area(params.dim);
    double inner_error = 0.0;
    auto f = [&](double s) {
        const double r = std::exp(s);
        const KernelValue g = bessel_kernel(params, r, quad);
        const double w = area * std::pow(r, params.dim + power);
        inner_error = std::max(inner_error, std::abs(g.error / (g.value != 0.0 ? g.value : 1.0)));
        return w * g.value;
    };
    std::vector<double> breaks;
    const int panels = std::max(4, static_cast<int>(std::ceil((s_hi - s_lo) / 2.0)));
    for (int i = 0; i <= panels; ++i) breaks.push_back(s_lo + (s_hi - s_lo) * i / panels);
    const double outer_rel = std::max(1e-10, 100.0 * quad.rel_tol);
    const QuadratureResult r =
        integrate_adaptive(f, std::span<const double>(breaks), outer_rel, 1e-15, quad.max_subdivisions);
    return {r.value, r.error + inner_error * std::abs(r.value)};
}

double lower_log_radius(const KernelParams& params) {
    // r^n g(r) ~ r^min(alpha, n) near the origin; drop the part below 1e-14.
    const double m = std::min(params.alpha, static_cast<double>(params.dim));
    return std::log(1e-14) / m - 2.0;
}

}  // namespace

KernelValue kernel_mass(const KernelParams& params, const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    return radial_moment(params, lower_log_radius(params), std::log(80.0), 0, quad);
}

KernelValue kernel_second_moment(const KernelParams& params, const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    return radial_moment(params, lower_log_radius(params), std::log(100.0), 2, quad);
}

KernelValue radial_tail_mass(const KernelParams& params, double radius, const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    if (!(radius > 0.0)) throw DomainError("radial_tail_mass requires radius > 0");
    const double s_lo = std::log(radius);
    const double s_hi = std::log(radius + 80.0);
    return radial_moment(params, s_lo, s_hi, 0, quad);
}

KernelValue radial_tail_second_moment(const KernelParams& params, double radius, const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    if (!(radius > 0.0)) throw DomainError("radial_tail_second_moment requires radius > 0");
    return radial_moment(params, std::log(radius), std::log(radius + 100.0), 2, quad);
}

KernelValue cell_average(const KernelParams& params, double spacing, const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    if (!(spacing > 0.0)) throw DomainError("cell_average requires a positive spacing");
    // int over the cube of exp(-pi|x|^2/d) factorizes into (sqrt(d) erf(sqrt(pi) h / (2 sqrt(d))))^n.
    const double c = 0.5 * (params.alpha - params.dim);
    const int n = params.dim;
    const double log_norm = std::log(gamma_alpha(params.alpha)) + n * std::log(spacing);
    const double z0 = 0.5 * std::sqrt(kPi) * spacing;
    auto psi = [&](double t) {
        const double z = z0 * std::exp(-0.5 * t);
        return c * t - std::exp(t) / kFourPi + n * (0.5 * t + std::log(std::erf(z)));
    };
    const auto breaks = scanned_breaks(psi, -60.0, 60.0);
    auto f = [&](double t) { return std::exp(psi(t) - log_norm); };
    const QuadratureResult r =
        integrate_adaptive(f, std::span<const double>(breaks), quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
    return {r.value, r.error};
}

}  // namespace besselpot
