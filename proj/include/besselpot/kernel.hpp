#pragma once

// Pointwise evaluation of the Bessel kernel g_alpha on R^n and its Fourier
// symbol. The kernel is radial, so every entry point takes a scalar radius.
//
//   g_alpha(x) = 1/gamma(alpha) * int_0^inf exp(-pi |x|^2 / d) exp(-d / 4pi) d^((alpha-n)/2) dd/d
//   gamma(alpha) = (4 pi)^(alpha/2) Gamma(alpha/2)
//
// The integral is evaluated after the substitution d = e^t, which turns the
// integrand into exp(phi(t)) with phi strictly concave for r > 0.

#include <span>

namespace besselpot {

struct KernelParams {
    double alpha = 2.0;  // kernel order, > 0
    int dim = 1;         // 1, 2 or 3

    /// Throws DomainError when alpha <= 0 or dim is not 1..3.
    void validate() const;
};

struct QuadratureConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-30;
    // Initial bracket in t = log(d) for locating the integrand peak. The
    // integration range itself is cut where the integrand drops e^-60 below
    // its peak, which may lie outside this bracket for tiny radii.
    double t_min = -40.0;
    double t_max = 40.0;
    int max_subdivisions = 4000;

    void validate() const;
};

struct KernelValue {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

double gamma_alpha(double alpha);

/// Surface area of the unit sphere S^{n-1}.
double unit_sphere_area(int dim);

/// g_alpha at |x| = radius. Throws SingularityError at radius 0 when alpha <= dim.
KernelValue bessel_kernel(const KernelParams& params, double radius, const QuadratureConfig& quad = {});

/// g_alpha(r_near) - g_alpha(r_far) for r_near <= r_far, computed as a single
/// integral of the pointwise difference of the integrands. The integrand is
/// nonnegative in floating point, so the result is >= 0 exactly.
KernelValue bessel_kernel_difference(const KernelParams& params, double r_near, double r_far,
                                     const QuadratureConfig& quad = {});

/// (1 + 4 pi^2 |xi|^2)^(-alpha/2), xi in cycles per unit length.
double bessel_symbol(const KernelParams& params, std::span<const double> freq);
double bessel_symbol_sq(double alpha, double freq_norm_sq);

/// int_{R^n} g_alpha, integrated through the radial profile.
KernelValue kernel_mass(const KernelParams& params, const QuadratureConfig& quad = {});

/// int_{R^n} |x|^2 g_alpha (equals n * alpha), integrated through the radial profile.
KernelValue kernel_second_moment(const KernelParams& params, const QuadratureConfig& quad = {});

/// int_{|x| > radius} g_alpha.
KernelValue radial_tail_mass(const KernelParams& params, double radius, const QuadratureConfig& quad = {});

/// int_{|x| > radius} |x|^2 g_alpha.
KernelValue radial_tail_second_moment(const KernelParams& params, double radius, const QuadratureConfig& quad = {});

/// Mean of g_alpha over the cube [-h/2, h/2]^n. Finite for every alpha > 0.
KernelValue cell_average(const KernelParams& params, double spacing, const QuadratureConfig& quad = {});

}  // namespace besselpot
