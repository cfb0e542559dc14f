#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include <unistd.h>

namespace oracle {

/// Composite Simpson rule with `panels` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Fourier transform int f(x) exp(-2 pi i x xi) dx of an even function on R,
/// truncated to [-cutoff, cutoff].
inline double fourier_even_1d(const std::function<double(double)>& f, double xi, double cutoff, int panels) {
    return 2.0 *
           simpson([&](double x) { return f(x) * std::cos(2.0 * std::numbers::pi * xi * x); }, 0.0, cutoff, panels);
}

/// Fourier transform of a radial function on R^3 from r f(r):
/// (2 / |xi|) int_0^inf r f(r) sin(2 pi |xi| r) dr.
inline double fourier_radial_3d(const std::function<double(double)>& r_times_f, double xi, double cutoff, int panels) {
    return 2.0 / xi *
           simpson([&](double r) { return r_times_f(r) * std::sin(2.0 * std::numbers::pi * xi * r); }, 0.0, cutoff,
                   panels);
}

/// The Bessel potential kernel through the Macdonald function:
/// g(r) = K_{(n-a)/2}(r) r^{(a-n)/2} / (2^{(n+a-2)/2} pi^{n/2} Gamma(a/2)).
inline double kernel_via_macdonald(double alpha, int n, double r) {
    const double nu = std::abs(0.5 * (n - alpha));
    return std::cyl_bessel_k(nu, r) * std::pow(r, 0.5 * (alpha - n)) /
           (std::pow(2.0, 0.5 * (n + alpha - 2.0)) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(0.5 * alpha));
}

/// sqrt(2) sech(x), the even ground state of -u'' + u = u^3.
inline double sech_ground_state(double x) { return std::numbers::sqrt2 / std::cosh(x); }

/// Fresh directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("besselpot-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace oracle
