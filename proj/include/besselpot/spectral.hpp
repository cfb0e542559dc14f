#pragma once

// Trigonometric interpolation of grid functions on the periodic box.

#include <complex>
#include <span>
#include <vector>

#include "besselpot/grid.hpp"

namespace besselpot {

/// x -> u(x + offset) evaluated through the trigonometric interpolant.
/// The Nyquist mode is shifted as a cosine so the result stays real.
GridFunction translate(const GridFunction& u, std::span<const double> offset);

class SpectralInterpolant {
public:
    explicit SpectralInterpolant(const GridFunction& u);

    struct Jet {
        double value = 0.0;
        std::array<double, 3> gradient{};
        std::array<std::array<double, 3>, 3> hessian{};
    };

    /// Value, gradient and Hessian at an arbitrary point (Nyquist modes dropped).
    Jet jet(std::span<const double> x) const;

private:
    GridSpec spec_;
    std::vector<std::complex<double>> coeffs_;
};

}  // namespace besselpot
