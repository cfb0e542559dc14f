#pragma once

// The Bessel potential B_alpha f = g_alpha * f on a GridSpec.
//
// PotentialOperator is the fast path: the grid is treated as a torus and
// B_alpha is diagonal in the discrete Fourier basis with eigenvalues
// (1 + 4 pi^2 |xi_m|^2)^(-alpha/2), xi_m = m / (2L).
//
// apply_bruteforce is the free-space oracle: a direct lattice sum of pointwise
// kernel values, independent of any transform.

#include <memory>
#include <vector>

#include <string>

#include "besselpot/grid.hpp"
#include "besselpot/kernel.hpp"

namespace besselpot {

/// Version string of the FFT backend.
std::string fft_backend_version();

class PotentialOperator {
public:
    /// alpha >= 0; alpha == 0 is the identity.
    PotentialOperator(const GridSpec& spec, double alpha);

    const GridSpec& spec() const { return spec_; }
    double alpha() const { return alpha_; }

    /// Symbol values in the half-spectrum layout of a real-to-complex
    /// transform: axes 0..n-2 full length N, last axis N/2 + 1.
    const std::vector<double>& symbol_table() const { return symbol_; }

    /// Throws ShapeError when f lives on another grid.
    GridFunction apply(const GridFunction& f) const;

    /// In-place variant on a raw value array of length spec().size().
    void apply_inplace(std::span<double> values) const;

private:
    struct Plans;
    GridSpec spec_;
    double alpha_;
    std::vector<double> symbol_;
    std::shared_ptr<const Plans> plans_;
};

enum class SelfWeight {
    // Diagonal weight and nearest-neighbour weights chosen so that the lattice
    // sums of the kernel reproduce its exact zeroth and second moments. This is
    // a locally corrected trapezoidal rule: the h^2 and h^4 error terms of the
    // plain sum near x = y vanish.
    MomentCorrected,
    // Diagonal weight chosen so that the lattice sum of the kernel equals its
    // exact mass 1. Removes the leading error of the kink/singularity at x = y.
    MassConsistent,
    // Cell average of g_alpha over the cube around the node when alpha <= n,
    // plain g_alpha(0) otherwise.
    CellAverage,
};

/// Kernel values on the integer lattice h Z^n, memoized by |j|^2.
class LatticeKernel {
public:
    LatticeKernel(const KernelParams& params, double spacing, const QuadratureConfig& quad = {},
                  SelfWeight self_weight = SelfWeight::MomentCorrected);

    /// g_alpha(h sqrt(sq)) for sq > 1, corrected weights for sq = 0, 1.
    double operator()(long sq);
    double self_value() const { return self_value_; }
    double neighbour_correction() const { return neighbour_correction_; }
    const KernelParams& params() const { return params_; }
    double spacing() const { return spacing_; }

private:
    KernelParams params_;
    double spacing_;
    QuadratureConfig quad_;
    double self_value_ = 0.0;
    double neighbour_correction_ = 0.0;
    std::vector<double> table_;

    double raw(long sq);
    void fit_moments(bool second_moment);
};

struct BruteforceConfig {
    QuadratureConfig quad{};
    SelfWeight self_weight = SelfWeight::MomentCorrected;
    std::size_t max_points = 4096;
};

/// Free-space lattice convolution sum_y g_alpha(x - y) f(y) h^n with f = 0
/// outside the box. Throws CostGuardError above cfg.max_points samples.
GridFunction apply_bruteforce(double alpha, const GridFunction& f, const BruteforceConfig& cfg = {});

/// sup |B_a1 B_a2 f - B_{a1 + a2} f|.
double compose_check(double alpha1, double alpha2, const GridFunction& f);

/// ||B_alpha f||_p / ||f||_p. Throws UndefinedRatioError for f = 0.
double nonexpansive_check(double alpha, const GridFunction& f, double p);

/// ||B_alpha f||_q / ||f||_{q/beta} for f >= 0 under q > max{beta, n(beta-1)/alpha}.
double embedding_ratio(double alpha, const GridFunction& f, double q, double beta);

/// Throws PreconditionError unless q > max{beta, n (beta - 1) / alpha}.
void require_embedding_exponent(double alpha, double beta, int dim, double q);

}  // namespace besselpot
