#pragma once

// Numerical predicates for radial symmetry, monotone decrease, and the
// moving-plane comparison between u and its reflection u_lambda across the
// hyperplane x_axis = lambda.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "besselpot/grid.hpp"
#include "besselpot/kernel.hpp"
#include "besselpot/potential.hpp"
#include "besselpot/solver.hpp"

namespace besselpot {

struct SymmetryThresholds {
    double asymmetry = 1e-6;      // relative to ||u||_inf
    double monotonicity = 1e-8;   // relative to ||u||_inf
    double tie_tolerance = 1e-9;  // relative gap below which two maxima are indistinguishable
    // Radius of the analysed ball around the center, as a fraction of L. Beyond
    // it the periodic images of the torus dominate the residual asymmetry.
    double radius_fraction = 0.75;
};

struct SymmetryReport {
    std::vector<double> center;
    double asymmetry = 0.0;
    double monotonicity_violation = 0.0;  // absolute
    double sup_norm = 0.0;
    double radius_checked = 0.0;
    std::size_t groups = 0;
    std::size_t bins = 0;
    SymmetryThresholds thresholds;
    bool pass = false;
};

/// Argmax with per-axis quadratic refinement, polished by Newton steps on
/// the trigonometric interpolant. Throws AmbiguousCenterError for several
/// separated maxima within the tie tolerance.
std::vector<double> locate_center(const GridFunction& u, double tie_tolerance = 1e-9);

SymmetryReport check_symmetry(const GridFunction& u, const SymmetryThresholds& thresholds = {});

enum class PlaneSide { Below, At, Above };
std::string to_string(PlaneSide s);

struct PlaneRecord {
    double lambda = 0.0;
    PlaneSide side = PlaneSide::Below;
    double sigma_minus_fraction = 0.0;
    double max_violation = 0.0;  // max (u_lambda - u)_+ on compared points
    std::size_t compared = 0;    // points of Sigma_lambda whose mirror lies inside the box
    std::size_t excluded = 0;    // points of Sigma_lambda whose mirror leaves the box
    std::optional<double> contraction_factor;
    bool judged = true;  // false outside the window; such planes always pass
    bool pass = false;
};

struct MovingPlaneReport {
    int axis = 0;
    double center = 0.0;  // center coordinate along axis
    double slack = 0.0;
    double window = 0.0;  // judged planes satisfy |lambda - center| <= window
    std::vector<PlaneRecord> planes;
    std::optional<double> contraction_threshold;  // largest lambda with factor <= 1/2 below it
    bool pass = false;
};

/// For every lambda (half-grid) compares u with u_lambda on Sigma_lambda.
/// Points whose mirror leaves the box are excluded from the comparison.
/// Below the center the violation set must be empty up to
/// slack_relative * ||u||_inf; above it the set must be nonempty.
/// Only planes with |lambda - center| <= window_fraction * L are judged: past
/// that the periodic image of the profile dominates the comparison.
MovingPlaneReport sigma_minus_scan(const GridFunction& u, int axis, const std::vector<double>& lambdas,
                                   double slack_relative = 1e-9, double window_fraction = 0.75);

/// Every half-grid lambda in [lo, hi].
std::vector<double> half_grid_lambdas(const GridSpec& spec, double lo, double hi);

struct ReflectionIdentityConfig {
    BruteforceConfig oracle{};
};

struct ReflectionIdentityReport {
    double lambda = 0.0;
    int axis = 0;
    double residual = 0.0;
    double budget = 0.0;
    double equation_residual = 0.0;   // ||u - B_alpha(u^beta)||_inf, spectral
    double oracle_discrepancy = 0.0;  // ||B_alpha(u^beta) - lattice sum||_inf
    double truncation = 0.0;          // max |u| on the box faces
    double lhs_max = 0.0;
    bool within_budget = false;
};

/// sup over x in Sigma_lambda of
///   |(u(x) - u_lambda(x)) - sum_{y in Sigma_lambda} (g(x-y) - g(x^lambda-y)) (u(y)^beta - u_lambda(y)^beta) h^n|
/// with u extended by zero outside the box (free space).
ReflectionIdentityReport reflection_identity_residual(const GridFunction& u, double alpha, double beta, double lambda,
                                                      int axis, const ReflectionIdentityConfig& cfg = {});

struct ReflectionMonotonicityReport {
    KernelParams params;
    double lambda = 0.0;
    int axis = 0;
    std::size_t samples = 0;
    std::size_t on_plane = 0;
    std::size_t violations = 0;
    double max_violation = 0.0;
    double max_on_plane_difference = 0.0;
    std::uint64_t seed = 0;
};

/// Samples pairs x, y in Sigma_lambda (within distance `extent` of the plane
/// and of the axis) and returns max (g(x^lambda - y) - g(x - y))_+.
ReflectionMonotonicityReport kernel_reflection_monotonicity(const KernelParams& params, double lambda, int axis,
                                                            std::size_t sample_count, std::uint64_t seed,
                                                            double extent = 6.0, const QuadratureConfig& quad = {});

struct EmbeddingEstimate {
    double constant = 0.0;  // max ratio over the family
    std::vector<std::pair<std::string, double>> ratios;
};

/// Empirical stand-in for the embedding constant: maximum of
/// ||B_alpha f||_q / ||f||_{q/beta} over dilations and scalings of a Gaussian
/// and over f = u^beta when u is given.
EmbeddingEstimate estimate_embedding_constant(const GridSpec& spec, const ProblemParams& params,
                                              const GridFunction* u = nullptr);

/// c_hat * (int_{x_axis < lambda} u^q)^((beta-1)/q).
double check_contraction(const GridFunction& u, const ProblemParams& params, double lambda, int axis, double c_hat);

/// Fills contraction_factor for every plane, the threshold lambda, and
/// returns whether the factor is nonincreasing as lambda decreases.
bool attach_contraction(MovingPlaneReport& report, const GridFunction& u, const ProblemParams& params, double c_hat);

nlohmann::json to_json(const SymmetryReport& r);
nlohmann::json to_json(const MovingPlaneReport& r);
nlohmann::json to_json(const ReflectionIdentityReport& r);
nlohmann::json to_json(const ReflectionMonotonicityReport& r);
nlohmann::json to_json(const EmbeddingEstimate& r);

}  // namespace besselpot
