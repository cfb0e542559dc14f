#pragma once

// Positive ground states of u = g_alpha * u^beta, i.e. (I - Delta)^(alpha/2) u = u^beta.
//
// Plain Picard iteration on this equation collapses to 0 or blows up for
// beta > 1. The solver iterates on the sup-normalized profile instead:
//
//   w_k = B_alpha(v_k^beta),   lambda_k = 1 / ||w_k||_inf,   v_{k+1} = lambda_k w_k
//
// and a fixed point v = lambda B_alpha(v^beta) gives the solution
// u = lambda^(1/(beta-1)) v by homogeneity.

#include <optional>
#include <string>
#include <vector>

#include "besselpot/errors.hpp"
#include "besselpot/grid.hpp"

namespace besselpot {

struct ProblemParams {
    double alpha = 2.0;
    double beta = 3.0;
    int dim = 1;
    double q_exponent = 4.0;  // norm exponent used by the verification checks

    /// Throws PreconditionError unless alpha > 0, beta > 1, dim in 1..3 and
    /// q > max{beta, n (beta - 1) / alpha}.
    void validate() const;
};

enum class InitProfile {
    Gaussian,         // exp(-|x|^2 / w^2) about the origin
    ShiftedGaussian,  // same, about init_center
    TwoBump,          // asymmetric: bump at init_center plus a half-height bump 1.5 w further along axis 0
    Custom,           // caller-supplied positive grid function
};

std::string to_string(InitProfile p);
InitProfile init_profile_from_string(const std::string& s);

struct SolverConfig {
    InitProfile init_profile = InitProfile::Gaussian;
    std::vector<double> init_center;  // empty means the origin
    double init_width = 1.0;
    std::optional<GridFunction> custom_init;
    double tol_residual = 1e-8;
    double tol_delta = 1e-10;
    int max_iters = 5000;
    double damping = 1.0;
    double lambda_min = 1e-8;
    double lambda_max = 1e8;

    void validate() const;
};

enum class SolverStatus { Converged, MaxIters, Diverged };
std::string to_string(SolverStatus s);

struct SolverRecord {
    int iter = 0;
    double sup = 0.0;       // ||w_k||_inf
    double lambda = 0.0;    // 1 / ||w_k||_inf
    double delta = 0.0;     // ||v_{k+1} - v_k||_inf
    double residual = 0.0;  // residual of the reconstructed u_k
};

struct SolverTrace {
    std::vector<SolverRecord> records;
    SolverStatus status = SolverStatus::MaxIters;
};

class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, SolverTrace trace) : Error(what), trace_(std::move(trace)) {}
    const SolverTrace& trace() const noexcept { return trace_; }

private:
    SolverTrace trace_;
};

/// lambda_k left the guard interval.
class DivergenceError : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

/// max_iters reached without meeting the tolerances.
class NonConvergenceError : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

struct GroundState {
    GridFunction solution;  // u
    GridFunction profile;   // v, ||v||_inf = 1
    double lambda = 0.0;
    SolverTrace trace;
};

GridFunction initial_profile(const GridSpec& spec, const SolverConfig& config);

/// Throws DivergenceError / NonConvergenceError carrying the trace.
GroundState solve_ground_state(const ProblemParams& params, const GridSpec& spec, const SolverConfig& config);

/// ||u - B_alpha(u^beta)||_inf. Throws DomainError unless u > 0.
double residual(const GridFunction& u, const ProblemParams& params);

/// v^beta after zeroing ringing negatives above -1e-12 * scale. Throws
/// DomainError for anything more negative.
void clamped_power(std::span<const double> v, double beta, std::span<double> out);

}  // namespace besselpot
