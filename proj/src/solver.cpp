#include "besselpot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "besselpot/potential.hpp"

namespace besselpot {

void ProblemParams::validate() const {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    if (!(beta > 1.0)) throw PreconditionError("beta must exceed 1");
    if (dim < 1 || dim > 3) throw PreconditionError("dim must be 1, 2 or 3");
    require_embedding_exponent(alpha, beta, dim, q_exponent);
}

std::string to_string(InitProfile p) {
    switch (p) {
        case InitProfile::Gaussian: return "gaussian";
        case InitProfile::ShiftedGaussian: return "shifted_gaussian";
        case InitProfile::TwoBump: return "two_bump";
        case InitProfile::Custom: return "custom-file";
    }
    return "unknown";
}

InitProfile init_profile_from_string(const std::string& s) {
    if (s == "gaussian") return InitProfile::Gaussian;
    if (s == "shifted_gaussian") return InitProfile::ShiftedGaussian;
    if (s == "two_bump") return InitProfile::TwoBump;
    if (s == "custom-file" || s == "custom") return InitProfile::Custom;
    throw ConfigError("unknown init_profile '" + s + "'");
}

std::string to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Converged: return "converged";
        case SolverStatus::MaxIters: return "max_iters";
        case SolverStatus::Diverged: return "diverged";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (!(tol_residual > 0.0) || !(tol_delta > 0.0)) throw PreconditionError("solver tolerances must be positive");
    if (max_iters < 1) throw PreconditionError("max_iters must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw PreconditionError("damping must lie in (0, 1]");
    if (!(init_width > 0.0)) throw PreconditionError("init_width must be positive");
    if (!(lambda_min > 0.0 && lambda_min < lambda_max)) throw PreconditionError("invalid lambda guard interval");
    if (init_profile == InitProfile::Custom && !custom_init)
        throw PreconditionError("custom init profile requires a grid function");
}

GridFunction initial_profile(const GridSpec& spec, const SolverConfig& config) {
    if (config.init_profile == InitProfile::Custom) {
        if (!config.custom_init) throw PreconditionError("custom init profile requires a grid function");
        if (!(config.custom_init->spec() == spec)) throw ShapeError("custom init lives on a different grid");
        return *config.custom_init;
    }
    std::array<double, 3> center{0.0, 0.0, 0.0};
    if (config.init_profile != InitProfile::Gaussian) {
        if (!config.init_center.empty() && static_cast<int>(config.init_center.size()) != spec.dim)
            throw PreconditionError("init_center must have one coordinate per dimension");
        for (std::size_t a = 0; a < config.init_center.size(); ++a) center[a] = config.init_center[a];
    }
    const double w2 = config.init_width * config.init_width;
    const bool two_bump = config.init_profile == InitProfile::TwoBump;
    return GridFunction::sample(spec, [&](std::span<const double> x) {
        double r2 = 0.0, s2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) {
            r2 += (x[a] - center[a]) * (x[a] - center[a]);
            const double shifted = x[a] - center[a] - (a == 0 ? 1.5 * config.init_width : 0.0);
            s2 += shifted * shifted;
        }
        double v = std::exp(-r2 / w2);
        if (two_bump) v += 0.5 * std::exp(-s2 / w2);
        return v;
    });
}

void clamped_power(std::span<const double> v, double beta, std::span<double> out) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    const double floor = -1e-12 * scale;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double x = v[i];
        if (x < 0.0) {
            if (x < floor) {
                std::ostringstream msg;
                msg << "negative value " << x << " below the ringing floor " << floor;
                throw DomainError(msg.str());
            }
            x = 0.0;
        }
        out[i] = std::pow(x, beta);
    }
}

double residual(const GridFunction& u, const ProblemParams& params) {
    if (u.spec().dim != params.dim) throw ShapeError("grid dimension differs from problem dimension");
    if (!u.is_positive()) throw DomainError("residual requires a strictly positive u");
    const PotentialOperator op(u.spec(), params.alpha);
    std::vector<double> rhs(u.size());
    clamped_power(u.values(), params.beta, rhs);
    op.apply_inplace(rhs);
    double sup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sup = std::max(sup, std::abs(u[i] - rhs[i]));
    return sup;
}

GroundState solve_ground_state(const ProblemParams& params, const GridSpec& spec, const SolverConfig& config) {
    params.validate();
    spec.validate();
    config.validate();
    if (spec.dim != params.dim) throw PreconditionError("grid dimension differs from problem dimension");

    const GridFunction init = initial_profile(spec, config);
    if (!init.is_positive()) throw PreconditionError("initial profile must be strictly positive");

    const PotentialOperator op(spec, params.alpha);
    const double exponent = 1.0 / (params.beta - 1.0);
    const double init_sup = init.sup_norm();
    std::vector<double> v(init.values().begin(), init.values().end());
    for (double& x : v) x /= init_sup;
    std::vector<double> w(v.size()), next(v.size());

    SolverTrace trace;
    double lambda_prev = 0.0;
    for (int k = 1; k <= config.max_iters; ++k) {
        clamped_power(v, params.beta, w);
        op.apply_inplace(w);
        double sup = 0.0;
        for (double x : w) sup = std::max(sup, std::abs(x));
        const double lambda = 1.0 / sup;

        SolverRecord rec{k, sup, lambda, 0.0, 0.0};
        if (!std::isfinite(lambda) || lambda < config.lambda_min || lambda > config.lambda_max) {
            trace.records.push_back(rec);
            trace.status = SolverStatus::Diverged;
            std::ostringstream msg;
            msg << "normalized iteration diverged at step " << k << ": lambda = " << lambda << " outside ["
                << config.lambda_min << ", " << config.lambda_max << "]";
            throw DivergenceError(msg.str(), std::move(trace));
        }

        // Residual of u_k = lambda^(1/(beta-1)) v_k equals lambda^(1/(beta-1)) ||v_k - lambda w_k||.
        double step_change = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            next[i] = lambda * w[i];
            step_change = std::max(step_change, std::abs(next[i] - v[i]));
        }
        rec.residual = std::pow(lambda, exponent) * step_change;

        if (config.damping < 1.0) {
            double m = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                next[i] = (1.0 - config.damping) * v[i] + config.damping * next[i];
                m = std::max(m, std::abs(next[i]));
            }
            for (double& x : next) x /= m;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) delta = std::max(delta, std::abs(next[i] - v[i]));
        rec.delta = delta;
        trace.records.push_back(rec);
        v.swap(next);

        const bool settled = k > 1 && delta <= config.tol_delta &&
                             std::abs(lambda - lambda_prev) <= config.tol_delta * lambda &&
                             rec.residual <= config.tol_residual;
        lambda_prev = lambda;
        if (!settled) continue;

        const double amplitude = std::pow(lambda, exponent);
        std::vector<double> u(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) u[i] = amplitude * v[i];
        GridFunction solution(spec, std::move(u));
        if (!solution.is_positive()) continue;
        if (residual(solution, params) > config.tol_residual) continue;
        trace.status = SolverStatus::Converged;
        return GroundState{std::move(solution), GridFunction(spec, v), lambda, std::move(trace)};
    }
    trace.status = SolverStatus::MaxIters;
    std::ostringstream msg;
    msg << "normalized iteration did not converge in " << config.max_iters << " iterations";
    if (!trace.records.empty())
        msg << " (last delta " << trace.records.back().delta << ", residual " << trace.records.back().residual << ")";
    throw NonConvergenceError(msg.str(), std::move(trace));
}

}  // namespace besselpot
