#include "besselpot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "besselpot/errors.hpp"
#include "besselpot/spectral.hpp"

namespace besselpot {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

long isqrt(long v) {
    long r = static_cast<long>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

bool solve_small(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, int n, std::array<double, 3>& x) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

// Negative definite via leading principal minors (n <= 3).
bool negative_definite(const std::array<std::array<double, 3>, 3>& h, int n) {
    if (!(h[0][0] < 0.0)) return false;
    if (n == 1) return true;
    const double m2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (!(m2 > 0.0)) return false;
    if (n == 2) return true;
    const double m3 = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
                      h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
                      h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    return m3 < 0.0;
}

}  // namespace

std::string to_string(PlaneSide s) {
    switch (s) {
        case PlaneSide::Below: return "below";
        case PlaneSide::At: return "at";
        case PlaneSide::Above: return "above";
    }
    return "unknown";
}

std::vector<double> locate_center(const GridFunction& u, double tie_tolerance) {
    const GridSpec& spec = u.spec();
    const int n = spec.points_per_dim;
    const double h = spec.spacing();
    const auto values = u.values();
    const std::size_t top = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    const double peak = values[top];
    const auto top_idx = spec.unravel(top);

    auto neighbour = [&](std::array<int, 3> idx, int axis, int step) {
        idx[axis] = wrap(idx[axis] + step, n);
        return values[spec.ravel(idx)];
    };

    // Local maxima within the tie tolerance of the peak that are not adjacent to it.
    std::vector<std::vector<double>> candidates;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < peak - tie_tolerance * std::abs(peak)) continue;
        const auto idx = spec.unravel(i);
        bool local_max = true;
        for (int a = 0; a < spec.dim && local_max; ++a)
            local_max = values[i] >= neighbour(idx, a, -1) && values[i] >= neighbour(idx, a, +1);
        if (!local_max) continue;
        int far = 0;
        for (int a = 0; a < spec.dim; ++a) {
            const int d = std::abs(idx[a] - top_idx[a]);
            far = std::max(far, std::min(d, n - d));
        }
        std::vector<double> x(spec.dim);
        for (int a = 0; a < spec.dim; ++a) x[a] = spec.coordinate(idx[a]);
        if (far > 1) candidates.push_back(std::move(x));
    }
    if (!candidates.empty()) {
        std::vector<double> x(spec.dim);
        for (int a = 0; a < spec.dim; ++a) x[a] = spec.coordinate(top_idx[a]);
        candidates.insert(candidates.begin(), std::move(x));
        std::ostringstream msg;
        msg << candidates.size() << " separated maxima within relative tolerance " << tie_tolerance;
        throw AmbiguousCenterError(msg.str(), std::move(candidates));
    }

    std::array<double, 3> center{};
    for (int a = 0; a < spec.dim; ++a) {
        const double lo = neighbour(top_idx, a, -1), hi = neighbour(top_idx, a, +1);
        const double curvature = lo - 2.0 * peak + hi;
        double offset = curvature < 0.0 ? 0.5 * (lo - hi) / curvature : 0.0;
        offset = std::clamp(offset, -0.5, 0.5);
        center[a] = spec.coordinate(top_idx[a]) + offset * h;
    }

    // Newton polish on the interpolant; rejected when it leaves the cell.
    const SpectralInterpolant interp(u);
    std::array<double, 3> start = center;
    for (int it = 0; it < 12; ++it) {
        const auto jet = interp.jet(std::span<const double>(center.data(), spec.dim));
        if (!negative_definite(jet.hessian, spec.dim)) {
            center = start;
            break;
        }
        std::array<double, 3> step{};
        if (!solve_small(jet.hessian, jet.gradient, spec.dim, step)) break;
        double size = 0.0;
        for (int a = 0; a < spec.dim; ++a) {
            center[a] -= step[a];
            size = std::max(size, std::abs(step[a]));
        }
        bool inside = true;
        for (int a = 0; a < spec.dim; ++a) inside = inside && std::abs(center[a] - start[a]) <= h;
        if (!inside) {
            center = start;
            break;
        }
        if (size <= 1e-14 * spec.half_width) break;
    }
    return std::vector<double>(center.begin(), center.begin() + spec.dim);
}

SymmetryReport check_symmetry(const GridFunction& u, const SymmetryThresholds& thresholds) {
    if (!u.is_positive()) throw DomainError("check_symmetry requires a strictly positive u");
    const GridSpec& spec = u.spec();
    SymmetryReport report;
    report.thresholds = thresholds;
    report.sup_norm = u.sup_norm();
    report.center = locate_center(u, thresholds.tie_tolerance);

    // Move the center onto the node at the origin, then every lattice shell
    // |j|^2 = K is a set of points equidistant from the center.
    bool on_node = true;
    for (double c : report.center) on_node = on_node && c == 0.0;
    const GridFunction centered = on_node ? u : translate(u, report.center);

    const int half = spec.points_per_dim / 2;
    const long max_radius = static_cast<long>(std::floor(thresholds.radius_fraction * half));
    const long max_sq = max_radius * max_radius;
    report.radius_checked = max_radius * spec.spacing();

    struct Shell {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
    };
    std::map<long, Shell> shells;
    std::map<long, std::pair<double, long>> bins;  // isqrt(K) -> (sum, count)
    const auto values = centered.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto idx = spec.unravel(i);
        long sq = 0;
        for (int a = 0; a < spec.dim; ++a) sq += static_cast<long>(idx[a] - half) * (idx[a] - half);
        if (sq > max_sq) continue;
        Shell& s = shells[sq];
        s.lo = std::min(s.lo, values[i]);
        s.hi = std::max(s.hi, values[i]);
        auto& b = bins[isqrt(sq)];
        b.first += values[i];
        b.second += 1;
    }
    double spread = 0.0;
    for (const auto& [sq, s] : shells) spread = std::max(spread, s.hi - s.lo);
    report.asymmetry = spread / report.sup_norm;

    double violation = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& [r, b] : bins) {
        const double mean = b.first / static_cast<double>(b.second);
        violation = std::max(violation, mean - previous);
        previous = mean;
    }
    report.monotonicity_violation = std::max(0.0, violation);
    report.groups = shells.size();
    report.bins = bins.size();
    report.pass = report.asymmetry <= thresholds.asymmetry &&
                  report.monotonicity_violation <= thresholds.monotonicity * report.sup_norm;
    return report;
}

std::vector<double> half_grid_lambdas(const GridSpec& spec, double lo, double hi) {
    std::vector<double> out;
    const double half = 0.5 * spec.spacing();
    const long k_lo = static_cast<long>(std::ceil((lo + spec.half_width) / half - 1e-9));
    const long k_hi = static_cast<long>(std::floor((hi + spec.half_width) / half + 1e-9));
    for (long k = k_lo; k <= k_hi; ++k) out.push_back(half_grid_value(spec, k));
    return out;
}

MovingPlaneReport sigma_minus_scan(const GridFunction& u, int axis, const std::vector<double>& lambdas,
                                   double slack_relative, double window_fraction) {
    if (!u.is_positive()) throw DomainError("sigma_minus_scan requires a strictly positive u");
    const GridSpec& spec = u.spec();
    if (axis < 0 || axis >= spec.dim) throw DomainError("axis out of range");
    const int n = spec.points_per_dim;
    const std::size_t stride = spec.stride(axis);
    const auto values = u.values();

    MovingPlaneReport report;
    report.axis = axis;
    report.center = locate_center(u)[axis];
    report.slack = slack_relative * u.sup_norm();
    report.window = window_fraction * spec.half_width;
    report.pass = true;

    std::vector<double> sorted = lambdas;
    std::sort(sorted.begin(), sorted.end());
    for (double lambda : sorted) {
        const long k = half_grid_index(spec, lambda);
        PlaneRecord rec;
        rec.lambda = lambda;
        const double gap = lambda - report.center;
        rec.side = std::abs(gap) <= 1e-6 * spec.spacing() ? PlaneSide::At
                   : gap < 0.0                            ? PlaneSide::Below
                                                          : PlaneSide::Above;
        std::size_t violating = 0;
        double max_abs_diff = 0.0;
        for (std::size_t flat = 0; flat < values.size(); ++flat) {
            const long i = spec.unravel(flat)[axis];
            if (2 * i < k) continue;  // x_i < lambda
            const long j = k - i;
            if (j < 0 || j >= n) {
                ++rec.excluded;
                continue;
            }
            ++rec.compared;
            const double mirrored =
                values[static_cast<std::size_t>(static_cast<long>(flat) + (j - i) * static_cast<long>(stride))];
            const double excess = mirrored - values[flat];
            rec.max_violation = std::max(rec.max_violation, excess);
            max_abs_diff = std::max(max_abs_diff, std::abs(excess));
            if (excess > report.slack) ++violating;
        }
        rec.sigma_minus_fraction =
            rec.compared ? static_cast<double>(violating) / static_cast<double>(rec.compared) : 0.0;
        rec.judged = std::abs(gap) <= window_fraction * spec.half_width;
        switch (rec.side) {
            case PlaneSide::Below: rec.pass = violating == 0 && rec.max_violation <= report.slack; break;
            case PlaneSide::At: rec.pass = max_abs_diff <= report.slack; break;
            case PlaneSide::Above: rec.pass = violating > 0; break;
        }
        if (!rec.judged) rec.pass = true;
        report.pass = report.pass && rec.pass;
        report.planes.push_back(rec);
    }
    return report;
}

ReflectionIdentityReport reflection_identity_residual(const GridFunction& u, double alpha, double beta, double lambda,
                                                      int axis, const ReflectionIdentityConfig& cfg) {
    const GridSpec& spec = u.spec();
    if (spec.size() > cfg.oracle.max_points) {
        std::ostringstream msg;
        msg << "reflection identity oracle limited to " << cfg.oracle.max_points << " points, grid has " << spec.size();
        throw CostGuardError(msg.str());
    }
    if (axis < 0 || axis >= spec.dim) throw DomainError("axis out of range");
    if (!(lambda >= -spec.half_width && lambda < spec.half_width)) throw DomainError("lambda must lie in [-L, L)");
    const ProblemParams params{alpha, beta, spec.dim, std::max(beta, spec.dim * (beta - 1.0) / alpha) + 1.0};
    if (!u.is_positive()) throw DomainError("reflection_identity_residual requires a strictly positive u");

    const int n = spec.points_per_dim;
    const long k = half_grid_index(spec, lambda);
    const long first = (k + 1) / 2;  // smallest axis index with x_i >= lambda
    const long last = std::max<long>(n - 1, k);
    const double cell = spec.cell_volume();

    std::vector<double> power(u.size());
    clamped_power(u.values(), beta, power);
    const auto uval = u.values();

    // Values at axis index i (possibly outside the box) with the other indices of `idx`.
    auto at = [&](const std::vector<double>& src, std::array<int, 3> idx, long i) -> double {
        if (i < 0 || i >= n) return 0.0;
        idx[axis] = static_cast<int>(i);
        return src[spec.ravel(idx)];
    };
    const std::vector<double> uvec(uval.begin(), uval.end());

    // Sigma_lambda on the extended lattice, with U(y) - U_lambda(y) precomputed.
    struct Node {
        std::array<long, 3> idx;
        double weight;
    };
    std::vector<Node> sigma;
    {
        std::array<int, 3> idx{0, 0, 0};
        std::size_t transverse = 1;
        for (int a = 0; a < spec.dim; ++a)
            if (a != axis) transverse *= n;
        for (std::size_t t = 0; t < transverse; ++t) {
            std::size_t rest = t;
            for (int a = spec.dim - 1; a >= 0; --a) {
                if (a == axis) continue;
                idx[a] = static_cast<int>(rest % n);
                rest /= n;
            }
            for (long i = first; i <= last; ++i) {
                const double diff = at(power, idx, i) - at(power, idx, k - i);
                if (diff == 0.0) continue;
                std::array<long, 3> node{idx[0], idx[1], idx[2]};
                node[axis] = i;
                sigma.push_back({node, diff});
            }
        }
    }

    LatticeKernel kernel(KernelParams{alpha, spec.dim}, spec.spacing(), cfg.oracle.quad, cfg.oracle.self_weight);
    ReflectionIdentityReport report;
    report.lambda = lambda;
    report.axis = axis;
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
        const auto xi = spec.unravel(flat);
        if (2L * xi[axis] < k) continue;
        const double lhs = uvec[flat] - at(uvec, xi, k - xi[axis]);
        double rhs = 0.0;
        for (const Node& y : sigma) {
            long near = 0, far = 0;
            for (int a = 0; a < spec.dim; ++a) {
                const long d = xi[a] - y.idx[a];
                near += d * d;
                const long dm = (a == axis ? k - xi[a] : xi[a]) - y.idx[a];
                far += dm * dm;
            }
            rhs += (kernel(near) - kernel(far)) * y.weight;
        }
        rhs *= cell;
        report.residual = std::max(report.residual, std::abs(lhs - rhs));
        report.lhs_max = std::max(report.lhs_max, std::abs(lhs));
    }

    report.equation_residual = residual(u, params);
    {
        const GridFunction source(spec, power);
        const GridFunction spectral = PotentialOperator(spec, alpha).apply(source);
        const GridFunction lattice = apply_bruteforce(alpha, source, cfg.oracle);
        for (std::size_t i = 0; i < u.size(); ++i)
            report.oracle_discrepancy = std::max(report.oracle_discrepancy, std::abs(spectral[i] - lattice[i]));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto idx = spec.unravel(i);
        bool face = false;
        for (int a = 0; a < spec.dim; ++a) face = face || idx[a] == 0 || idx[a] == n - 1;
        if (face) report.truncation = std::max(report.truncation, std::abs(uvec[i]));
    }
    report.budget = 2.0 * (report.equation_residual + report.oracle_discrepancy + report.truncation);
    report.within_budget = report.residual <= report.budget;
    return report;
}

ReflectionMonotonicityReport kernel_reflection_monotonicity(const KernelParams& params, double lambda, int axis,
                                                            std::size_t sample_count, std::uint64_t seed, double extent,
                                                            const QuadratureConfig& quad) {
    params.validate();
    if (axis < 0 || axis >= params.dim) throw DomainError("axis out of range");
    ReflectionMonotonicityReport report;
    report.params = params;
    report.lambda = lambda;
    report.axis = axis;
    report.seed = seed;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::array<double, 3> x{}, y{};
    while (report.samples < sample_count) {
        const bool plane = report.samples % 64 == 0;
        for (int a = 0; a < params.dim; ++a) {
            if (a == axis) {
                x[a] = plane ? lambda : lambda + extent * unit(rng);
                y[a] = lambda + extent * unit(rng);
            } else {
                x[a] = extent * (2.0 * unit(rng) - 1.0);
                y[a] = extent * (2.0 * unit(rng) - 1.0);
            }
        }
        double near = 0.0, far = 0.0;
        for (int a = 0; a < params.dim; ++a) {
            near += (x[a] - y[a]) * (x[a] - y[a]);
            const double xm = a == axis ? 2.0 * lambda - x[a] : x[a];
            far += (xm - y[a]) * (xm - y[a]);
        }
        near = std::sqrt(near);
        far = std::sqrt(far);
        if (near < 1e-9) continue;  // coincident pair: g(0+) comparison degenerates

        // g(x - y) - g(x^lambda - y)
        const double d = near <= far ? bessel_kernel_difference(params, near, far, quad).value
                                     : -bessel_kernel_difference(params, far, near, quad).value;
        ++report.samples;
        if (plane) {
            ++report.on_plane;
            report.max_on_plane_difference = std::max(report.max_on_plane_difference, std::abs(d));
        }
        if (d < 0.0) {
            ++report.violations;
            report.max_violation = std::max(report.max_violation, -d);
        }
    }
    return report;
}

EmbeddingEstimate estimate_embedding_constant(const GridSpec& spec, const ProblemParams& params,
                                              const GridFunction* u) {
    params.validate();
    if (spec.dim != params.dim) throw ShapeError("grid dimension differs from problem dimension");
    EmbeddingEstimate est;
    auto record = [&](std::string name, const GridFunction& f) {
        const double r = embedding_ratio(params.alpha, f, params.q_exponent, params.beta);
        est.constant = std::max(est.constant, r);
        est.ratios.emplace_back(std::move(name), r);
    };
    for (double s : {0.5, 0.7071067811865476, 1.0, 1.4142135623730951, 2.0}) {
        for (double c : {0.1, 1.0, 10.0}) {
            const GridFunction f = GridFunction::sample(spec, [&](std::span<const double> x) {
                double r2 = 0.0;
                for (double xi : x) r2 += xi * xi;
                return c * std::exp(-r2 / (s * s));
            });
            std::ostringstream name;
            name << "gaussian(width=" << s << ",scale=" << c << ")";
            record(name.str(), f);
        }
    }
    if (u) {
        std::vector<double> power(u->size());
        clamped_power(u->values(), params.beta, power);
        record("u^beta", GridFunction(u->spec(), std::move(power)));
    }
    return est;
}

double check_contraction(const GridFunction& u, const ProblemParams& params, double lambda, int axis, double c_hat) {
    params.validate();
    const GridSpec& spec = u.spec();
    if (axis < 0 || axis >= spec.dim) throw DomainError("axis out of range");
    const HalfSpaceMask tail = sigma_mask(spec, axis, lambda).complemented();
    double integral = 0.0;
    const auto values = u.values();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (tail.contains(i)) integral += std::pow(std::abs(values[i]), params.q_exponent);
    integral *= spec.cell_volume();
    return c_hat * std::pow(integral, (params.beta - 1.0) / params.q_exponent);
}

bool attach_contraction(MovingPlaneReport& report, const GridFunction& u, const ProblemParams& params, double c_hat) {
    std::sort(report.planes.begin(), report.planes.end(),
              [](const PlaneRecord& a, const PlaneRecord& b) { return a.lambda < b.lambda; });
    bool monotone = true;
    double previous = -1.0;
    report.contraction_threshold.reset();
    bool below_half = true;
    for (PlaneRecord& p : report.planes) {
        const double f = check_contraction(u, params, p.lambda, report.axis, c_hat);
        p.contraction_factor = f;
        monotone = monotone && f >= previous;
        previous = f;
        below_half = below_half && f <= 0.5;
        if (below_half) report.contraction_threshold = p.lambda;
    }
    return monotone;
}

nlohmann::json to_json(const SymmetryReport& r) {
    return {{"check", "symmetry"},
            {"center", r.center},
            {"sup_norm", r.sup_norm},
            {"asymmetry", r.asymmetry},
            {"monotonicity_violation", r.monotonicity_violation},
            {"radius_checked", r.radius_checked},
            {"shells", r.groups},
            {"bins", r.bins},
            {"thresholds",
             {{"asymmetry", r.thresholds.asymmetry},
              {"monotonicity_relative", r.thresholds.monotonicity},
              {"tie_tolerance", r.thresholds.tie_tolerance},
              {"radius_fraction", r.thresholds.radius_fraction}}},
            {"pass", r.pass}};
}

nlohmann::json to_json(const MovingPlaneReport& r) {
    nlohmann::json planes = nlohmann::json::array();
    for (const auto& p : r.planes) {
        nlohmann::json j = {{"lambda", p.lambda},
                            {"side", to_string(p.side)},
                            {"sigma_minus_fraction", p.sigma_minus_fraction},
                            {"max_violation", p.max_violation},
                            {"compared", p.compared},
                            {"excluded", p.excluded},
                            {"judged", p.judged},
                            {"pass", p.pass}};
        if (p.contraction_factor) j["contraction_factor"] = *p.contraction_factor;
        planes.push_back(std::move(j));
    }
    nlohmann::json out = {{"check", "moving_plane"}, {"axis", r.axis},   {"center", r.center}, {"slack", r.slack},
                          {"window", r.window},      {"planes", planes}, {"pass", r.pass}};
    out["contraction_threshold"] =
        r.contraction_threshold ? nlohmann::json(*r.contraction_threshold) : nlohmann::json(nullptr);
    return out;
}

nlohmann::json to_json(const ReflectionIdentityReport& r) {
    return {{"check", "reflection_identity"},
            {"lambda", r.lambda},
            {"axis", r.axis},
            {"residual", r.residual},
            {"budget", r.budget},
            {"equation_residual", r.equation_residual},
            {"oracle_discrepancy", r.oracle_discrepancy},
            {"truncation", r.truncation},
            {"lhs_max", r.lhs_max},
            {"pass", r.within_budget}};
}

nlohmann::json to_json(const ReflectionMonotonicityReport& r) {
    return {{"check", "kernel_reflection_monotonicity"},
            {"alpha", r.params.alpha},
            {"dim", r.params.dim},
            {"lambda", r.lambda},
            {"axis", r.axis},
            {"seed", r.seed},
            {"samples", r.samples},
            {"on_plane", r.on_plane},
            {"violations", r.violations},
            {"max_violation", r.max_violation},
            {"max_on_plane_difference", r.max_on_plane_difference},
            {"pass", r.violations == 0}};
}

nlohmann::json to_json(const EmbeddingEstimate& r) {
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& [name, v] : r.ratios) ratios.push_back({{"input", name}, {"ratio", v}});
    return {{"check", "embedding_ratio"}, {"constant", r.constant}, {"ratios", ratios}};
}

}  // namespace besselpot
