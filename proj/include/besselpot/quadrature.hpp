#pragma once

// Adaptive 15-point Gauss-Kronrod quadrature on a finite interval.
//
// Panels with the largest error estimate are bisected first. The error
// estimate per panel follows the QUADPACK heuristic, which is far less
// pessimistic than |K15 - G7| for smooth integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "besselpot/errors.hpp"

namespace besselpot {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights attached to the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> fv{};
    fv[7] = f(center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }
    double kron = kKronrodWeights[7] * fv[7];
    double gauss = kGaussWeights[3] * fv[7];
    double resabs = std::abs(kron);
    for (int j = 0; j < 7; ++j) {
        const double pair = fv[j] + fv[14 - j];
        kron += kKronrodWeights[j] * pair;
        resabs += kKronrodWeights[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    const double mean = 0.5 * kron;
    double resasc = kKronrodWeights[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) resasc += kKronrodWeights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    kron *= half;
    gauss *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);

    double err = std::abs(kron - gauss);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, kron, err};
}

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()], starting from the panels
/// delimited by `breaks` (sorted ascending, at least two entries).
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breaks, double rel_tol, double abs_tol,
                                    int max_panels) {
    std::priority_queue<detail::Panel> panels;
    double value = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        detail::Panel p = detail::gauss_kronrod15(f, breaks[i], breaks[i + 1]);
        value += p.value;
        error += p.error;
        panels.push(p);
    }
    int count = static_cast<int>(panels.size());
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (count >= max_panels) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge within " << max_panels << " panels (value " << value
                << ", error estimate " << error << ")";
            throw QuadratureError(msg.str(), error);
        }
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in double precision.
            throw QuadratureError("adaptive quadrature hit roundoff limit", error);
        }
        detail::Panel left = detail::gauss_kronrod15(f, worst.a, mid);
        detail::Panel right = detail::gauss_kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }
    // Re-sum to shed the drift of the running updates.
    double total = 0.0, total_err = 0.0;
    std::vector<detail::Panel> all;
    all.reserve(panels.size());
    while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    for (const auto& p : all) {
        total += p.value;
        total_err += p.error;
    }
    return {total, total_err, count};
}

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol, int max_panels) {
    const std::array<double, 2> breaks{a, b};
    return integrate_adaptive(std::forward<F>(f), std::span<const double>(breaks), rel_tol, abs_tol, max_panels);
}

}  // namespace besselpot
