#include "besselpot/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "besselpot/errors.hpp"
#include "fftw_util.hpp"

namespace besselpot {

namespace {

std::vector<std::complex<double>> transform(const GridSpec& spec, std::vector<std::complex<double>> data, int sign) {
    std::array<int, 3> dims{};
    for (int a = 0; a < spec.dim; ++a) dims[a] = spec.points_per_dim;
    auto buf = detail::fftw_buffer<fftw_complex>(data.size());
    std::copy(data.begin(), data.end(), reinterpret_cast<std::complex<double>*>(buf.get()));
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft(spec.dim, dims.data(), buf.get(), buf.get(), sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    auto* out = reinterpret_cast<std::complex<double>*>(buf.get());
    std::copy(out, out + data.size(), data.begin());
    return data;
}

int signed_mode(int m, int n) { return m < n / 2 ? m : m - n; }

}  // namespace

GridFunction translate(const GridFunction& u, std::span<const double> offset) {
    const GridSpec& spec = u.spec();
    if (static_cast<int>(offset.size()) != spec.dim) throw ShapeError("offset must have one entry per axis");
    const int n = spec.points_per_dim;
    const double period = 2.0 * spec.half_width;

    std::vector<std::vector<std::complex<double>>> phase(spec.dim, std::vector<std::complex<double>>(n));
    for (int a = 0; a < spec.dim; ++a) {
        for (int m = 0; m < n; ++m) {
            const int sm = signed_mode(m, n);
            const double theta = 2.0 * std::numbers::pi * sm * offset[a] / period;
            phase[a][m] = (sm == -n / 2) ? std::complex<double>(std::cos(theta), 0.0) : std::polar(1.0, theta);
        }
    }
    std::vector<std::complex<double>> data(u.values().begin(), u.values().end());
    data = transform(spec, std::move(data), FFTW_FORWARD);
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
        const auto idx = spec.unravel(flat);
        std::complex<double> p = 1.0;
        for (int a = 0; a < spec.dim; ++a) p *= phase[a][idx[a]];
        data[flat] *= p;
    }
    data = transform(spec, std::move(data), FFTW_BACKWARD);
    std::vector<double> out(data.size());
    const double scale = 1.0 / static_cast<double>(data.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real() * scale;
    return GridFunction(spec, std::move(out));
}

SpectralInterpolant::SpectralInterpolant(const GridFunction& u) : spec_(u.spec()) {
    std::vector<std::complex<double>> data(u.values().begin(), u.values().end());
    coeffs_ = transform(spec_, std::move(data), FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(coeffs_.size());
    for (auto& c : coeffs_) c *= scale;
}

SpectralInterpolant::Jet SpectralInterpolant::jet(std::span<const double> x) const {
    const int n = spec_.points_per_dim;
    const int dim = spec_.dim;
    const double period = 2.0 * spec_.half_width;
    std::vector<std::vector<std::complex<double>>> basis(dim, std::vector<std::complex<double>>(n));
    std::vector<std::vector<double>> wave(dim, std::vector<double>(n));
    for (int a = 0; a < dim; ++a) {
        for (int m = 0; m < n; ++m) {
            const int sm = signed_mode(m, n);
            wave[a][m] = 2.0 * std::numbers::pi * sm / period;
            basis[a][m] = (sm == -n / 2) ? 0.0 : std::polar(1.0, wave[a][m] * (x[a] + spec_.half_width));
        }
    }
    const std::complex<double> I(0.0, 1.0);
    Jet jet;
    for (std::size_t flat = 0; flat < coeffs_.size(); ++flat) {
        const auto idx = spec_.unravel(flat);
        std::complex<double> term = coeffs_[flat];
        for (int a = 0; a < dim; ++a) term *= basis[a][idx[a]];
        if (term == 0.0) continue;
        jet.value += term.real();
        for (int a = 0; a < dim; ++a) {
            const std::complex<double> da = I * wave[a][idx[a]];
            jet.gradient[a] += (term * da).real();
            for (int b = 0; b <= a; ++b) jet.hessian[a][b] += (term * da * (I * wave[b][idx[b]])).real();
        }
    }
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < a; ++b) jet.hessian[b][a] = jet.hessian[a][b];
    return jet;
}

}  // namespace besselpot
