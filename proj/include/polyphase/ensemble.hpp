#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polyphase/phase_frac.hpp"
#include "polyphase/quadrature.hpp"
#include "polyphase/rng.hpp"

namespace polyphase {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class DensityKind { Uniform, RaisedCosine };

// Probability density on the 1-torus: uniform, or rho(w) = 1 + a*cos(2*pi*w).
struct DensitySpec {
    DensityKind kind = DensityKind::Uniform;
    double a = 0.0;

    static DensitySpec uniform() { return {DensityKind::Uniform, 0.0}; }
    static DensitySpec raised_cosine(double a) { return {DensityKind::RaisedCosine, a}; }

    void validate() const {
        if (kind == DensityKind::RaisedCosine && (a < 0.0 || a >= 1.0 || !std::isfinite(a)))
            throw std::invalid_argument("raised cosine amplitude must lie in [0,1)");
    }

    double pdf(double w) const {
        if (kind == DensityKind::Uniform) return 1.0;
        return 1.0 + a * std::cos(2.0 * std::numbers::pi * w);
    }

    double cdf(double w) const {
        if (kind == DensityKind::Uniform) return w;
        return w + a * std::sin(2.0 * std::numbers::pi * w) / (2.0 * std::numbers::pi);
    }

    // sup |rho'| = 2*pi*a
    double pdf_derivative_sup() const {
        return kind == DensityKind::Uniform ? 0.0 : 2.0 * std::numbers::pi * a;
    }

    // C' from the integration-by-parts bound |E e[a w]| <= 1_{a=0} + C'/|a|
    double cprime() const { return pdf_derivative_sup() / (2.0 * std::numbers::pi); }
};

struct EnsembleParams {
    long N = 1;
    int d = 1;
    DensitySpec density;
    std::uint64_t seed = 0;

    void validate() const {
        if (N < 1) throw std::invalid_argument("N must be >= 1");
        if (d < 1) throw std::invalid_argument("d must be >= 1");
        density.validate();
    }
};

// Phase variables w_{j,q}, row j in [0,N), degree q in [1,d].
struct OmegaTable {
    long N = 0;
    int d = 0;
    std::uint64_t replica = 0;
    std::vector<double> w;  // row-major, w[j*d + (q-1)]

    double operator()(long j, int q) const { return w[static_cast<std::size_t>(j) * d + (q - 1)]; }
    const double* row(long j) const { return w.data() + static_cast<std::size_t>(j) * d; }
};

inline constexpr std::uint64_t kMaxReplica = std::uint64_t(1) << 62;

// Inverse CDF of the density. The raised-cosine CDF is strictly increasing
// with derivative >= 1-a, solved by safeguarded Newton to 1e-12.
inline double inverse_cdf(const DensitySpec& density, double u) {
    if (density.kind == DensityKind::Uniform || density.a == 0.0) return u;
    double lo = 0.0, hi = 1.0, x = u;
    for (int it = 0; it < 200; ++it) {
        double g = density.cdf(x) - u;
        if (std::abs(g) <= 1e-13) break;
        if (g > 0)
            hi = x;
        else
            lo = x;
        double step = g / density.pdf(x);
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    if (x < 0.0) x = 0.0;
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    return x;
}

// Draw the full omega table. With row_override set, only that row reads the
// given replica stream; every other row stays on replica 0.
inline OmegaTable sample_omegas(const EnsembleParams& params, std::uint64_t replica = 0,
                                std::optional<long> row_override = std::nullopt) {
    params.validate();
    if (replica >= kMaxReplica) throw std::invalid_argument("replica index overflow");
    if (row_override && (*row_override < 0 || *row_override >= params.N))
        throw std::invalid_argument("row_override out of range");
    OmegaTable t;
    t.N = params.N;
    t.d = params.d;
    t.replica = replica;
    t.w.resize(static_cast<std::size_t>(params.N) * params.d);
    for (long j = 0; j < params.N; ++j) {
        std::uint64_t rep = row_override ? (j == *row_override ? replica : 0) : replica;
        for (int q = 1; q <= params.d; ++q) {
            double u = uniform01(key_bits(params.seed, (std::uint64_t)j, (std::uint64_t)q, rep));
            t.w[static_cast<std::size_t>(j) * params.d + (q - 1)] = inverse_cdf(params.density, u);
        }
    }
    return t;
}

// Phase row e[sum_q w_q k^q], k = 1..N, as a unit-modulus vector.
inline Vector phase_row(const double* omegas, int d, long N) {
    Vector phi(N);
    for (long k = 1; k <= N; ++k) {
        double f = phase_frac(omegas, d, (std::uint64_t)k);
        phi(k - 1) = std::polar(1.0, 2.0 * std::numbers::pi * f);
    }
    return phi;
}

// X_{jk} = N^{-1/2} e[sum_q w_{j,q} k^q], columns k = 1..N.
inline Matrix build_matrix(const EnsembleParams& params, const OmegaTable& omegas) {
    params.validate();
    if (omegas.N != params.N || omegas.d != params.d)
        throw std::invalid_argument("omega table shape mismatch");
    const double amp = 1.0 / std::sqrt((double)params.N);
    Matrix X(params.N, params.N);
    for (long j = 0; j < params.N; ++j) {
        const double* row = omegas.row(j);
        for (long k = 1; k <= params.N; ++k) {
            double f = phase_frac(row, params.d, (std::uint64_t)k);
            X(j, k - 1) = std::polar(amp, 2.0 * std::numbers::pi * f);
        }
    }
    return X;
}

inline Matrix build_matrix(const EnsembleParams& params) {
    return build_matrix(params, sample_omegas(params));
}

struct CharCoefficient {
    Complex value;  // int_0^1 e[a w] rho(w) dw
    double bound;   // 1_{a=0} + C'/|a|
};

// Fourier coefficient of the density at integer frequency a, closed form.
inline CharCoefficient char_coefficient(const DensitySpec& density, long a) {
    density.validate();
    double cp = density.cprime();
    double bound = a == 0 ? 1.0 : cp / std::abs((double)a);
    if (a == 0) return {Complex(1.0, 0.0), bound};
    if (density.kind == DensityKind::RaisedCosine && (a == 1 || a == -1))
        return {Complex(density.a / 2.0, 0.0), bound};
    return {Complex(0.0, 0.0), bound};
}

// Quadrature fallback for the same integral (used to cross-check closed forms).
inline Complex char_coefficient_quadrature(const DensitySpec& density, long a,
                                           double eps = 1e-12) {
    auto f = [&](double w) -> Complex {
        return density.pdf(w) * std::polar(1.0, 2.0 * std::numbers::pi * (double)a * w);
    };
    return adaptive_simpson(f, 0.0, 1.0, eps);
}

}  // namespace polyphase
