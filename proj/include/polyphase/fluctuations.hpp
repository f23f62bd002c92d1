#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyphase/ensemble.hpp"
#include "polyphase/spectral.hpp"
#include "polyphase/summation.hpp"

namespace polyphase {

// Resample only the d phase variables of one row at the given replica.
inline std::vector<double> sample_row_omegas(const EnsembleParams& params, long row,
                                             std::uint64_t replica) {
    params.validate();
    if (replica >= kMaxReplica) throw std::invalid_argument("replica index overflow");
    std::vector<double> w(params.d);
    for (int q = 1; q <= params.d; ++q)
        w[q - 1] = inverse_cdf(params.density,
                               uniform01(key_bits(params.seed, (std::uint64_t)row, (std::uint64_t)q,
                                                  replica)));
    return w;
}

// Fluctuation term F_i(z) = (1/N) sum_{k != l} G^(i)_{k,l} phi_k^* phi_l with
// phi_k = e[sum_q w_{i,q} k^q]; equals r^i* G r^i - (1/N) tr G.
inline Complex fluctuation(const GreenMatrix& green, const double* omega_row, int d) {
    const long n = green.G.rows();
    Vector phi = phase_row(omega_row, d, n);
    Complex quad = (phi.adjoint() * (green.G * phi))(0, 0);
    return (quad - green.G.trace()) / (double)n;
}

// Quadratic form sum_j |<r^i, e_j>|^2 / (lambda_j - z) through the minor
// Gram eigenbasis; one decomposition serves every replica.
inline Complex quadform_from_decomp(const SpectralDecomposition& minor_decomp,
                                    const double* omega_row, int d, Complex z) {
    if (!minor_decomp.has_vectors())
        throw std::invalid_argument("quadform_from_decomp: eigenvectors required");
    const long n = minor_decomp.size();
    Vector phi = phase_row(omega_row, d, n);
    Vector w = minor_decomp.eigenvectors.adjoint() * phi;
    std::vector<Complex> terms(n);
    for (long j = 0; j < n; ++j)
        terms[j] = std::norm(w(j)) / (minor_decomp.eigenvalues(j) - z);
    return pairwise_sum(std::move(terms)) / (double)n;
}

inline Complex fluctuation_from_decomp(const SpectralDecomposition& minor_decomp,
                                       const double* omega_row, int d, Complex z) {
    return quadform_from_decomp(minor_decomp, omega_row, d, z) - stieltjes_mN(minor_decomp, z);
}

struct McEstimate {
    Complex mean;
    double stderr_ = 0.0;
    bool stderr_defined = false;
    Complex m_minor;
    long replicas = 0;
};

// Monte-Carlo partial expectation E_i of the quadratic form: row i is redrawn
// per replica while the minor stays fixed. For the uniform density the mean
// converges to m_N^(i)(z) exactly.
inline McEstimate partial_expectation_mc(const EnsembleParams& params, long i, Complex z,
                                         long replicas) {
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    OmegaTable base = sample_omegas(params, 0);
    Matrix X = build_matrix(params, base);
    auto decomp = eig_herm(minor_gram(minor(X, i)), true, SpectralSource::MinorGram);

    std::vector<Complex> samples((std::size_t)replicas);
    for (long r = 0; r < replicas; ++r) {
        auto row = sample_row_omegas(params, i, (std::uint64_t)(r + 1));
        samples[(std::size_t)r] = quadform_from_decomp(decomp, row.data(), params.d, z);
    }
    McEstimate out;
    out.replicas = replicas;
    out.m_minor = stieltjes_mN(decomp, z);
    out.mean = pairwise_sum(samples) / (double)replicas;
    if (replicas >= 2) {
        std::vector<double> sq(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) sq[k] = std::norm(samples[k] - out.mean);
        double var = pairwise_sum(std::move(sq)) / (double)(replicas - 1);
        out.stderr_ = std::sqrt(var / (double)replicas);
        out.stderr_defined = true;
    }
    return out;
}

// f(v) = prod_q (1_{v_q = 0} + C'/|v_q|)
inline double weight_f(std::span<const long> v, double cprime) {
    double f = 1.0;
    for (long vq : v) f *= vq == 0 ? 1.0 : cprime / std::abs((double)vq);
    return f;
}

// sum over |v_q| <= M of f(v) = (1 + 2 C' H_M)^d, the harmonic factor summed
// directly; grows like (log M)^d
inline double weight_f_sum(int d, std::uint64_t M, double cprime) {
    double h = 0.0;
    for (std::uint64_t m = 1; m <= M; ++m) h += 1.0 / (double)m;
    return std::pow(1.0 + 2.0 * cprime * h, d);
}

struct MomentEstimate {
    int p = 1;
    double estimate = 0.0;          // |mean of F^{2p}|
    double mean_of_modulus = 0.0;   // mean of |F|^{2p}, diagnostic
    double stderr_ = 0.0;
    double paper_bound = 0.0;       // (N^{-1/36 - eps} / Im z)^{2p}
    long replicas = 0;
};

inline MomentEstimate moment_from_samples(const std::vector<Complex>& fpow, int p,
                                          double paper_bound) {
    MomentEstimate est;
    est.p = p;
    est.replicas = (long)fpow.size();
    est.paper_bound = paper_bound;
    if (fpow.empty()) return est;
    Complex mean = pairwise_sum(std::vector<Complex>(fpow)) / (double)fpow.size();
    est.estimate = std::abs(mean);
    std::vector<double> mods(fpow.size()), sq(fpow.size());
    for (std::size_t k = 0; k < fpow.size(); ++k) {
        mods[k] = std::abs(fpow[k]);
        sq[k] = std::norm(fpow[k] - mean);
    }
    est.mean_of_modulus = pairwise_sum(std::move(mods)) / (double)fpow.size();
    if (fpow.size() >= 2) {
        double var = pairwise_sum(std::move(sq)) / (double)(fpow.size() - 1);
        est.stderr_ = std::sqrt(var / (double)fpow.size());
    }
    return est;
}

inline double moment_paper_bound(long N, double eta, int p, double eps = 0.0) {
    return std::pow(std::pow((double)N, -1.0 / 36.0 - eps) / eta, 2.0 * p);
}

// Monte-Carlo estimate of |E_i[F_i(z)^{2p}]| over row-i replicas with the
// minor fixed. 2p is capped at 8: the heavy tails of F^{2p} make larger p
// statistically meaningless at desk scale.
inline MomentEstimate moment_mc(const EnsembleParams& params, long i, Complex z, int p,
                                long replicas, double eps = 0.0) {
    if (p < 1 || 2 * p > 8) throw std::invalid_argument("moment_mc: 2p must lie in [2, 8]");
    if (replicas < 2) throw std::invalid_argument("moment_mc: replicas must be >= 2");
    OmegaTable base = sample_omegas(params, 0);
    Matrix X = build_matrix(params, base);
    auto decomp = eig_herm(minor_gram(minor(X, i)), true, SpectralSource::MinorGram);
    Complex m_minor = stieltjes_mN(decomp, z);

    std::vector<Complex> fpow((std::size_t)replicas);
    for (long r = 0; r < replicas; ++r) {
        auto row = sample_row_omegas(params, i, (std::uint64_t)(r + 1));
        Complex F = quadform_from_decomp(decomp, row.data(), params.d, z) - m_minor;
        Complex acc = 1.0;
        for (int t = 0; t < 2 * p; ++t) acc *= F;
        fpow[(std::size_t)r] = acc;
    }
    return moment_from_samples(fpow, p, moment_paper_bound(params.N, z.imag(), p, eps));
}

// The two parts of the self-consistent-equation error E_i = (m^(i) - m_N) + F_i
struct ErrorTerms {
    Complex interlace_part;  // m_N^(i) - m_N
    Complex fluct_part;      // F_i
};

inline ErrorTerms error_terms(const Matrix& X, long i, Complex z) {
    auto full = eig_herm(gram(X), false);
    MinorData m = minor(X, i);
    auto mg = eig_herm(minor_gram(m), true, SpectralSource::MinorGram);
    const long n = X.rows();
    // recover e[phase_k] for row i directly from the matrix row
    Vector phi = X.row(i).transpose() * std::sqrt((double)n);
    Vector w = mg.eigenvectors.adjoint() * phi;
    std::vector<Complex> terms((std::size_t)n);
    for (long j = 0; j < n; ++j)
        terms[(std::size_t)j] = std::norm(w(j)) / (mg.eigenvalues(j) - z);
    Complex quad = pairwise_sum(std::move(terms)) / (double)n;
    Complex m_minor = stieltjes_mN(mg, z);
    return {m_minor - stieltjes_mN(full, z), quad - m_minor};
}

}  // namespace polyphase
