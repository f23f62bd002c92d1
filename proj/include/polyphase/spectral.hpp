#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "polyphase/ensemble.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace polyphase {

enum class SpectralSource { Gram, MinorGram };

// Eigendecomposition of a Hermitian Gram-type matrix, eigenvalues ascending.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;  // empty when only eigenvalues were requested
    SpectralSource source = SpectralSource::Gram;

    long size() const { return eigenvalues.size(); }
    bool has_vectors() const { return eigenvectors.size() > 0; }
};

// X with one row removed; rows are bit-identical copies of the original.
struct MinorData {
    Matrix Xi;  // (N-1) x N
    long removed = 0;
};

// G^(i)(z) = ((X^(i))* X^(i) - z)^(-1)
struct GreenMatrix {
    Matrix G;
    long removed = 0;
    Complex z;
};

inline Matrix gram(const Matrix& X) {
    Matrix H = X * X.adjoint();
    H = 0.5 * (H + H.adjoint()).eval();
    return H;
}

// Dense Hermitian eigensolver (LAPACK zheevd). Eigenvector phases are fixed
// by rotating the largest-modulus component to the positive real axis.
inline SpectralDecomposition eig_herm(const Matrix& H, bool compute_vectors = true,
                                      SpectralSource source = SpectralSource::Gram) {
    const long n = H.rows();
    if (H.cols() != n) throw std::invalid_argument("eig_herm: square matrix required");
    Matrix A = H;
    Eigen::VectorXd w(n);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, compute_vectors ? 'V' : 'N', 'L',
                                     (lapack_int)n, A.data(), (lapack_int)n, w.data());
    if (info != 0)
        throw std::runtime_error("zheevd failed to converge, info=" + std::to_string(info));
    SpectralDecomposition out;
    out.eigenvalues = std::move(w);
    out.source = source;
    if (compute_vectors) {
        for (long a = 0; a < n; ++a) {
            long imax = 0;
            double vmax = -1.0;
            for (long i = 0; i < n; ++i) {
                double m = std::abs(A(i, a));
                if (m > vmax) {
                    vmax = m;
                    imax = i;
                }
            }
            if (vmax > 0.0) A.col(a) *= std::conj(A(imax, a)) / vmax;
        }
        out.eigenvectors = std::move(A);
    }
    return out;
}

// m_N(z) = (1/N) sum_j (sigma_j^2 - z)^(-1), Im z > 0
inline Complex stieltjes_mN(const SpectralDecomposition& decomp, Complex z) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("stieltjes_mN: Im z must be positive");
    Complex s = 0.0;
    const long n = decomp.size();
    for (long j = 0; j < n; ++j) s += 1.0 / (decomp.eigenvalues(j) - z);
    return s / (double)n;
}

// sqrt(z)*m_N(z) through the partial-fraction form over singular values:
// (1/2N) sum_j ((sigma_j - sqrt z)^(-1) - (sigma_j + sqrt z)^(-1))
inline Complex stieltjes_sqrt_form(const SpectralDecomposition& decomp, Complex z) {
    Complex sq = std::sqrt(z);
    Complex s = 0.0;
    const long n = decomp.size();
    for (long j = 0; j < n; ++j) {
        double sigma = std::sqrt(std::max(0.0, decomp.eigenvalues(j)));
        s += 1.0 / (sigma - sq) - 1.0 / (sigma + sq);
    }
    return s / (2.0 * (double)n);
}

// F_N(E) = (1/N) #{j : sigma_j^2 <= E}
inline double counting_function(const SpectralDecomposition& decomp, double E) {
    const long n = decomp.size();
    long c = 0;
    for (long j = 0; j < n; ++j)
        if (decomp.eigenvalues(j) <= E) ++c;
    return (double)c / (double)n;
}

inline MinorData minor(const Matrix& X, long i) {
    const long n = X.rows();
    if (i < 0 || i >= n) throw std::invalid_argument("minor: row index out of range");
    MinorData m;
    m.removed = i;
    m.Xi.resize(n - 1, X.cols());
    m.Xi.topRows(i) = X.topRows(i);
    m.Xi.bottomRows(n - 1 - i) = X.bottomRows(n - 1 - i);
    return m;
}

// (X^(i))* X^(i), the N x N minor Gram (rank <= N-1)
inline Matrix minor_gram(const MinorData& m) {
    Matrix M = m.Xi.adjoint() * m.Xi;
    M = 0.5 * (M + M.adjoint()).eval();
    return M;
}

// X^(i) (X^(i))*, the (N-1) x (N-1) companion Gram
inline Matrix companion_gram(const MinorData& m) {
    Matrix B = m.Xi * m.Xi.adjoint();
    B = 0.5 * (B + B.adjoint()).eval();
    return B;
}

// (H - z)^(-1) by LU with partial pivoting
inline Matrix resolvent(const Matrix& H, Complex z) {
    const long n = H.rows();
    Matrix A = H - z * Matrix::Identity(n, n);
    return Eigen::PartialPivLU<Matrix>(A).solve(Matrix::Identity(n, n));
}

inline GreenMatrix green_minor(const MinorData& m, Complex z, double residual_tol = 1e-9) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("green_minor: Im z must be positive");
    Matrix M = minor_gram(m);
    const long n = M.rows();
    Matrix G = resolvent(M, z);
    double resid =
        ((M - z * Matrix::Identity(n, n)) * G - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (resid > residual_tol)
        throw std::runtime_error("green_minor: solve residual " + std::to_string(resid) +
                                 " exceeds tolerance");
    return {std::move(G), m.removed, z};
}

// Max relative Ward error over all rows and all columns:
// sum_l |G_{k,l}|^2 = Im[G_{k,k}] / Im z  (and the transposed version)
inline double ward_max_rel_error(const Matrix& G, Complex z) {
    const double eta = z.imag();
    double worst = 0.0;
    const long n = G.rows();
    for (long k = 0; k < n; ++k) {
        double row = G.row(k).squaredNorm();
        double col = G.col(k).squaredNorm();
        double ref = G(k, k).imag() / eta;
        worst = std::max(worst, std::abs(row - ref) / std::abs(ref));
        worst = std::max(worst, std::abs(col - ref) / std::abs(ref));
    }
    return worst;
}

// Residual of A* (AA* - z)^(-1) A = A*A (A*A - z)^(-1) in max norm
inline double check_operator_identity(const Matrix& A, Complex z) {
    if (z.imag() == 0.0) throw std::invalid_argument("check_operator_identity: Im z must be nonzero");
    const long m = A.rows(), n = A.cols();
    Matrix lhs = A.adjoint() *
                 Eigen::PartialPivLU<Matrix>(A * A.adjoint() - z * Matrix::Identity(m, m))
                     .solve(Matrix(A));
    Matrix AA = A.adjoint() * A;
    Matrix rhs =
        AA * Eigen::PartialPivLU<Matrix>(AA - z * Matrix::Identity(n, n)).solve(Matrix::Identity(n, n));
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// Left: [(XX* - z)^(-1)]_{ii}. Right: -1/(z + z m^(i)(z) + z F_i(z)).
inline std::pair<Complex, Complex> schur_diag(const Matrix& X, long i, Complex z, Complex F_i,
                                              Complex m_minor) {
    const long n = X.rows();
    Matrix H = gram(X);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(i) = 1.0;
    Eigen::VectorXcd g =
        Eigen::PartialPivLU<Matrix>(H - z * Matrix::Identity(n, n)).solve(e);
    Complex lhs = g(i);
    Complex rhs = -1.0 / (z + z * m_minor + z * F_i);
    return {lhs, rhs};
}

struct InterlacingReport {
    Complex m_full;
    Complex m_minor;
    double gap = 0.0;                // |m_N - m_N^(i)|
    double bound = 0.0;              // C / (N eta)
    double max_violation = 0.0;      // worst Cauchy interlacing violation
    double minor_kernel_eig = 0.0;   // smallest eigenvalue of the N x N minor Gram
};

// Checks |m_N - m_N^(i)| <= C/(N eta) and lambda_j <= mu_j <= lambda_{j+1}
// for the companion Gram eigenvalues mu.
inline InterlacingReport interlacing_check(const Matrix& X, long i, Complex z, double C = 4.0) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("interlacing_check: Im z must be positive");
    const long n = X.rows();
    InterlacingReport rep;
    auto full = eig_herm(gram(X), false);
    MinorData m = minor(X, i);
    auto mg = eig_herm(minor_gram(m), false, SpectralSource::MinorGram);
    auto comp = eig_herm(companion_gram(m), false);
    rep.m_full = stieltjes_mN(full, z);
    rep.m_minor = stieltjes_mN(mg, z);
    rep.gap = std::abs(rep.m_full - rep.m_minor);
    rep.bound = C / ((double)n * z.imag());
    rep.minor_kernel_eig = mg.eigenvalues(0);
    double viol = 0.0;
    for (long j = 0; j < n - 1; ++j) {
        viol = std::max(viol, full.eigenvalues(j) - comp.eigenvalues(j));
        viol = std::max(viol, comp.eigenvalues(j) - full.eigenvalues(j + 1));
    }
    rep.max_violation = std::max(viol, 0.0);
    return rep;
}

}  // namespace polyphase
