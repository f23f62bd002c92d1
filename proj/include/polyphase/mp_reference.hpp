#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polyphase/quadrature.hpp"

namespace polyphase {

using Complex = std::complex<double>;

// rho_MP(x) = (2 pi x)^(-1) sqrt(x(4-x)) on (0,4], density parameter 1
inline double rho_mp(double x) {
    if (!(x > 0.0) || x > 4.0) return 0.0;
    return std::sqrt(x * (4.0 - x)) / (2.0 * std::numbers::pi * x);
}

// Principal branch sqrt(r e^{i t}) = sqrt(r) e^{i t/2}, t in (-pi, pi)
inline Complex sqrt_branch(Complex z) { return std::sqrt(z); }

// m_sc solves m^2 + z m + 1 = 0 with Im m > 0
inline Complex m_sc(Complex z) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("m_sc: Im z must be positive");
    Complex disc = std::sqrt(z * z - 4.0);
    Complex r1 = (-z + disc) / 2.0;
    Complex r2 = (-z - disc) / 2.0;
    return r1.imag() > 0.0 ? r1 : r2;
}

// m_MP solves z m^2 + z m + 1 = 0 with Im m > 0
inline Complex m_mp(Complex z) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("m_mp: Im z must be positive");
    Complex disc = std::sqrt(z * z - 4.0 * z);
    Complex r1 = (-z + disc) / (2.0 * z);
    Complex r2 = (-z - disc) / (2.0 * z);
    return r1.imag() > 0.0 ? r1 : r2;
}

inline double mp_quadratic_residual(Complex z, Complex m) {
    return std::abs(z * m * m + z * m + 1.0);
}

// Quadrature route for m_MP. The substitution x = 4 sin^2 t removes the
// endpoint singularities: rho_MP(x) dx = (4/pi) cos^2 t dt.
inline Complex m_mp_quadrature(Complex z, double eps = 1e-10) {
    auto f = [&](double t) -> Complex {
        double s = std::sin(t), c = std::cos(t);
        return (4.0 / std::numbers::pi) * c * c / (4.0 * s * s - z);
    };
    return adaptive_simpson(f, 0.0, std::numbers::pi / 2.0, eps);
}

// F_MP(E) = int_{-inf}^E rho_MP; closed form (2t + sin 2t)/pi at t = asin(sqrt(E)/2)
inline double F_mp(double E) {
    if (E <= 0.0) return 0.0;
    if (E >= 4.0) return 1.0;
    double t = std::asin(0.5 * std::sqrt(E));
    return (2.0 * t + std::sin(2.0 * t)) / std::numbers::pi;
}

inline double F_mp_quadrature(double E, double eps = 1e-11) {
    if (E <= 0.0) return 0.0;
    double tmax = E >= 4.0 ? std::numbers::pi / 2.0 : std::asin(0.5 * std::sqrt(E));
    auto f = [](double t) {
        double c = std::cos(t);
        return (4.0 / std::numbers::pi) * c * c;
    };
    return adaptive_simpson(f, 0.0, tmax, eps);
}

// A point of the spectral domain D: E in (kappa, 4-kappa), eta in (N^-theta, c_kappa)
struct DomainPoint {
    Complex z;
    double kappa = 0.5;
    double c_kappa = 1.0;
    double theta = 0.0;
    long N = 1;

    bool in_domain() const {
        double E = z.real(), eta = z.imag();
        return E > kappa && E < 4.0 - kappa && eta > std::pow((double)N, -theta) && eta < c_kappa;
    }
};

struct StabilityReport {
    double delta = 0.0;       // |m + 1/(z + z m)|
    double dist_mp = 0.0;     // |m - m_MP(z)|
    double dist_other = 0.0;  // |m - 1/(z m_MP(z))|
    double bound = 0.0;       // C delta / kappa
    bool applicable = false;  // delta <= 1
    bool violated = false;    // applicable and min(dist) > bound
};

inline StabilityReport stability_report(Complex m, const DomainPoint& p, double C = 100.0) {
    StabilityReport r;
    Complex z = p.z;
    r.delta = std::abs(m + 1.0 / (z + z * m));
    Complex mp = m_mp(z);
    r.dist_mp = std::abs(m - mp);
    r.dist_other = std::abs(m - 1.0 / (z * mp));
    r.bound = C * r.delta / p.kappa;
    r.applicable = r.delta <= 1.0;
    r.violated = r.applicable && std::min(r.dist_mp, r.dist_other) > r.bound;
    return r;
}

// Im[z m_MP(z)]; positive on D for small enough c_kappa, which rules out
// the spurious quadratic root.
inline double imlb_check(const DomainPoint& p) { return (p.z * m_mp(p.z)).imag(); }

// Semicircle stability surrogate: if |m + 1/(z+m)| = delta <= 1 then
// min(|m - m_sc|, |m - 1/m_sc|) <= C delta / sqrt(kappa + eta + delta).
struct MscStabilitySample {
    Complex z;
    Complex m;
    double delta = 0.0;
    double min_dist = 0.0;
    double bound = 0.0;
    bool violated = false;
};

inline MscStabilitySample check_msc_stability(Complex z, Complex m, double C = 100.0) {
    MscStabilitySample s;
    s.z = z;
    s.m = m;
    s.delta = std::abs(m + 1.0 / (z + m));
    double kappa = std::abs(std::abs(z.real()) - 2.0);
    Complex msc = m_sc(z);
    s.min_dist = std::min(std::abs(m - msc), std::abs(m - 1.0 / msc));
    s.bound = C * s.delta / std::sqrt(kappa + z.imag() + s.delta);
    s.violated = s.delta <= 1.0 && s.min_dist > s.bound;
    return s;
}

}  // namespace polyphase
