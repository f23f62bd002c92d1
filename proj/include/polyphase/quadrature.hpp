#pragma once

#include <cmath>
#include <complex>

namespace polyphase {

// Adaptive Simpson on [a, b]; works for real and complex integrands.
namespace detail {

template <typename F, typename T>
T simpson_step(const F& f, double a, double b, T fa, T fm, T fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F, typename T>
T adaptive_simpson_rec(const F& f, double a, double b, T fa, T fm, T fb, T whole, double eps,
                       int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    T flm = f(lm), frm = f(rm);
    T left = simpson_step(f, a, m, fa, flm, fm);
    T right = simpson_step(f, m, b, fm, frm, fb);
    T delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, eps * 0.5, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, eps * 0.5, depth - 1);
}

}  // namespace detail

template <typename F>
auto adaptive_simpson(const F& f, double a, double b, double eps = 1e-12, int max_depth = 40) {
    using T = decltype(f(a));
    T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    T whole = detail::simpson_step(f, a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

}  // namespace polyphase
