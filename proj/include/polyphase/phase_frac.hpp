#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace polyphase {

// Exact evaluation of frac(omega * k^q). exp(2*pi*i*x) only depends on
// frac(x), and for k^q beyond 2^53 a naive double product has no correct
// bits left, so the reduction is done in integer arithmetic: omega is a
// dyadic rational m/2^s exactly, hence frac(omega*K) = (m*K mod 2^s)/2^s.
namespace detail {

// Little-endian base-2^64 unsigned integer; only the operations the phase
// reduction needs.
struct BigU {
    std::vector<std::uint64_t> limb;

    explicit BigU(std::uint64_t v = 0) : limb{v} {}

    void mul_small(std::uint64_t f) {
        unsigned __int128 carry = 0;
        for (auto& l : limb) {
            unsigned __int128 p = (unsigned __int128)l * f + carry;
            l = (std::uint64_t)p;
            carry = p >> 64;
        }
        if (carry) limb.push_back((std::uint64_t)carry);
    }

    // bits [pos, pos+64); negative positions read as zero
    std::uint64_t bits64_at(long pos) const {
        auto bit = [&](long b) -> std::uint64_t {
            if (b < 0) return 0;
            std::size_t li = (std::size_t)(b / 64);
            if (li >= limb.size()) return 0;
            return (limb[li] >> (b % 64)) & 1u;
        };
        std::uint64_t out = 0;
        for (int i = 0; i < 64; ++i) out |= bit(pos + i) << i;
        return out;
    }
};

inline double frac_from_top_bits(std::uint64_t hi, std::uint64_t lo) {
    long double f = std::ldexp((long double)hi, -64) + std::ldexp((long double)lo, -128);
    double d = (double)f;
    if (d >= 1.0) d = std::nextafter(1.0, 0.0);
    return d < 0.0 ? 0.0 : d;
}

}  // namespace detail

// frac(omega * K) for exact integer K given as base and exponent, K = k^q.
inline double frac_mul_pow(double omega, std::uint64_t k, int q) {
    if (omega == 0.0 || k == 0) return 0.0;
    int e2 = 0;
    double mant = std::frexp(omega, &e2);  // omega = mant * 2^e2
    std::uint64_t m = (std::uint64_t)std::ldexp(mant, 53);
    long s = 53 - e2;        // omega = m / 2^s
    if (s <= 0) return 0.0;  // omega is an integer (not reachable for omega in [0,1))

    // fast path: K fits comfortably so m*K fits in 128 bits
    unsigned __int128 K = 1;
    bool fits = true;
    for (int i = 0; i < q; ++i) {
        if (K > ((unsigned __int128)1 << 75) / k) {
            fits = false;
            break;
        }
        K *= k;
    }
    if (fits) {
        unsigned __int128 P = (unsigned __int128)m * K;
        unsigned __int128 Plow = s >= 128 ? P : P & (((unsigned __int128)1 << s) - 1);
        std::uint64_t hi, lo;
        if (s <= 128) {
            unsigned __int128 V = Plow << (128 - s);
            hi = (std::uint64_t)(V >> 64);
            lo = (std::uint64_t)V;
        } else {
            // value = Plow / 2^s with s > 128: top bits shifted down
            long double f = std::ldexp((long double)(std::uint64_t)(Plow >> 64), (int)(64 - s)) +
                            std::ldexp((long double)(std::uint64_t)Plow, (int)(-s));
            double d = (double)f;
            return d < 0.0 ? 0.0 : (d >= 1.0 ? std::nextafter(1.0, 0.0) : d);
        }
        return detail::frac_from_top_bits(hi, lo);
    }

    detail::BigU P(m);
    for (int i = 0; i < q; ++i) P.mul_small(k);
    std::uint64_t hi = P.bits64_at(s - 64);
    std::uint64_t lo = P.bits64_at(s - 128);
    return detail::frac_from_top_bits(hi, lo);
}

// frac(sum_q omega[q-1] * k^q); omegas is the length-d row of phase variables
inline double phase_frac(const double* omegas, int d, std::uint64_t k) {
    double t = 0.0;
    for (int q = 1; q <= d; ++q) t += frac_mul_pow(omegas[q - 1], k, q);
    return t - std::floor(t);
}

}  // namespace polyphase
