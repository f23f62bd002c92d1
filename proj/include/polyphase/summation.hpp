#pragma once

#include <cstddef>
#include <vector>

namespace polyphase {

// Fixed-shape pairwise summation tree: the result depends only on the order
// of the inputs, never on scheduling, and keeps rounding error at O(log n).
template <typename T>
T pairwise_sum(std::vector<T> v) {
    if (v.empty()) return T{};
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2 == 1) {
            v[half] = v[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return v[0];
}

}  // namespace polyphase
