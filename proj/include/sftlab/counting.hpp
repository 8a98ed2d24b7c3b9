#pragma once
// Exact counting of locally admissible block fills with arbitrary-precision
// integers: direct matrix-vector transfer in 1D, sliding-window profile DP
// in 2D. Also the guarded conversion of big-integer counts to logarithms.

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sftlab/csp.hpp"

namespace sftlab {

/// |{ locally admissible fills of B_n }| exactly. d in {1,2}.
inline BigInt count_locally_admissible_block(const NNSFT& x, int n,
                                             std::uint64_t state_budget = 1u << 24) {
    if (n < 0) throw std::invalid_argument("block radius must be nonnegative");
    const int k = x.letters();
    const int len = 2 * n + 1;
    if (x.dim() == 1) {
        std::vector<BigInt> v(static_cast<std::size_t>(k), 1);
        for (int step = 1; step < len; ++step) {
            std::vector<BigInt> nv(static_cast<std::size_t>(k), 0);
            for (int a = 0; a < k; ++a) {
                std::uint64_t succ = x.next_mask(0, a);
                while (succ) {
                    int b = std::countr_zero(succ);
                    succ &= succ - 1;
                    nv[static_cast<std::size_t>(b)] += v[static_cast<std::size_t>(a)];
                }
            }
            v.swap(nv);
        }
        BigInt total = 0;
        for (const BigInt& c : v) total += c;
        return total;
    }
    if (x.dim() != 2) throw std::invalid_argument("counting supports d in {1,2}");

    // Sliding window of the last `len` letters in column-major order. The
    // letter pushed out is the horizontal neighbour of the incoming site.
    double states_d = std::pow(static_cast<double>(k), len);
    if (states_d > static_cast<double>(state_budget))
        throw BudgetExceeded("counting state budget exceeded (column too tall)");
    const std::size_t states = static_cast<std::size_t>(states_d + 0.5);
    const std::size_t low = states / static_cast<std::size_t>(k);

    std::vector<BigInt> cur(states, 0);
    // Seed with the vertically admissible first-column fills.
    std::vector<int> col(static_cast<std::size_t>(len));
    auto seed = [&](auto&& self, int depth, std::size_t idx) -> void {
        if (depth == len) {
            cur[idx] += 1;
            return;
        }
        for (int a = 0; a < k; ++a) {
            if (depth > 0 && !x.allowed(1, col[static_cast<std::size_t>(depth - 1)], a)) continue;
            col[static_cast<std::size_t>(depth)] = a;
            self(self, depth + 1, idx * static_cast<std::size_t>(k) + static_cast<std::size_t>(a));
        }
    };
    seed(seed, 0, 0);
    for (int cx = 1; cx < len; ++cx) {
        for (int cy = 0; cy < len; ++cy) {
            std::vector<BigInt> next(states, 0);
            for (std::size_t s = 0; s < states; ++s) {
                if (cur[s] == 0) continue;
                int out = static_cast<int>(s / low);        // horizontal neighbour
                int below = static_cast<int>(s % static_cast<std::size_t>(k));
                for (int a = 0; a < k; ++a) {
                    if (!x.allowed(0, out, a)) continue;
                    if (cy > 0 && !x.allowed(1, below, a)) continue;
                    next[(s % low) * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)] += cur[s];
                }
            }
            cur.swap(next);
        }
    }
    BigInt total = 0;
    for (const BigInt& c : cur) total += c;
    return total;
}

/// Natural log of a positive big integer with ~1e-15 relative accuracy.
/// `outward` nudges the result up or down by a few ulps so callers can keep
/// one-sided rigor when the count feeds an upper or lower bound.
inline double bigint_log(const BigInt& v, int outward = 0) {
    if (v <= 0) throw std::invalid_argument("log of non-positive count");
    const std::size_t bits = boost::multiprecision::msb(v);
    double r;
    if (bits < 52) {
        r = std::log(v.convert_to<double>());
    } else {
        BigInt top = v >> (bits - 52);
        double mant = top.convert_to<double>();  // in [2^52, 2^53)
        r = std::log(mant) + static_cast<double>(bits - 52) * std::log(2.0);
    }
    if (outward != 0) {
        double slack = 8e-16 * std::max(1.0, std::fabs(r));
        r += outward > 0 ? slack : -slack;
    }
    return r;
}

}  // namespace sftlab
