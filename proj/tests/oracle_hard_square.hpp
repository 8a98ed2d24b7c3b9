#pragma once
// Reference value for the hard-square entropy constant, computed from strip
// transfer matrices with free vertical boundary: log of the dominant
// eigenvalue for consecutive widths, extrapolated via first differences.
// Deliberately self-contained; shares no code with the library.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// log of the dominant eigenvalue of the width-h strip transfer matrix.
inline double strip_log_eigenvalue(int h) {
    const std::uint32_t full = (1u << h) - 1;
    auto ok = [](std::uint32_t s) { return (s & (s << 1)) == 0; };
    std::vector<double> v(full + 1, 0.0), f(full + 1, 0.0);
    for (std::uint32_t s = 0; s <= full; ++s)
        if (ok(s)) v[s] = 1.0;
    double lam = 0.0;
    int stable = 0;
    for (int it = 0; it < 5000 && stable < 4; ++it) {
        for (std::uint32_t s = 0; s <= full; ++s) f[s] = ok(s) ? v[s] : 0.0;
        for (int b = 0; b < h; ++b)
            for (std::uint32_t m = 0; m <= full; ++m)
                if (m >> b & 1u) f[m] += f[m ^ (1u << b)];
        double old_sum = 0.0, new_sum = 0.0;
        for (std::uint32_t t = 0; t <= full; ++t) {
            old_sum += v[t];
            v[t] = ok(t) ? f[full ^ t] : 0.0;
            new_sum += v[t];
        }
        double est = new_sum / old_sum;
        stable = std::abs(est - lam) <= 1e-14 * est ? stable + 1 : 0;
        lam = est;
        for (std::uint32_t t = 0; t <= full; ++t) v[t] /= est;
    }
    return std::log(lam);
}

/// Entropy estimate: difference of strip eigen-logs at the largest widths.
inline double hard_square_entropy(int h_max = 16) {
    double a = strip_log_eigenvalue(h_max);
    double b = strip_log_eigenvalue(h_max + 1);
    return b - a;
}

// Frozen reference: hard_square_entropy(16) printed 0.407495101261 during
// oracle bring-up; the published constant rounds to the same digits.
inline constexpr double kHardSquareEntropy = 0.4074951;

}  // namespace oracle
