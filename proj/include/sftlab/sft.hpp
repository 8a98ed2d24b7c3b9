#pragma once
// Nearest-neighbour shifts of finite type: per-axis allowed letter pairs and
// local admissibility of finite patterns.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sftlab/pattern.hpp"

namespace sftlab {

/// An SFT on Z^d cut out by ordered letter pairs per axis: allowed(i, a, b)
/// permits letter a at p and letter b at p + e_i.
class NNSFT {
  public:
    NNSFT() = default;
    NNSFT(Alphabet alphabet, int dim, bool allow_all = true)
        : alphabet_(std::move(alphabet)), dim_(dim) {
        if (dim_ < 1) throw std::invalid_argument("dimension must be >= 1");
        const int k = alphabet_.size();
        std::uint64_t full = (k == 64) ? ~0ull : ((1ull << k) - 1);
        next_.assign(static_cast<std::size_t>(dim_),
                     std::vector<std::uint64_t>(static_cast<std::size_t>(k), allow_all ? full : 0));
        prev_ = next_;
    }

    int dim() const { return dim_; }
    const Alphabet& alphabet() const { return alphabet_; }
    int letters() const { return alphabet_.size(); }

    void set_allowed(int axis, int a, int b, bool allowed) {
        check(axis, a, b);
        std::uint64_t bit_b = 1ull << b, bit_a = 1ull << a;
        auto& n = next_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(a)];
        auto& p = prev_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(b)];
        if (allowed) {
            n |= bit_b;
            p |= bit_a;
        } else {
            n &= ~bit_b;
            p &= ~bit_a;
        }
    }

    bool allowed(int axis, int a, int b) const {
        check(axis, a, b);
        return (next_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(a)] >> b) & 1u;
    }

    /// Letters permitted at p given letter a at p - e_axis (mask over b).
    std::uint64_t next_mask(int axis, int a) const {
        return next_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(a)];
    }
    /// Letters permitted at p given letter b at p + e_axis (mask over a).
    std::uint64_t prev_mask(int axis, int b) const {
        return prev_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(b)];
    }

    std::uint64_t full_mask() const {
        const int k = alphabet_.size();
        return (k == 64) ? ~0ull : ((1ull << k) - 1);
    }

    static NNSFT full_shift(Alphabet alphabet, int dim) {
        return NNSFT(std::move(alphabet), dim, true);
    }

    /// Same relation on every axis, from a list of forbidden ordered pairs.
    static NNSFT from_forbidden_pairs(Alphabet alphabet, int dim,
                                      const std::vector<std::pair<int, int>>& forbidden) {
        NNSFT x(std::move(alphabet), dim, true);
        for (auto [a, b] : forbidden)
            for (int axis = 0; axis < dim; ++axis) x.set_allowed(axis, a, b, false);
        return x;
    }

    bool operator==(const NNSFT& o) const {
        return dim_ == o.dim_ && alphabet_ == o.alphabet_ && next_ == o.next_;
    }

  private:
    void check(int axis, int a, int b) const {
        if (axis < 0 || axis >= dim_) throw std::out_of_range("axis out of range");
        if (a < 0 || a >= letters() || b < 0 || b >= letters())
            throw std::out_of_range("letter out of range");
    }

    Alphabet alphabet_;
    int dim_ = 0;
    std::vector<std::vector<std::uint64_t>> next_;
    std::vector<std::vector<std::uint64_t>> prev_;
};

/// True iff every lattice edge inside the pattern's shape carries an allowed
/// pair. Single sites and the empty pattern are vacuously admissible.
inline bool is_locally_admissible(const NNSFT& x, const Pattern& w) {
    if (w.empty()) return true;
    if (w.shape().dim() != x.dim())
        throw std::invalid_argument("pattern dimension does not match SFT");
    const int d = x.dim();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Site& p = w.shape().at(i);
        int a = w.letters()[i];
        if (a < 0 || a >= x.letters()) throw std::invalid_argument("letter outside alphabet");
        for (int axis = 0; axis < d; ++axis) {
            Site q = p;
            ++q[static_cast<std::size_t>(axis)];
            auto b = w.try_at(q);
            if (b && !x.allowed(axis, a, *b)) return false;
        }
    }
    return true;
}

/// Some canonical model builders used across the test and demo surface.
namespace sfts {

/// Binary SFT forbidding adjacent 1s on every axis.
inline NNSFT hard_core(int dim) {
    return NNSFT::from_forbidden_pairs(Alphabet::numeric(2), dim, {{1, 1}});
}

/// Proper k-colourings of Z^d (adjacent letters must differ).
inline NNSFT proper_colouring(int k, int dim) {
    NNSFT x(Alphabet::numeric(k), dim, true);
    for (int a = 0; a < k; ++a)
        for (int axis = 0; axis < dim; ++axis) x.set_allowed(axis, a, a, false);
    return x;
}

/// Heights 0..g with unit Lipschitz condition along every axis.
inline NNSFT height_lipschitz(int g, int dim) {
    NNSFT x(Alphabet::numeric(g + 1), dim, false);
    for (int a = 0; a <= g; ++a)
        for (int b = 0; b <= g; ++b)
            if (std::abs(a - b) <= 1)
                for (int axis = 0; axis < dim; ++axis) x.set_allowed(axis, a, b, true);
    return x;
}

/// Letters -M..-1,+1..+M; opposite signs may touch only as +1/-1.
inline NNSFT iceberg(int m, int dim) {
    std::vector<std::string> labels;
    std::vector<int> value;
    for (int v = -m; v <= -1; ++v) {
        labels.push_back(std::to_string(v));
        value.push_back(v);
    }
    for (int v = 1; v <= m; ++v) {
        labels.push_back("+" + std::to_string(v));
        value.push_back(v);
    }
    NNSFT x(Alphabet(std::move(labels)), dim, false);
    const int k = x.letters();
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (value[static_cast<std::size_t>(a)] * value[static_cast<std::size_t>(b)] >= -1)
                for (int axis = 0; axis < dim; ++axis) x.set_allowed(axis, a, b, true);
    return x;
}

/// Signed value of an iceberg letter index.
inline int iceberg_value(int m, int letter) {
    return letter < m ? letter - m : letter - m + 1;
}

}  // namespace sfts

}  // namespace sftlab
