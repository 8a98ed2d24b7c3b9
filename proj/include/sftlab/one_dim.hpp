#pragma once
// One-dimensional machinery: essential part, entropy via the transition
// matrix spectral radius, topological mixing / primitivity, higher-block
// recoding of word SFTs to nearest-neighbour form, and exact 1D global
// admissibility through walk reachability.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sftlab/sft.hpp"

namespace sftlab {

/// Boolean transition matrix of a 1D NNSFT together with its essential part.
struct Witness1D {
    std::vector<std::uint64_t> rows;   // rows[a] bit b: pair ab allowed
    std::uint64_t essential = 0;       // bitmask of letters on bi-infinite walks
};

namespace detail {

inline void require_1d(const NNSFT& x) {
    if (x.dim() != 1) throw std::invalid_argument("operation requires a 1D SFT");
}

inline std::vector<std::uint64_t> bool_mat_mul(const std::vector<std::uint64_t>& a,
                                               const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> c(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t row = a[i];
        while (row) {
            int j = std::countr_zero(row);
            row &= row - 1;
            c[i] |= b[static_cast<std::size_t>(j)];
        }
    }
    return c;
}

inline std::vector<std::uint64_t> bool_mat_pow(std::vector<std::uint64_t> a, std::uint64_t k) {
    std::vector<std::uint64_t> r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = 1ull << i;
    while (k) {
        if (k & 1) r = bool_mat_mul(r, a);
        a = bool_mat_mul(a, a);
        k >>= 1;
    }
    return r;
}

}  // namespace detail

inline Witness1D transition_witness(const NNSFT& x) {
    detail::require_1d(x);
    Witness1D w;
    const int n = x.letters();
    w.rows.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) w.rows[static_cast<std::size_t>(a)] = x.next_mask(0, a);
    // Trim letters with no successor or no predecessor until stable.
    std::uint64_t live = x.full_mask();
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            if (!(live >> a & 1u)) continue;
            bool out = (w.rows[static_cast<std::size_t>(a)] & live) != 0;
            bool in = false;
            for (int b = 0; b < n && !in; ++b)
                if ((live >> b & 1u) && (w.rows[static_cast<std::size_t>(b)] >> a & 1u)) in = true;
            if (!out || !in) {
                live &= ~(1ull << a);
                changed = true;
            }
        }
    }
    w.essential = live;
    return w;
}

inline std::vector<int> essential_letters_1d(const NNSFT& x) {
    Witness1D w = transition_witness(x);
    std::vector<int> out;
    for (int a = 0; a < x.letters(); ++a)
        if (w.essential >> a & 1u) out.push_back(a);
    return out;
}

inline bool is_empty_1d(const NNSFT& x) { return transition_witness(x).essential == 0; }

namespace detail {

/// Strongly connected components of the essential subgraph (Tarjan).
inline std::vector<std::vector<int>> essential_sccs(const Witness1D& w) {
    const int n = static_cast<int>(w.rows.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int v;
        std::uint64_t rest;
    };
    for (int root = 0; root < n; ++root) {
        if (!(w.essential >> root & 1u) || index[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, w.rows[static_cast<std::size_t>(root)] & w.essential});
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on[static_cast<std::size_t>(root)] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.rest) {
                int u = std::countr_zero(f.rest);
                f.rest &= f.rest - 1;
                if (index[static_cast<std::size_t>(u)] == -1) {
                    index[static_cast<std::size_t>(u)] = low[static_cast<std::size_t>(u)] = counter++;
                    stack.push_back(u);
                    on[static_cast<std::size_t>(u)] = true;
                    call.push_back({u, w.rows[static_cast<std::size_t>(u)] & w.essential});
                } else if (on[static_cast<std::size_t>(u)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(u)]);
                }
            } else {
                int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<std::size_t>(call.back().v)] =
                        std::min(low[static_cast<std::size_t>(call.back().v)], low[static_cast<std::size_t>(v)]);
                if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                    std::vector<int> comp;
                    int u;
                    do {
                        u = stack.back();
                        stack.pop_back();
                        on[static_cast<std::size_t>(u)] = false;
                        comp.push_back(u);
                    } while (u != v);
                    sccs.push_back(std::move(comp));
                }
            }
        }
    }
    return sccs;
}

/// Spectral radius of one irreducible block by power iteration on A + I with
/// two-sided ratio bounds; tight to ~1e-13 relative.
inline double scc_spectral_radius(const Witness1D& w, const std::vector<int>& comp) {
    const std::size_t m = comp.size();
    bool any_edge = false;
    std::vector<std::vector<std::size_t>> succ(m);
    std::vector<std::size_t> pos_of(w.rows.size(), 0);
    for (std::size_t i = 0; i < m; ++i) pos_of[static_cast<std::size_t>(comp[i])] = i;
    std::uint64_t in_comp = 0;
    for (int a : comp) in_comp |= 1ull << a;
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t r = w.rows[static_cast<std::size_t>(comp[i])] & in_comp;
        while (r) {
            int b = std::countr_zero(r);
            r &= r - 1;
            succ[i].push_back(pos_of[static_cast<std::size_t>(b)]);
            any_edge = true;
        }
    }
    if (!any_edge) return 0.0;
    std::vector<double> v(m, 1.0), nv(m);
    double lo = 0, hi = 0;
    for (int it = 0; it < 200000; ++it) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = v[i];  // the +I shift keeps iterates positive
            for (std::size_t j : succ[i]) s += v[j];
            nv[i] = s;
            double ratio = s / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        double scale = 1.0 / nv[0];
        for (std::size_t i = 0; i < m; ++i) v[i] = nv[i] * scale;
        if (hi - lo < 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi) - 1.0;
}

}  // namespace detail

/// log of the spectral radius of the essential transition matrix.
/// Returns -infinity for an empty essential part.
inline double entropy_1d(const NNSFT& x) {
    Witness1D w = transition_witness(x);
    if (w.essential == 0) return -std::numeric_limits<double>::infinity();
    double rho = 0.0;
    for (const auto& comp : detail::essential_sccs(w))
        rho = std::max(rho, detail::scc_spectral_radius(w, comp));
    if (rho <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(rho);
}

/// Least m with every entry of A_ess^m positive, or nullopt when the essential
/// matrix is not primitive (or empty). On essential matrices positivity is
/// upward closed in m, so the scan stops at the classical (n-1)^2 + 1 cap.
inline std::optional<int> primitivity_index_1d(const NNSFT& x) {
    Witness1D w = transition_witness(x);
    if (w.essential == 0) return std::nullopt;
    std::vector<int> letters;
    for (int a = 0; a < x.letters(); ++a)
        if (w.essential >> a & 1u) letters.push_back(a);
    const std::size_t m = letters.size();
    std::vector<std::uint64_t> a(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (w.rows[static_cast<std::size_t>(letters[i])] >> letters[j] & 1u) a[i] |= 1ull << j;
    const std::uint64_t full = (m == 64) ? ~0ull : ((1ull << m) - 1);
    std::vector<std::uint64_t> p = a;
    const int cap = static_cast<int>((m - 1) * (m - 1) + 1);
    for (int k = 1; k <= cap; ++k) {
        bool positive = true;
        for (std::size_t i = 0; i < m && positive; ++i) positive = (p[i] == full);
        if (positive) return k;
        p = detail::bool_mat_mul(p, a);
    }
    return std::nullopt;
}

inline bool is_topologically_mixing_1d(const NNSFT& x) {
    return primitivity_index_1d(x).has_value();
}

/// Exact global admissibility in 1D: all letters essential and every pair of
/// consecutive occupied sites joined by a walk of the right length.
inline bool is_globally_admissible_1d(const NNSFT& x, const Pattern& u) {
    detail::require_1d(x);
    if (u.empty()) return true;
    Witness1D w = transition_witness(x);
    std::vector<std::pair<Coord, int>> occ;
    for (std::size_t i = 0; i < u.shape().size(); ++i)
        occ.emplace_back(u.shape().at(i)[0], u.letters()[i]);
    std::sort(occ.begin(), occ.end());
    for (auto& [c, a] : occ)
        if (!(w.essential >> a & 1u)) return false;
    std::uint64_t ess = w.essential;
    std::vector<std::uint64_t> ess_rows = w.rows;
    for (auto& r : ess_rows) r &= ess;
    for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
        std::uint64_t k = static_cast<std::uint64_t>(occ[i + 1].first - occ[i].first);
        auto p = detail::bool_mat_pow(ess_rows, k);
        if (!(p[static_cast<std::size_t>(occ[i].second)] >> occ[i + 1].second & 1u)) return false;
    }
    return true;
}

/// Higher-block recode of the word SFT avoiding `forbidden_words` (letter
/// index strings over `alpha`) into nearest-neighbour form. Window letters
/// are labelled by concatenating the source labels.
inline NNSFT recode_1d_to_nn(const Alphabet& alpha,
                             const std::vector<std::vector<int>>& forbidden_words) {
    std::size_t m = 2;
    for (const auto& word : forbidden_words) {
        if (word.empty()) throw std::invalid_argument("empty forbidden word");
        for (int a : word)
            if (a < 0 || a >= alpha.size()) throw std::invalid_argument("word letter outside alphabet");
        m = std::max(m, word.size());
    }
    auto contains_word = [&](const std::vector<int>& s) {
        for (const auto& word : forbidden_words) {
            if (word.size() > s.size()) continue;
            for (std::size_t off = 0; off + word.size() <= s.size(); ++off) {
                bool hit = true;
                for (std::size_t i = 0; i < word.size() && hit; ++i) hit = s[off + i] == word[i];
                if (hit) return true;
            }
        }
        return false;
    };

    // Window letters: the clean (m-1)-strings.
    std::vector<std::vector<int>> windows;
    std::vector<int> cur(m - 1, 0);
    while (true) {
        if (!contains_word(cur)) windows.push_back(cur);
        std::size_t i = m - 1;
        while (i > 0 && cur[i - 1] == alpha.size() - 1) cur[--i] = 0;
        if (i == 0) break;
        ++cur[i - 1];
    }
    if (windows.size() > 64) throw std::invalid_argument("recoded alphabet exceeds 64 letters");

    std::vector<std::string> labels;
    for (const auto& win : windows) {
        std::string l;
        for (int a : win) l += alpha.label(a);
        labels.push_back(l);
    }
    NNSFT y(Alphabet(labels), 1, false);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        for (std::size_t j = 0; j < windows.size(); ++j) {
            bool overlap = true;
            for (std::size_t k = 0; k + 1 < m - 1 && overlap; ++k)
                overlap = windows[i][k + 1] == windows[j][k];
            if (!overlap) continue;
            std::vector<int> glued = windows[i];
            glued.push_back(windows[j].back());
            if (!contains_word(glued))
                y.set_allowed(0, static_cast<int>(i), static_cast<int>(j), true);
        }
    }
    return y;
}

}  // namespace sftlab
