#pragma once
// Global admissibility: periodic boundary anchors, the solver-backed
// extension check for strongly irreducible SFTs, the exact 1D path, and a
// memoizing oracle façade used by the mixing and pressure layers.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sftlab/csp.hpp"
#include "sftlab/one_dim.hpp"

namespace sftlab {

/// A point of X given by a cell on the fundamental domain of a full-rank
/// orthogonal period lattice.
struct PeriodicPoint {
    std::vector<Coord> periods;
    Pattern cell;

    int at(const Site& p) const {
        Site q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            Coord m = periods[i];
            q[i] = ((p[i] % m) + m) % m;
        }
        return cell.at(q);
    }

    Pattern restricted_to(const Shape& s) const {
        std::vector<int> letters;
        letters.reserve(s.size());
        for (const Site& p : s) letters.push_back(at(p));
        return Pattern(s, std::move(letters));
    }
};

inline Shape periodic_cell_shape(const std::vector<Coord>& periods) {
    std::vector<Site> sites;
    Site cur(periods.size(), 0);
    while (true) {
        sites.push_back(cur);
        std::size_t i = periods.size();
        while (i > 0 && cur[i - 1] == periods[i - 1] - 1) cur[--i] = 0;
        if (i == 0) break;
        ++cur[i - 1];
    }
    return Shape(std::move(sites));
}

inline bool is_valid_periodic_point(const NNSFT& x, const PeriodicPoint& z) {
    if (z.periods.size() != static_cast<std::size_t>(x.dim())) return false;
    for (Coord m : z.periods)
        if (m < 1) return false;
    Shape cell = periodic_cell_shape(z.periods);
    if (!(z.cell.shape() == cell)) return false;
    for (int a : z.cell.letters())
        if (a < 0 || a >= x.letters()) return false;
    for (const Site& p : cell) {
        for (int axis = 0; axis < x.dim(); ++axis) {
            Site q = p;
            q[static_cast<std::size_t>(axis)] += 1;
            if (!x.allowed(axis, z.at(p), z.at(q))) return false;
        }
    }
    return true;
}

namespace detail {

/// DFS with forward checking over the torus cell, row-major site order.
inline std::optional<Pattern> torus_fill(const NNSFT& x, const std::vector<Coord>& periods,
                                         std::uint64_t budget) {
    Shape cell = periodic_cell_shape(periods);
    const std::size_t n = cell.size();
    const int d = x.dim();
    // Neighbour table with wrapped edges, both directions.
    struct Edge {
        std::uint32_t to;
        std::uint16_t axis;
        std::uint8_t forward;
    };
    std::vector<std::vector<Edge>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        Site p = cell.at(i);
        for (int axis = 0; axis < d; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                Site q = p;
                Coord m = periods[static_cast<std::size_t>(axis)];
                q[static_cast<std::size_t>(axis)] = ((q[static_cast<std::size_t>(axis)] + dir) % m + m) % m;
                auto j = cell.index_of(q);
                adj[i].push_back(Edge{static_cast<std::uint32_t>(*j),
                                      static_cast<std::uint16_t>(axis),
                                      static_cast<std::uint8_t>(dir > 0)});
            }
        }
    }
    std::vector<std::uint64_t> dom(n, x.full_mask());
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> undo(n);
    std::vector<std::uint64_t> tried(n, 0);
    std::vector<int> letters(n, -1);
    std::size_t depth = 0;
    std::uint64_t nodes = 0;
    while (true) {
        if (depth == n) {
            std::vector<int> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = letters[i];
            return Pattern(cell, std::move(vals));
        }
        std::uint64_t avail = dom[depth] & ~tried[depth];
        if (!avail) {
            tried[depth] = 0;
            if (depth == 0) return std::nullopt;
            --depth;
            for (auto it = undo[depth].rbegin(); it != undo[depth].rend(); ++it)
                dom[it->first] = it->second;
            undo[depth].clear();
            continue;
        }
        int a = std::countr_zero(avail);
        tried[depth] |= 1ull << a;
        if (++nodes > budget) throw BudgetExceeded("periodic point search budget exhausted");
        letters[depth] = a;
        undo[depth].clear();
        bool ok = true;
        for (const Edge& e : adj[depth]) {
            if (e.to <= depth) continue;  // already assigned or self handled below
            std::uint64_t sup = e.forward ? x.next_mask(e.axis, a) : x.prev_mask(e.axis, a);
            std::uint64_t nd = dom[e.to] & sup;
            if (nd != dom[e.to]) {
                undo[depth].emplace_back(e.to, dom[e.to]);
                dom[e.to] = nd;
                if (!nd) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            // Wrapped edges can join `depth` to an earlier site or itself.
            for (const Edge& e : adj[depth]) {
                if (e.to > depth) continue;
                int b = letters[e.to];
                bool fine = e.forward ? x.allowed(e.axis, a, b) : x.allowed(e.axis, b, a);
                if (!fine) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            ++depth;
        } else {
            for (auto it = undo[depth].rbegin(); it != undo[depth].rend(); ++it)
                dom[it->first] = it->second;
            undo[depth].clear();
        }
    }
}

}  // namespace detail

/// Search for a periodic point with the given periods. Constant and
/// two-letter checkerboard cells are tried before the general torus solve.
inline std::optional<PeriodicPoint> find_periodic_point(const NNSFT& x, std::vector<Coord> periods,
                                                        std::uint64_t budget = 50'000'000) {
    if (periods.size() != static_cast<std::size_t>(x.dim()))
        throw std::invalid_argument("period count must equal dimension");
    double cells = 1;
    for (Coord m : periods) {
        if (m < 1) throw std::invalid_argument("periods must be positive");
        cells *= static_cast<double>(m);
    }
    if (cells > 4096) throw std::invalid_argument("fundamental domain too large");
    Shape cell = periodic_cell_shape(periods);

    auto attempt = [&](const std::vector<int>& letters) -> std::optional<PeriodicPoint> {
        PeriodicPoint z{periods, Pattern(cell, letters)};
        if (is_valid_periodic_point(x, z)) return z;
        return std::nullopt;
    };
    for (int a = 0; a < x.letters(); ++a)
        if (auto z = attempt(std::vector<int>(cell.size(), a))) return z;
    for (int a = 0; a < x.letters(); ++a) {
        for (int b = 0; b < x.letters(); ++b) {
            if (a == b) continue;
            std::vector<int> letters(cell.size());
            for (std::size_t i = 0; i < cell.size(); ++i) {
                Coord s = 0;
                for (Coord c : cell.at(i)) s += c;
                letters[i] = (s % 2 == 0) ? a : b;
            }
            if (auto z = attempt(letters)) return z;
        }
    }
    if (auto fill = detail::torus_fill(x, periods, budget))
        return PeriodicPoint{periods, *fill};
    return std::nullopt;
}

/// Decide whether u extends to a point of X, given a strong irreducibility
/// gap and a periodic point: anchor z on the ring around N_g(shape(u)) and
/// ask the solver to fill the gap collar.
inline bool is_globally_admissible(const NNSFT& x, const Pattern& u, int si_gap,
                                   const PeriodicPoint& z, const SolveOptions& opt = {}) {
    if (si_gap <= 0) throw std::invalid_argument("strong irreducibility gap must be positive");
    if (!is_valid_periodic_point(x, z)) throw std::invalid_argument("invalid periodic point");
    if (u.empty()) return true;
    Shape hull = n_neighbourhood(u.shape(), si_gap);
    Shape ring = n_boundary(hull, 1);
    Pattern fixed = *u.merge(z.restricted_to(ring));
    RegionProblem pr(x, hull.minus(u.shape()), fixed);
    return pr.find_one(opt).has_value();
}

/// Memoizing global-admissibility oracle. The solver route needs a strong
/// irreducibility certificate; SFTs where local equals global (single-site
/// fillable presentations) and 1D SFTs get exact cheap routes.
class Admissibility {
  public:
    enum class Mode { local_is_global, one_dim_exact, solver };

    static Admissibility with_local_shortcut(const NNSFT& x) {
        return Admissibility(x, Mode::local_is_global, 0, std::nullopt);
    }
    static Admissibility with_one_dim(const NNSFT& x) {
        detail::require_1d(x);
        return Admissibility(x, Mode::one_dim_exact, 0, std::nullopt);
    }
    static Admissibility with_solver(const NNSFT& x, int si_gap, PeriodicPoint z) {
        if (si_gap <= 0) throw std::invalid_argument("strong irreducibility gap must be positive");
        if (!is_valid_periodic_point(x, z)) throw std::invalid_argument("invalid periodic point");
        return Admissibility(x, Mode::solver, si_gap, std::move(z));
    }

    bool check(const Pattern& u) const {
        if (u.empty()) return true;
        if (!is_locally_admissible(*sft_, u)) return false;
        if (mode_ == Mode::local_is_global) return true;
        auto key = u.normalize();
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        bool ok = mode_ == Mode::one_dim_exact ? is_globally_admissible_1d(*sft_, key)
                                               : is_globally_admissible(*sft_, key, si_gap_, *z_, opt_);
        if (cache_.size() < kCacheCap) cache_.emplace(std::move(key), ok);
        return ok;
    }

    /// Merge two patterns and check the union; disagreeing overlaps fail.
    bool check_merge(const Pattern& a, const Pattern& b) const {
        auto m = a.merge(b);
        return m && check(*m);
    }

    const NNSFT& sft() const { return *sft_; }
    Mode mode() const { return mode_; }
    int si_gap() const { return si_gap_; }
    const PeriodicPoint* periodic() const { return z_ ? &*z_ : nullptr; }
    SolveOptions& options() { return opt_; }

  private:
    Admissibility(const NNSFT& x, Mode mode, int gap, std::optional<PeriodicPoint> z)
        : sft_(&x), mode_(mode), si_gap_(gap), z_(std::move(z)) {}

    static constexpr std::size_t kCacheCap = 1u << 21;
    const NNSFT* sft_;
    Mode mode_;
    int si_gap_;
    std::optional<PeriodicPoint> z_;
    SolveOptions opt_;
    mutable std::unordered_map<Pattern, bool, PatternHash> cache_;
};

}  // namespace sftlab
