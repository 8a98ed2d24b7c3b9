#pragma once
// Z^d lattice geometry: sites, finite shapes, the l1 metric, neighbourhoods,
// blocks, rhomboids and the lexicographic past.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sftlab {

using Coord = std::int64_t;
using Site = std::vector<Coord>;

// Coordinates stay desk-scale; overflow is rejected, never wrapped.
inline constexpr Coord kCoordLimit = Coord{1} << 30;

inline void check_site(const Site& p) {
    if (p.empty()) throw std::invalid_argument("site has dimension 0");
    for (Coord c : p)
        if (c < -kCoordLimit || c > kCoordLimit)
            throw std::invalid_argument("site coordinate exceeds +/-2^30");
}

inline Site operator+(const Site& a, const Site& b) {
    if (a.size() != b.size()) throw std::invalid_argument("site dimension mismatch");
    Site r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    check_site(r);
    return r;
}

inline Site operator-(const Site& a, const Site& b) {
    if (a.size() != b.size()) throw std::invalid_argument("site dimension mismatch");
    Site r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    check_site(r);
    return r;
}

inline Site origin(int d) { return Site(static_cast<std::size_t>(d), 0); }

inline Site unit(int d, int axis, Coord c = 1) {
    Site r = origin(d);
    r[static_cast<std::size_t>(axis)] = c;
    return r;
}

inline Coord l1_norm(const Site& p) {
    Coord s = 0;
    for (Coord c : p) s += std::llabs(c);
    return s;
}

inline Coord l1_dist(const Site& a, const Site& b) {
    if (a.size() != b.size()) throw std::invalid_argument("site dimension mismatch");
    Coord s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::llabs(a[i] - b[i]);
    return s;
}

// Strict lexicographic order; the "past" of the origin is every p with p < 0.
inline bool lex_less(const Site& a, const Site& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool in_lex_past(const Site& p) {
    for (Coord c : p) {
        if (c < 0) return true;
        if (c > 0) return false;
    }
    return false;
}

/// A finite set of sites kept in canonical (lexicographic) sorted order, so
/// equality and hashing are structural.
class Shape {
  public:
    Shape() = default;
    explicit Shape(std::vector<Site> sites) : sites_(std::move(sites)) {
        for (const Site& p : sites_) {
            check_site(p);
            if (p.size() != sites_.front().size())
                throw std::invalid_argument("mixed dimensions in shape");
        }
        std::sort(sites_.begin(), sites_.end(), lex_less);
        sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    }

    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    int dim() const { return sites_.empty() ? 0 : static_cast<int>(sites_.front().size()); }

    const Site& at(std::size_t i) const { return sites_[i]; }
    const std::vector<Site>& sites() const { return sites_; }
    auto begin() const { return sites_.begin(); }
    auto end() const { return sites_.end(); }

    bool contains(const Site& p) const {
        return std::binary_search(sites_.begin(), sites_.end(), p, lex_less);
    }

    std::optional<std::size_t> index_of(const Site& p) const {
        auto it = std::lower_bound(sites_.begin(), sites_.end(), p, lex_less);
        if (it == sites_.end() || *it != p) return std::nullopt;
        return static_cast<std::size_t>(it - sites_.begin());
    }

    Shape union_with(const Shape& o) const {
        std::vector<Site> v = sites_;
        v.insert(v.end(), o.sites_.begin(), o.sites_.end());
        return Shape(std::move(v));
    }

    Shape minus(const Shape& o) const {
        std::vector<Site> v;
        for (const Site& p : sites_)
            if (!o.contains(p)) v.push_back(p);
        return Shape(std::move(v));
    }

    Shape intersect(const Shape& o) const {
        std::vector<Site> v;
        for (const Site& p : sites_)
            if (o.contains(p)) v.push_back(p);
        return Shape(std::move(v));
    }

    Shape translate(const Site& t) const {
        std::vector<Site> v;
        v.reserve(sites_.size());
        for (const Site& p : sites_) v.push_back(p + t);
        return Shape(std::move(v));
    }

    // Coordinate-wise minimum over the sites; only meaningful when nonempty.
    Site min_corner() const {
        if (sites_.empty()) throw std::logic_error("min_corner of empty shape");
        Site m = sites_.front();
        for (const Site& p : sites_)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], p[i]);
        return m;
    }

    Coord diameter() const {
        Coord d = 0;
        for (std::size_t i = 0; i < sites_.size(); ++i)
            for (std::size_t j = i + 1; j < sites_.size(); ++j)
                d = std::max(d, l1_dist(sites_[i], sites_[j]));
        return d;
    }

    bool operator==(const Shape& o) const { return sites_ == o.sites_; }
    bool operator!=(const Shape& o) const { return sites_ != o.sites_; }

  private:
    std::vector<Site> sites_;
};

/// l1 distance between site sets; disengaged optional encodes the
/// dist(S, empty) = infinity convention.
inline std::optional<Coord> dist(const Shape& a, const Shape& b) {
    if (!a.empty() && !b.empty() && a.dim() != b.dim())
        throw std::invalid_argument("dist: dimension mismatch");
    if (a.empty() || b.empty()) return std::nullopt;
    Coord best = l1_dist(a.at(0), b.at(0));
    for (const Site& p : a)
        for (const Site& q : b) best = std::min(best, l1_dist(p, q));
    return best;
}

inline Shape rhomboid(Coord n, int d);

/// N_n(S): all sites within l1 distance n of S.
inline Shape n_neighbourhood(const Shape& s, Coord n) {
    if (n < 0) throw std::invalid_argument("negative radius");
    if (s.empty()) return s;
    Shape ball = rhomboid(n, s.dim());
    std::vector<Site> v;
    v.reserve(s.size() * ball.size());
    for (const Site& p : s)
        for (const Site& r : ball) v.push_back(p + r);
    return Shape(std::move(v));
}

/// The n-boundary N_n(S) \ S.
inline Shape n_boundary(const Shape& s, Coord n) {
    return n_neighbourhood(s, n).minus(s);
}

inline Shape block(Coord n, int d) {
    if (n < 0 || d < 1) throw std::invalid_argument("block: bad parameters");
    std::vector<Site> v;
    Site p(static_cast<std::size_t>(d), -n);
    while (true) {
        v.push_back(p);
        int i = d - 1;
        while (i >= 0 && p[static_cast<std::size_t>(i)] == n) {
            p[static_cast<std::size_t>(i)] = -n;
            --i;
        }
        if (i < 0) break;
        ++p[static_cast<std::size_t>(i)];
    }
    return Shape(std::move(v));
}

inline Shape rhomboid(Coord n, int d) {
    if (n < 0 || d < 1) throw std::invalid_argument("rhomboid: bad parameters");
    std::vector<Site> v;
    for (const Site& p : block(n, d))
        if (l1_norm(p) <= n) v.push_back(p);
    return Shape(std::move(v));
}

/// P_n: the part of the n-block strictly before the origin lexicographically.
inline Shape lex_past(Coord n, int d) {
    std::vector<Site> v;
    for (const Site& p : block(n, d))
        if (in_lex_past(p)) v.push_back(p);
    return Shape(std::move(v));
}

struct HalfRhomboid {
    Shape w;       // W_n = R_n minus the lexicographic past
    Shape s_past;  // boundary sites inside the past
    Shape v_free;  // boundary sites outside the past
};

/// W_n together with the split of its boundary into past and non-past parts.
inline HalfRhomboid half_rhomboid(Coord n, int d) {
    if (d != 1 && d != 2) throw std::invalid_argument("half_rhomboid: d must be 1 or 2");
    if (n < 1) throw std::invalid_argument("half_rhomboid: n must be >= 1");
    std::vector<Site> keep;
    for (const Site& p : rhomboid(n, d))
        if (!in_lex_past(p)) keep.push_back(p);
    HalfRhomboid h;
    h.w = Shape(std::move(keep));
    Shape bd = n_boundary(h.w, 1);
    std::vector<Site> past, rest;
    for (const Site& p : bd) (in_lex_past(p) ? past : rest).push_back(p);
    h.s_past = Shape(std::move(past));
    h.v_free = Shape(std::move(rest));
    return h;
}

}  // namespace sftlab
