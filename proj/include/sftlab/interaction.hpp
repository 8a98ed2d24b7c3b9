#pragma once
// Nearest-neighbour interactions: energies, exact partition functions by
// constrained enumeration, Gibbs conditional probabilities, and the built-in
// model registry.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sftlab/csp.hpp"
#include "sftlab/sft.hpp"

namespace sftlab {

inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

/// Weights on letters and on ordered letter pairs per axis. Vertex weights
/// are always finite; an infinite edge weight is a hard constraint.
class Interaction {
  public:
    Interaction() = default;
    Interaction(Alphabet alphabet, int dim) : alphabet_(std::move(alphabet)), dim_(dim) {
        if (dim_ < 1) throw std::invalid_argument("dimension must be >= 1");
        const std::size_t k = static_cast<std::size_t>(alphabet_.size());
        vertex_.assign(k, 0.0);
        edge_.assign(static_cast<std::size_t>(dim_), std::vector<double>(k * k, 0.0));
    }

    int dim() const { return dim_; }
    const Alphabet& alphabet() const { return alphabet_; }
    int letters() const { return alphabet_.size(); }

    void set_vertex(int a, double w) {
        check_letter(a);
        if (!std::isfinite(w)) throw std::invalid_argument("vertex weights must be finite");
        vertex_[static_cast<std::size_t>(a)] = w;
    }
    void set_edge(int axis, int a, int b, double w) {
        check_letter(a);
        check_letter(b);
        if (axis < 0 || axis >= dim_) throw std::out_of_range("axis out of range");
        if (std::isnan(w) || w == -kInfiniteEnergy)
            throw std::invalid_argument("edge weights must be finite or +inf");
        edge_[static_cast<std::size_t>(axis)][idx(a, b)] = w;
    }

    double vertex(int a) const { return vertex_[static_cast<std::size_t>(a)]; }
    double edge(int axis, int a, int b) const {
        return edge_[static_cast<std::size_t>(axis)][idx(a, b)];
    }

  private:
    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(alphabet_.size()) +
               static_cast<std::size_t>(b);
    }
    void check_letter(int a) const {
        if (a < 0 || a >= alphabet_.size()) throw std::out_of_range("letter out of range");
    }

    Alphabet alphabet_;
    int dim_ = 0;
    std::vector<double> vertex_;
    std::vector<std::vector<double>> edge_;
};

/// The n.n. SFT of finite-edge pairs.
inline NNSFT underlying_sft(const Interaction& phi) {
    NNSFT x(phi.alphabet(), phi.dim(), true);
    for (int axis = 0; axis < phi.dim(); ++axis)
        for (int a = 0; a < phi.letters(); ++a)
            for (int b = 0; b < phi.letters(); ++b)
                if (phi.edge(axis, a, b) == kInfiniteEnergy) x.set_allowed(axis, a, b, false);
    return x;
}

/// Sum of vertex weights over sites plus edge weights over lattice edges with
/// both endpoints in the pattern's shape; +inf iff some such edge is forbidden.
inline double energy(const Interaction& phi, const Pattern& w) {
    double u = 0.0;
    const Shape& s = w.shape();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Site& p = s.at(i);
        u += phi.vertex(w.at(p));
        for (int axis = 0; axis < phi.dim(); ++axis) {
            Site q = p;
            q[static_cast<std::size_t>(axis)] += 1;
            if (auto b = w.try_at(q)) {
                double e = phi.edge(axis, w.at(p), *b);
                if (e == kInfiniteEnergy) return kInfiniteEnergy;
                u += e;
            }
        }
    }
    return u;
}

/// A positive quantity kept in the log domain; `zero` marks an empty sum.
struct LogValue {
    double log_value = 0.0;
    bool zero = true;
    double value() const { return zero ? 0.0 : std::exp(log_value); }
};

namespace detail {

/// Streaming log-sum-exp accumulator.
struct LogSum {
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (s == 0.0 || log_term > m) {
            s = s * std::exp(m - log_term) + 1.0;
            m = log_term;
        } else {
            s += std::exp(log_term - m);
        }
    }
    LogValue result() const {
        if (s == 0.0) return {};
        return {m + std::log(s), false};
    }
};

inline constexpr std::size_t kEnumerationLimit = 24;

inline LogValue log_partition_sum(const Interaction& phi, const NNSFT& x, const Shape& region,
                                  const Pattern& fixed) {
    LogSum acc;
    if (region.empty()) {
        double u = energy(phi, fixed);
        if (u != kInfiniteEnergy) acc.add(-u);
        return acc.result();
    }
    RegionProblem pr(x, region, fixed);
    pr.for_each([&](const Pattern& w) {
        Pattern full = *w.merge(fixed);
        double u = energy(phi, full);
        if (u != kInfiniteEnergy) acc.add(-u);
        return true;
    });
    return acc.result();
}

}  // namespace detail

/// Z over all fills of `region` merged with the boundary (whose own vertex and
/// internal-edge weights are included). Zero signals a non-admissible boundary.
inline LogValue log_partition_function(const Interaction& phi, const Shape& region,
                                       const Pattern& boundary = Pattern()) {
    if (region.size() > detail::kEnumerationLimit)
        throw std::invalid_argument("region too large for exact enumeration");
    if (!region.intersect(boundary.shape()).empty())
        throw std::invalid_argument("boundary overlaps region");
    NNSFT x = underlying_sft(phi);
    return detail::log_partition_sum(phi, x, region, boundary);
}

inline double partition_function(const Interaction& phi, const Shape& region,
                                 const Pattern& boundary = Pattern()) {
    return log_partition_function(phi, region, boundary).value();
}

/// One conditional-probability query: the boundary pattern must sit exactly on
/// the 1-boundary of the region and the target must pin sites of the region.
struct SpecQuery {
    Shape region;
    Pattern boundary;
    Pattern target;
};

/// Lambda^delta_region(target): ratio of constrained to full partition sums,
/// marginalized over the unpinned sites.
inline double specification_prob(const Interaction& phi, const SpecQuery& q) {
    if (q.region.size() > detail::kEnumerationLimit)
        throw std::invalid_argument("region too large for exact enumeration");
    if (!(q.boundary.shape() == n_boundary(q.region, 1)))
        throw std::invalid_argument("boundary shape must equal the region's 1-boundary");
    for (const Site& p : q.target.shape())
        if (!q.region.contains(p))
            throw std::invalid_argument("target must sit inside the region");
    NNSFT x = underlying_sft(phi);
    LogValue z_full = detail::log_partition_sum(phi, x, q.region, q.boundary);
    if (z_full.zero) throw std::domain_error("boundary is not admissible: zero partition function");
    auto merged = q.boundary.merge(q.target);
    if (!merged) return 0.0;
    LogValue z_pin =
        detail::log_partition_sum(phi, x, q.region.minus(q.target.shape()), *merged);
    if (z_pin.zero) return 0.0;
    double r = std::exp(z_pin.log_value - z_full.log_value);
    return r > 1.0 ? 1.0 : r;
}

namespace models {

/// Letters {0,1}, a site in state 1 carries activity lambda, adjacent 1s forbidden.
inline Interaction hard_core(double lambda, int dim) {
    if (!(lambda > 0.0)) throw std::invalid_argument("activity must be positive");
    Interaction phi(Alphabet::numeric(2), dim);
    phi.set_vertex(1, -std::log(lambda));
    for (int axis = 0; axis < dim; ++axis) phi.set_edge(axis, 1, 1, kInfiniteEnergy);
    return phi;
}

inline double ising_spin(int letter) { return letter == 0 ? 1.0 : -1.0; }

/// Letters {+,-} with spins +1/-1, field E and coupling J.
inline Interaction ising(double field, double coupling, int dim) {
    Interaction phi(Alphabet({"+", "-"}), dim);
    for (int a = 0; a < 2; ++a) phi.set_vertex(a, -field * ising_spin(a));
    for (int axis = 0; axis < dim; ++axis)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                phi.set_edge(axis, a, b, -coupling * ising_spin(a) * ising_spin(b));
    return phi;
}

/// q states, energy -J per agreeing adjacent pair.
inline Interaction potts(int q, double coupling, int dim) {
    if (q < 2) throw std::invalid_argument("potts needs at least two states");
    Interaction phi(Alphabet::numeric(q), dim);
    for (int axis = 0; axis < dim; ++axis)
        for (int a = 0; a < q; ++a) phi.set_edge(axis, a, a, -coupling);
    return phi;
}

namespace detail {

inline Interaction uniform_on(const NNSFT& x) {
    Interaction phi(x.alphabet(), x.dim());
    for (int axis = 0; axis < x.dim(); ++axis)
        for (int a = 0; a < x.letters(); ++a)
            for (int b = 0; b < x.letters(); ++b)
                if (!x.allowed(axis, a, b)) phi.set_edge(axis, a, b, kInfiniteEnergy);
    return phi;
}

}  // namespace detail

/// Zero energies with hard constraints copied from x; pressure reduces to
/// topological entropy.
inline Interaction uniform(const NNSFT& x) { return detail::uniform_on(x); }

/// Uniform interaction on proper k-colourings.
inline Interaction checkerboard(int k, int dim) {
    if (k < 2) throw std::invalid_argument("checkerboard needs at least two colours");
    return detail::uniform_on(sfts::proper_colouring(k, dim));
}

/// Uniform interaction on the signed-height iceberg constraint.
inline Interaction iceberg(int m, int dim) {
    if (m < 2) throw std::invalid_argument("iceberg needs magnitude at least 2");
    return detail::uniform_on(sfts::iceberg(m, dim));
}

/// Heights 0..g with unit Lipschitz edges; height m carries weight lambda^m.
inline Interaction lipschitz(int g, double lambda, int dim) {
    if (g < 0) throw std::invalid_argument("height bound must be nonnegative");
    if (!(lambda > 0.0)) throw std::invalid_argument("activity must be positive");
    Interaction phi = detail::uniform_on(sfts::height_lipschitz(g, dim));
    for (int a = 0; a <= g; ++a) phi.set_vertex(a, -a * std::log(lambda));
    return phi;
}

}  // namespace models

}  // namespace sftlab
