#pragma once
// Spatial-mixing laboratory: empirical boundary-influence decay profiles by
// exact enumeration, the closed-form maximal configuration for the
// height-Lipschitz constraint, and the sufficient-rate threshold formulas.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sftlab/global.hpp"
#include "sftlab/interaction.hpp"

namespace sftlab {

/// One decay-measurement instance: conditional probabilities of `target` on
/// `region` are compared across boundary assignments that agree with `base`
/// off the `locus` and range over all admissible values on it.
struct ProfileGeometry {
    Shape region;
    Pattern base;    // fixed part of the boundary
    Shape locus;     // boundary sites where assignments may differ
    Pattern target;  // event inside the region
    Coord distance;  // recorded separation for this instance
};

struct DecayProfile {
    std::vector<Coord> distances;
    std::vector<double> max_discrepancy;
    double c = 0.0;         // fitted prefactor
    double alpha = 0.0;     // fitted decay rate
    double residual = 0.0;  // root-mean-square log-residual of the fit
};

namespace geometries {

/// d=1 interval [-n, n], both endpoints free, target at the centre.
inline ProfileGeometry interval_1d(int n, int target_letter) {
    Shape w = block(n, 1);
    ProfileGeometry g;
    g.region = w;
    g.locus = n_boundary(w, 1);
    g.base = Pattern();
    g.target = Pattern(Shape({origin(1)}), {target_letter});
    g.distance = n + 1;
    return g;
}

/// d=2 row [-n, n] x {0} with constant rows above and below; only the two
/// row ends are free.
inline ProfileGeometry row_2d(int n, int base_letter, int target_letter) {
    std::vector<Site> cells, side, ends;
    for (Coord i = -n; i <= n; ++i) {
        cells.push_back(Site{i, 0});
        side.push_back(Site{i, 1});
        side.push_back(Site{i, -1});
    }
    ends.push_back(Site{-(n + 1), 0});
    ends.push_back(Site{n + 1, 0});
    ProfileGeometry g;
    g.region = Shape(std::move(cells));
    Shape side_shape(std::move(side));
    g.base = Pattern(side_shape, std::vector<int>(side_shape.size(), base_letter));
    g.locus = Shape(std::move(ends));
    g.target = Pattern(Shape({origin(2)}), {target_letter});
    g.distance = n + 1;
    return g;
}

/// The alternating-stripe geometry on which 4-colouring conditionals flip
/// with the far row ends: row [-2n0+1, 2n0-1] x {0}, chequered letters 0/1 on
/// the adjacent rows, free ends at (+-2n0, 0), target letter 2 at the origin.
inline ProfileGeometry c4_stripe(int n0) {
    if (n0 < 1) throw std::invalid_argument("stripe half-length must be positive");
    const Coord m = 2 * static_cast<Coord>(n0);
    std::vector<Site> cells;
    std::vector<Site> side;
    std::vector<int> side_letters;
    for (Coord i = -(m - 1); i <= m - 1; ++i) {
        cells.push_back(Site{i, 0});
        side.push_back(Site{i, 1});
        side.push_back(Site{i, -1});
    }
    Shape side_shape(side);
    for (const Site& p : side_shape) {
        bool even = ((p[0] % 2) + 2) % 2 == 0;
        side_letters.push_back(p[1] == 1 ? (even ? 0 : 1) : (even ? 1 : 0));
    }
    ProfileGeometry g;
    g.region = Shape(std::move(cells));
    g.base = Pattern(side_shape, std::move(side_letters));
    g.locus = Shape({Site{-m, 0}, Site{m, 0}});
    g.target = Pattern(Shape({origin(2)}), {2});
    g.distance = m;
    return g;
}

}  // namespace geometries

namespace detail {

inline void fit_decay(DecayProfile& prof) {
    const double eps10 = 10.0 * std::numeric_limits<double>::epsilon();
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < prof.distances.size(); ++i)
        if (prof.max_discrepancy[i] > eps10) {
            xs.push_back(static_cast<double>(prof.distances[i]));
            ys.push_back(std::log(prof.max_discrepancy[i]));
        }
    if (xs.size() < 2) {
        prof.c = xs.empty() ? 0.0 : std::exp(ys[0]);
        prof.alpha = 0.0;
        prof.residual = 0.0;
        return;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double inter = (sy - slope * sx) / n;
    prof.alpha = -slope;
    prof.c = std::exp(inter);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (inter + slope * xs[i]);
        ss += r * r;
    }
    prof.residual = std::sqrt(ss / n);
}

inline DecayProfile profile_impl(const Interaction& phi, const Admissibility& adm,
                                 const std::function<ProfileGeometry(int)>& family,
                                 const std::vector<int>& ns, bool whole_boundary) {
    NNSFT x = underlying_sft(phi);
    DecayProfile prof;
    for (int n : ns) {
        ProfileGeometry g = family(n);
        Shape bd = n_boundary(g.region, 1);
        Shape locus = g.locus;
        Pattern base = g.base;
        Coord dist = g.distance;
        if (whole_boundary) {
            locus = bd;
            base = Pattern();
            dist = std::numeric_limits<Coord>::max();
            for (const Site& q : bd)
                for (const Site& t : g.target.shape()) dist = std::min(dist, l1_dist(q, t));
        }
        if (!(base.shape().union_with(locus) == bd) || !base.shape().intersect(locus).empty())
            throw std::invalid_argument("base and locus must partition the boundary");
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        RegionProblem assignments(x, locus, base);
        assignments.for_each([&](const Pattern& fill) {
            Pattern delta = *base.merge(fill);
            if (!adm.check(delta)) return true;
            double p = specification_prob(phi, {g.region, delta, g.target});
            lo = std::min(lo, p);
            hi = std::max(hi, p);
            return true;
        });
        if (!std::isfinite(lo)) throw std::domain_error("no admissible boundary assignment");
        prof.distances.push_back(dist);
        prof.max_discrepancy.push_back(hi - lo);
    }
    fit_decay(prof);
    return prof;
}

}  // namespace detail

/// Exact per-distance maximum of |mu^{d1}(target) - mu^{d2}(target)| over
/// globally admissible boundary pairs differing only on the locus, with a
/// least-squares exponential fit over the informative distances.
inline DecayProfile ssm_profile(const Interaction& phi, const Admissibility& adm,
                                const std::function<ProfileGeometry(int)>& family,
                                const std::vector<int>& ns) {
    return detail::profile_impl(phi, adm, family, ns, false);
}

/// Same measurement with the whole boundary free; distances are to the whole
/// boundary.
inline DecayProfile wsm_profile(const Interaction& phi, const Admissibility& adm,
                                const std::function<ProfileGeometry(int)>& family,
                                const std::vector<int>& ns) {
    return detail::profile_impl(phi, adm, family, ns, true);
}

struct RateCertificate {
    int g = 0;
    int d = 0;
    double lambda = 0.0;
    double beta = 0.0;
    double alpha = 0.0;  // -log beta
    double c = 0.0;
    bool guaranteed = false;  // beta < 1
    BigInt lambda_pub;        // published sufficient threshold, exact
};

/// Decay-rate certificate for the height-Lipschitz interaction with activity
/// lambda: beta = (2d-1)(g+1)^{|N_g(0)|} / sqrt(lambda), rate alpha = -log
/// beta with prefactor C = 4d / (beta^g (1 - beta)), guaranteed when beta <
/// 1. Also reports the simpler published threshold (2d-1)^2
/// (g+1)^{(2g+1)^{2d}} as an exact integer.
inline RateCertificate lipschitz_ssm_rate(int g, int d, double lambda) {
    if (g < 0) throw std::invalid_argument("height bound must be nonnegative");
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("activity must be positive");
    RateCertificate rc;
    rc.g = g;
    rc.d = d;
    rc.lambda = lambda;
    const double ng = static_cast<double>(rhomboid(g, d).size());
    const double twod1 = 2.0 * d - 1.0;
    rc.beta = twod1 * std::pow(g + 1.0, ng) / std::sqrt(lambda);
    rc.alpha = 0.5 * std::log(lambda) - std::log(twod1) - ng * std::log(g + 1.0);
    rc.guaranteed = rc.beta < 1.0;
    rc.c = rc.guaranteed ? 4.0 * d / (std::pow(rc.beta, g) * (1.0 - rc.beta))
                         : std::numeric_limits<double>::infinity();
    double exp_d = std::pow(2.0 * g + 1.0, 2 * d);
    if (exp_d > 1e7) throw std::invalid_argument("published threshold exponent too large");
    rc.lambda_pub = BigInt(2 * d - 1) * BigInt(2 * d - 1) *
                    boost::multiprecision::pow(BigInt(g + 1), static_cast<unsigned>(exp_d));
    return rc;
}

/// Exponential decay with rate above 4 log |A| forces the mixing property
/// this library certifies; stated for d = 2 only, strict inequality.
inline bool rate_implies_tssm(double alpha, int alphabet_size, int d) {
    if (d != 2) throw std::invalid_argument("threshold is stated for d = 2 only");
    if (alphabet_size < 1) throw std::invalid_argument("alphabet size must be positive");
    return alpha > 4.0 * std::log(static_cast<double>(alphabet_size));
}

/// Coordinate-wise maximal height-Lipschitz fill for a boundary with values
/// in 0..g: the clipped Lipschitz extension min(g, min_q delta(q) +
/// dist(p, q)). Throws when the boundary admits no fill at all.
inline Pattern max_config_xg(int g, const Shape& region, const Pattern& boundary) {
    if (g < 1) throw std::invalid_argument("height bound must be positive");
    if (region.empty()) throw std::invalid_argument("region must be nonempty");
    if (!(boundary.shape() == n_boundary(region, 1)))
        throw std::invalid_argument("boundary shape must equal the region's 1-boundary");
    const int d = region.dim();
    for (int a : boundary.letters())
        if (a < 0 || a > g) throw std::invalid_argument("boundary value outside 0..g");
    for (const Site& p : boundary.shape()) {
        for (int axis = 0; axis < d; ++axis) {
            Site q = p;
            q[static_cast<std::size_t>(axis)] += 1;
            if (auto b = boundary.try_at(q))
                if (std::abs(boundary.at(p) - *b) > 1)
                    throw std::invalid_argument("boundary is not 1-Lipschitz");
        }
    }
    std::vector<int> heights;
    heights.reserve(region.size());
    for (const Site& p : region) {
        Coord best = g;
        for (const Site& q : boundary.shape())
            best = std::min(best, static_cast<Coord>(boundary.at(q)) + l1_dist(p, q));
        heights.push_back(static_cast<int>(best));
    }
    Pattern theta(region, std::move(heights));
    NNSFT x = sfts::height_lipschitz(g, d);
    if (!is_locally_admissible(x, *theta.merge(boundary)))
        throw std::domain_error("boundary is not extendable");
    return theta;
}

}  // namespace sftlab
