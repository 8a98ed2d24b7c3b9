#pragma once
// Topological pressure and entropy bounds: locally-admissible counting upper
// bounds, and two-sided pressure brackets from conditional probabilities of a
// periodic point along its lexicographic past, scanned over all assignments
// of the free part of the boundary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sftlab/counting.hpp"
#include "sftlab/global.hpp"
#include "sftlab/transfer.hpp"

namespace sftlab {

/// log |locally admissible fills of B_n| / |B_n| for n = 1..n_max, each
/// rounded up. Every term is a rigorous upper bound for the entropy because
/// the limit is an infimum over n.
inline std::vector<double> friedland_upper_bounds(const NNSFT& x, int n_max,
                                                  std::uint64_t state_budget = 1u << 24) {
    if (n_max < 1) throw std::invalid_argument("need at least one term");
    std::vector<double> out;
    for (int n = 1; n <= n_max; ++n) {
        BigInt c = count_locally_admissible_block(x, n, state_budget);
        double cells = std::pow(2.0 * n + 1.0, x.dim());
        double term = bigint_log(c, +1) / cells;
        out.push_back(std::nextafter(term, std::numeric_limits<double>::infinity()));
    }
    return out;
}

/// The local interaction average at sigma_p(z): minus the vertex weight at p
/// and the forward edge weights out of p.
inline double a_phi_at(const Interaction& phi, const PeriodicPoint& z, const Site& p) {
    double a = -phi.vertex(z.at(p));
    for (int axis = 0; axis < phi.dim(); ++axis) {
        Site q = p;
        q[static_cast<std::size_t>(axis)] += 1;
        double e = phi.edge(axis, z.at(p), z.at(q));
        if (e == kInfiniteEnergy)
            throw std::invalid_argument("periodic point not admissible for the interaction");
        a -= e;
    }
    return a;
}

/// Certificates consumed by the bracket computation. The mixing gap justifies
/// taking extrema over admissible boundary assignments; with the shortcut
/// flag set (single-site fillability), local admissibility stands in for
/// global admissibility and the assignment filter is free.
struct PressureCertificates {
    int tssm_gap = 1;
    bool local_is_global = false;
};

struct ConditionalExtrema {
    double min_p = 0.0;
    double max_p = 0.0;
    Pattern argmin;  // assignment of the free boundary attaining the minimum
    Pattern argmax;
    std::size_t admissible = 0;
};

namespace detail {

inline ConditionalScanner make_past_scanner(const Interaction& phi, const PeriodicPoint& z,
                                            const Site& p, int n, TransferOptions opt) {
    const int d = phi.dim();
    HalfRhomboid h = half_rhomboid(n, d);
    std::vector<int> fixed_letters;
    fixed_letters.reserve(h.s_past.size());
    for (const Site& q : h.s_past) fixed_letters.push_back(z.at(q + p));
    Pattern fixed(h.s_past, std::move(fixed_letters));
    Pattern target(Shape({origin(d)}), {z.at(p)});
    if (opt.h_max < 2 * n) opt.h_max = 2 * n;
    return ConditionalScanner(phi, h.w, std::move(fixed), h.v_free, std::move(target), opt);
}

}  // namespace detail

/// Extrema of mu(x(0) | x(S_n) delta) over free boundary assignments delta,
/// where x = sigma_p(z) and S_n is the past part of the boundary of W_n. The
/// true conditional probability of x(0) given its whole past lies between
/// them.
inline ConditionalExtrema conditional_bounds_at(const Interaction& phi, const PeriodicPoint& z,
                                                const Site& p, int n,
                                                const PressureCertificates& certs,
                                                TransferOptions opt = {}) {
    if (n < 1) throw std::invalid_argument("truncation parameter must be positive");
    NNSFT x = underlying_sft(phi);
    if (!is_valid_periodic_point(x, z))
        throw std::invalid_argument("invalid periodic point for the interaction");
    ConditionalScanner sc = detail::make_past_scanner(phi, z, p, n, opt);
    Admissibility adm = certs.local_is_global
                            ? Admissibility::with_local_shortcut(x)
                            : Admissibility::with_solver(x, certs.tssm_gap, z);
    Pattern fixed;
    if (!certs.local_is_global) {
        HalfRhomboid h = half_rhomboid(n, phi.dim());
        std::vector<int> ls;
        for (const Site& q : h.s_past) ls.push_back(z.at(q + p));
        fixed = Pattern(h.s_past, std::move(ls));
    }
    ConditionalExtrema out;
    bool first = true;
    sc.scan([&](const std::vector<int>& letters, double q_p) {
        if (!certs.local_is_global) {
            Pattern delta = sc.delta_pattern(letters);
            if (!adm.check_merge(fixed, delta)) return;
        }
        ++out.admissible;
        if (first || q_p < out.min_p) {
            out.min_p = q_p;
            out.argmin = sc.delta_pattern(letters);
        }
        if (first || q_p > out.max_p) {
            out.max_p = q_p;
            out.argmax = sc.delta_pattern(letters);
        }
        first = false;
    });
    if (first)
        throw std::domain_error("no admissible boundary assignment: certificates look wrong");
    return out;
}

/// Recompute one scanned assignment through the identical code path; the
/// result of the extremal assignments reproduces bit-for-bit.
inline double conditional_at(const Interaction& phi, const PeriodicPoint& z, const Site& p,
                             int n, const Pattern& delta, TransferOptions opt = {}) {
    ConditionalScanner sc = detail::make_past_scanner(phi, z, p, n, opt);
    return sc.replay(delta);
}

struct SiteBound {
    Site p;
    double min_p = 0.0;
    double max_p = 0.0;
    double a_phi = 0.0;
    Pattern argmin;
    Pattern argmax;
};

struct BoundPair {
    int n = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<SiteBound> per_site_detail;
    double width() const { return upper - lower; }
};

struct PressureJob {
    Interaction phi;
    PeriodicPoint z;
    PressureCertificates certificates;
    std::vector<int> n_schedule = {2, 3, 4, 5, 6, 7, 8};
    double epsilon = 0.01;
    double prob_floor = 1e-300;  // clamp for -log of conditionals, with a loud diagnostic
    double wall_seconds = 600.0;
    TransferOptions transfer;
};

namespace detail {

inline double floor_prob(double v, double floor_value) {
    if (v >= floor_value) return v;
    std::fprintf(stderr,
                 "pressure: conditional probability %.6e clamped to %.6e; "
                 "the bracket is no longer rigorous\n",
                 v, floor_value);
    return floor_value;
}

}  // namespace detail

/// Two-sided bracket for P(phi) at truncation n: averages -log of the
/// conditional extrema plus the interaction term over one period cell of z,
/// nudged outward.
inline BoundPair pressure_bounds(const PressureJob& job, int n) {
    const Shape& cell = job.z.cell.shape();
    BoundPair bp;
    bp.n = n;
    double lo = 0.0, hi = 0.0;
    for (const Site& p : cell) {
        ConditionalExtrema e =
            conditional_bounds_at(job.phi, job.z, p, n, job.certificates, job.transfer);
        double a = a_phi_at(job.phi, job.z, p);
        lo += -std::log(detail::floor_prob(e.max_p, job.prob_floor)) + a;
        hi += -std::log(detail::floor_prob(e.min_p, job.prob_floor)) + a;
        bp.per_site_detail.push_back(
            {p, e.min_p, e.max_p, a, std::move(e.argmin), std::move(e.argmax)});
    }
    const double cells = static_cast<double>(cell.size());
    lo /= cells;
    hi /= cells;
    bp.lower = lo - 1e-12 * (std::abs(lo) + 1.0);
    bp.upper = hi + 1e-12 * (std::abs(hi) + 1.0);
    return bp;
}

/// Single-site path for an all-zeros fixed point with a safe symbol: the
/// orbit average degenerates to one conditional at the origin.
inline BoundPair single_site_pressure_bounds(const Interaction& phi, int n,
                                             const PressureCertificates& certs,
                                             TransferOptions opt = {}) {
    const int d = phi.dim();
    PressureJob job;
    job.phi = phi;
    job.z = PeriodicPoint{std::vector<Coord>(static_cast<std::size_t>(d), 1),
                          Pattern(Shape({origin(d)}), {0})};
    job.certificates = certs;
    job.transfer = opt;
    return pressure_bounds(job, n);
}

struct PressureEstimate {
    double value = 0.0;
    double width = std::numeric_limits<double>::infinity();
    int n_used = 0;
    bool converged = false;
    std::vector<BoundPair> trace;
};

/// Runs the truncation schedule until the bracket width reaches epsilon or
/// the wall-clock budget runs out; the best bracket so far is always
/// attached.
inline PressureEstimate pressure_estimate(const PressureJob& job) {
    PressureEstimate est;
    auto start = std::chrono::steady_clock::now();
    for (int n : job.n_schedule) {
        BoundPair bp = pressure_bounds(job, n);
        if (bp.width() < est.width) {
            est.value = 0.5 * (bp.lower + bp.upper);
            est.width = bp.width();
            est.n_used = n;
        }
        est.trace.push_back(std::move(bp));
        if (est.width <= job.epsilon) {
            est.converged = true;
            break;
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > job.wall_seconds) break;
    }
    return est;
}

/// D(T): minimum over nonempty W inside T, admissible boundary assignments,
/// and admissible fills, of the conditional fill probability.
inline double dmu_min(const Interaction& phi, const Shape& t, std::size_t limit = 12) {
    if (t.empty()) throw std::invalid_argument("conditioning shape must be nonempty");
    if (t.size() > limit) throw std::invalid_argument("subset enumeration limit exceeded");
    NNSFT x = underlying_sft(phi);
    double best = std::numeric_limits<double>::infinity();
    const std::size_t m = t.size();
    for (std::uint64_t mask = 1; mask < (1ull << m); ++mask) {
        std::vector<Site> sub;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1ull) sub.push_back(t.at(i));
        Shape w(std::move(sub));
        Shape bd = n_boundary(w, 1);
        RegionProblem deltas(x, bd, Pattern());
        deltas.for_each([&](const Pattern& delta) {
            LogValue zfull = detail::log_partition_sum(phi, x, w, delta);
            if (zfull.zero) return true;
            RegionProblem fills(x, w, delta);
            fills.for_each([&](const Pattern& fill) {
                double u = energy(phi, *fill.merge(delta));
                if (u == kInfiniteEnergy) return true;
                double lam = std::exp(-u - zfull.log_value);
                if (lam < best) best = lam;
                return true;
            });
            return true;
        });
    }
    if (!std::isfinite(best))
        throw std::domain_error("no admissible boundary assignment on any subset");
    return best;
}

/// Uniform lower bound for the single-site conditional probabilities given
/// finite past-like conditioning sets, assembled from D on a gap-sized
/// neighbourhood of the origin.
inline double cmu_lower_bound(const Interaction& phi, int g) {
    if (g < 1) throw std::invalid_argument("gap must be positive");
    const int d = phi.dim();
    Shape t = d == 2 ? rhomboid(g, 2) : block(g, d);
    double exponent = d == 2 ? 4.0 * g
                             : 2.0 * d * std::pow(2.0 * g + 1.0, d - 1);
    double dm = dmu_min(phi, t, t.size());
    return dm * std::pow(static_cast<double>(phi.letters()), -exponent);
}

}  // namespace sftlab
