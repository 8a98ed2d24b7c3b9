#pragma once
// Combinatorial mixing certificates: safe symbols, single-site fillability,
// N-fillability with its strong irreducibility gap, and the implication
// closure that assembles everything into a certificate set.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/csp.hpp"
#include "sftlab/one_dim.hpp"

namespace sftlab {

struct MixingCertificate {
    enum class Property {
        safe_symbol,
        ssf,
        n_fillable,
        strong_irreducible,
        tssm,
        top_mixing_1d,
    };
    enum class Provenance { exhaustive_check, implication, user_asserted };

    Property property;
    int parameter = 0;  // letter / N / gap, by property
    Provenance provenance = Provenance::exhaustive_check;
    std::optional<Property> implied_from;
};

inline const char* property_name(MixingCertificate::Property p) {
    switch (p) {
        case MixingCertificate::Property::safe_symbol: return "safe-symbol";
        case MixingCertificate::Property::ssf: return "ssf";
        case MixingCertificate::Property::n_fillable: return "n-fillable";
        case MixingCertificate::Property::strong_irreducible: return "strong-irreducible";
        case MixingCertificate::Property::tssm: return "tssm";
        case MixingCertificate::Property::top_mixing_1d: return "top-mixing-1d";
    }
    return "?";
}

/// Letters compatible with every boundary configuration of a single site.
inline std::vector<int> find_safe_symbols(const NNSFT& x) {
    std::vector<int> out;
    for (int a = 0; a < x.letters(); ++a) {
        bool safe = true;
        for (int axis = 0; axis < x.dim() && safe; ++axis)
            safe = x.next_mask(axis, a) == x.full_mask() && x.prev_mask(axis, a) == x.full_mask();
        if (safe) out.push_back(a);
    }
    return out;
}

/// Single-site fillability: every boundary configuration of {0} admits a
/// compatible centre letter. The boundary enumeration factors through
/// per-axis (predecessor, successor) candidate masks.
inline bool check_ssf(const NNSFT& x, std::uint64_t budget = 1u << 28) {
    const int k = x.letters();
    const int d = x.dim();
    if (std::pow(static_cast<double>(k), 2.0 * d) > static_cast<double>(budget))
        throw BudgetExceeded("single-site fillability boundary budget exceeded");
    // Per axis, the candidate mask for each (before, after) letter pair.
    std::vector<std::vector<std::uint64_t>> axis_mask(static_cast<std::size_t>(d));
    for (int axis = 0; axis < d; ++axis) {
        auto& m = axis_mask[static_cast<std::size_t>(axis)];
        m.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                m[static_cast<std::size_t>(b * k + c)] = x.next_mask(axis, b) & x.prev_mask(axis, c);
    }
    std::vector<std::size_t> eta(static_cast<std::size_t>(d), 0);
    const std::size_t per_axis = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    while (true) {
        std::uint64_t fill = x.full_mask();
        for (int axis = 0; axis < d && fill; ++axis)
            fill &= axis_mask[static_cast<std::size_t>(axis)][eta[static_cast<std::size_t>(axis)]];
        if (!fill) return false;
        std::size_t i = static_cast<std::size_t>(d);
        while (i > 0 && eta[i - 1] == per_axis - 1) eta[--i] = 0;
        if (i == 0) return true;
        ++eta[i - 1];
    }
}

/// N-fillability: every locally admissible boundary configuration of the
/// block [1,N]^d admits a locally admissible interior fill.
inline bool check_n_fillability(const NNSFT& x, int n_param, const SolveOptions& opt = {}) {
    if (n_param < 1) throw std::invalid_argument("fillability parameter must be >= 1");
    const int d = x.dim();
    std::vector<Site> block_sites;
    Site cur(static_cast<std::size_t>(d), 1);
    while (true) {
        block_sites.push_back(cur);
        std::size_t i = static_cast<std::size_t>(d);
        while (i > 0 && cur[i - 1] == n_param) cur[--i] = 1;
        if (i == 0) break;
        ++cur[i - 1];
    }
    Shape block(std::move(block_sites));
    Shape boundary = n_boundary(block, 1);
    if (std::pow(static_cast<double>(x.letters()), static_cast<double>(boundary.size())) >
        static_cast<double>(opt.node_budget))
        throw BudgetExceeded("fillability boundary budget exceeded");

    RegionProblem outer(x, boundary, Pattern());
    bool fillable = true;
    outer.for_each(
        [&](const Pattern& delta) {
            RegionProblem inner(x, block, delta);
            if (!inner.find_one(opt)) {
                fillable = false;
                return false;
            }
            return true;
        },
        opt);
    return fillable;
}

/// Smallest N <= n_max whose fillability holds, reported as the implied
/// strong irreducibility gap 2(N+1). Absence is not a refutation.
inline std::optional<MixingCertificate> derive_strong_irreducibility(const NNSFT& x, int n_max,
                                                                     const SolveOptions& opt = {}) {
    for (int n = 1; n <= n_max; ++n) {
        if (check_n_fillability(x, n, opt)) {
            MixingCertificate c;
            c.property = MixingCertificate::Property::strong_irreducible;
            c.parameter = 2 * (n + 1);
            c.provenance = MixingCertificate::Provenance::implication;
            c.implied_from = MixingCertificate::Property::n_fillable;
            return c;
        }
    }
    return std::nullopt;
}

/// Cheap certificates plus implication closure. TSSM in d >= 2 is claimed
/// only through single-site fillability or a user assertion.
inline std::vector<MixingCertificate> certificate_chain(
    const NNSFT& x, const std::vector<MixingCertificate>& user_asserted = {}, int fill_n_max = 2) {
    using P = MixingCertificate::Property;
    using R = MixingCertificate::Provenance;
    std::vector<MixingCertificate> out;
    auto add = [&](P p, int param, R prov, std::optional<P> from = std::nullopt) {
        for (const auto& c : out)
            if (c.property == p && c.parameter == param) return;
        MixingCertificate c;
        c.property = p;
        c.parameter = param;
        c.provenance = prov;
        c.implied_from = from;
        out.push_back(c);
    };

    for (const auto& c : user_asserted) {
        MixingCertificate copy = c;
        copy.provenance = R::user_asserted;
        out.push_back(copy);
    }
    for (int a : find_safe_symbols(x)) add(P::safe_symbol, a, R::exhaustive_check);
    bool ssf = check_ssf(x);
    if (ssf) add(P::ssf, 0, R::exhaustive_check);
    if (x.dim() == 1) {
        if (auto m0 = primitivity_index_1d(x)) {
            add(P::top_mixing_1d, 0, R::exhaustive_check);
            add(P::tssm, *m0, R::implication, P::top_mixing_1d);
        }
    }
    if (ssf) {
        add(P::tssm, 2, R::implication, P::ssf);
    } else if (x.dim() >= 2) {
        for (int n = 2; n <= fill_n_max; ++n) {
            bool ok = false;
            try {
                ok = check_n_fillability(x, n);
            } catch (const BudgetExceeded&) {
                break;
            }
            if (ok) {
                add(P::n_fillable, n, R::exhaustive_check);
                add(P::strong_irreducible, 2 * (n + 1), R::implication, P::n_fillable);
                break;
            }
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].property == P::tssm)
            add(P::strong_irreducible, out[i].parameter, R::implication, P::tssm);
    }
    return out;
}

/// Best available strong irreducibility gap from a certificate set.
inline std::optional<int> best_si_gap(const std::vector<MixingCertificate>& certs) {
    std::optional<int> best;
    for (const auto& c : certs) {
        if (c.property == MixingCertificate::Property::strong_irreducible ||
            c.property == MixingCertificate::Property::tssm) {
            if (!best || c.parameter < *best) best = c.parameter;
        }
    }
    return best;
}

}  // namespace sftlab
