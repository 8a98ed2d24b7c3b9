// TSSM gap checking (1d exact, 2d rhomboid criterion), guided violation
// search, first offenders against a brute-force reference, and pivot paths.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <random>

#include "sftlab/one_dim.hpp"
#include "sftlab/tssm.hpp"

using namespace sftlab;

namespace {

PeriodicPoint all_const(int d, int letter) {
    return PeriodicPoint{std::vector<Coord>(static_cast<std::size_t>(d), 1),
                         Pattern(Shape({origin(d)}), {letter})};
}

// A violation witness is genuine when [us] and [sv] are nonempty and [usv]
// is empty under an exact admissibility oracle.
void require_genuine(const Admissibility& adm, const TssmWitness& wit) {
    REQUIRE(adm.check_merge(wit.u, wit.s));
    REQUIRE(adm.check_merge(wit.s, wit.v));
    auto us = wit.u.merge(wit.s);
    REQUIRE(us.has_value());
    REQUIRE_FALSE(adm.check_merge(*us, wit.v));
}

// Direct first-offender search: anchored shapes in the box, every lettering,
// offender iff inadmissible with all single-site deletions admissible.
std::vector<Pattern> brute_offenders(const NNSFT& x, int bound, const Admissibility& adm) {
    const int d = x.dim();
    std::vector<Site> sites;
    for (const Site& p : block(bound, d)) {
        bool inside = true;
        for (Coord c : p) inside = inside && c >= 0;
        if (inside) sites.push_back(p);
    }
    std::vector<Pattern> out;
    const std::size_t m = sites.size();
    for (std::uint64_t mask = 1; mask < (1ull << m); ++mask) {
        std::vector<Site> chosen;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1ull) chosen.push_back(sites[i]);
        Shape shape(chosen);
        if (!(shape.min_corner() == origin(d))) continue;
        if (shape.diameter() > bound) continue;
        std::vector<int> letters(shape.size(), 0);
        while (true) {
            Pattern w(shape, letters);
            if (!adm.check(w)) {
                bool minimal = true;
                for (const Site& p : shape)
                    if (!adm.check(w.erase(p))) {
                        minimal = false;
                        break;
                    }
                if (minimal) out.push_back(w);
            }
            std::size_t i = shape.size();
            while (i > 0 && letters[i - 1] == x.letters() - 1) letters[--i] = 0;
            if (i == 0) break;
            ++letters[i - 1];
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("1d tssm of the golden mean", "[tssm]") {
    NNSFT x = sfts::hard_core(1);
    PeriodicPoint z = all_const(1, 0);
    Admissibility adm = Admissibility::with_one_dim(x);

    TSSMVerdict bad = check_tssm(x, 1, 1, z);
    REQUIRE(bad.kind == TSSMVerdict::Kind::violation);
    REQUIRE(bad.witness.has_value());
    require_genuine(adm, *bad.witness);

    TSSMVerdict ok2 = check_tssm(x, 2, 1, z);
    REQUIRE(ok2.kind == TSSMVerdict::Kind::certified);
    REQUIRE(ok2.subsets_total == 16u);
    REQUIRE(ok2.subsets_processed == 16u);
    REQUIRE(check_tssm(x, 3, 1, z).kind == TSSMVerdict::Kind::certified);
}

TEST_CASE("1d tssm gap equals the primitivity index", "[tssm]") {
    PeriodicPoint dummy = all_const(1, 0);
    NNSFT full = NNSFT::full_shift(Alphabet::numeric(2), 1);
    REQUIRE(check_tssm(full, 1, 1, dummy).kind == TSSMVerdict::Kind::certified);

    // Wielandt graph: primitive with index 10, so gap 9 still fails.
    NNSFT w4(Alphabet::numeric(4), 1, false);
    w4.set_allowed(0, 0, 1, true);
    w4.set_allowed(0, 1, 2, true);
    w4.set_allowed(0, 2, 3, true);
    w4.set_allowed(0, 3, 0, true);
    w4.set_allowed(0, 3, 1, true);
    REQUIRE(primitivity_index_1d(w4) == 10);
    TSSMVerdict v = check_tssm(w4, 9, 1, dummy);
    REQUIRE(v.kind == TSSMVerdict::Kind::violation);
    require_genuine(Admissibility::with_one_dim(w4), *v.witness);

    // Period-2 cycle: not mixing, refuted at any tested gap.
    NNSFT cyc(Alphabet::numeric(2), 1, false);
    cyc.set_allowed(0, 0, 1, true);
    cyc.set_allowed(0, 1, 0, true);
    for (int g : {1, 2, 3}) {
        TSSMVerdict c = check_tssm(cyc, g, 1, dummy);
        REQUIRE(c.kind == TSSMVerdict::Kind::violation);
        require_genuine(Admissibility::with_one_dim(cyc), *c.witness);
    }
}

TEST_CASE("hard core fails tssm below its gap", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    TSSMVerdict v = check_tssm(x, 1, 2, all_const(2, 0));
    REQUIRE(v.kind == TSSMVerdict::Kind::violation);
    require_genuine(Admissibility::with_local_shortcut(x), *v.witness);
    // The minimal witness needs no shared pattern at all.
    REQUIRE(v.witness->s.empty());
}

TEST_CASE("iceberg refutation at gap 2", "[tssm]") {
    NNSFT x = sfts::iceberg(2, 2);
    auto z = find_periodic_point(x, {1, 1});
    REQUIRE(z.has_value());
    // The auxiliary strong irreducibility gap (3) may exceed the tested gap.
    TSSMVerdict v = check_tssm(x, 2, 3, *z);
    REQUIRE(v.kind == TSSMVerdict::Kind::violation);
    Admissibility adm = Admissibility::with_solver(x, 3, *z);
    require_genuine(adm, *v.witness);
    REQUIRE(l1_dist(v.witness->u.shape().at(0), v.witness->v.shape().at(0)) >= 2);
}

TEST_CASE("height system refutation at gap 2", "[tssm]") {
    NNSFT x = sfts::height_lipschitz(3, 2);
    auto z = find_periodic_point(x, {1, 1});
    REQUIRE(z.has_value());
    TSSMVerdict v = check_tssm(x, 2, 4, *z);
    REQUIRE(v.kind == TSSMVerdict::Kind::violation);
    require_genuine(Admissibility::with_solver(x, 4, *z), *v.witness);
}

TEST_CASE("exhaustion reports partial coverage", "[tssm]") {
    NNSFT x = sfts::proper_colouring(5, 2);
    auto z = find_periodic_point(x, {2, 2});
    REQUIRE(z.has_value());
    TssmBudget tight;
    tight.wall_seconds = 0.2;
    TSSMVerdict v = check_tssm(x, 2, 2, *z, tight);
    REQUIRE(v.kind == TSSMVerdict::Kind::exhausted);
    REQUIRE(v.subsets_processed < v.subsets_total);
}

TEST_CASE("tssm argument guards", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    PeriodicPoint z = all_const(2, 0);
    REQUIRE_THROWS_AS(check_tssm(x, 0, 2, z), std::invalid_argument);
    REQUIRE_THROWS_AS(check_tssm(x, 2, 0, z), std::invalid_argument);
}

TEST_CASE("stripe search finds the 4-colouring witness", "[tssm]") {
    NNSFT x = sfts::proper_colouring(4, 2);
    auto z = find_periodic_point(x, {2, 2});
    REQUIRE(z.has_value());
    auto wit = search_tssm_violation(x, 6, 6, *z, {TssmStrategy::stripes});
    REQUIRE(wit.has_value());
    Admissibility adm = Admissibility::with_solver(x, 6, *z);
    require_genuine(adm, *wit);
    REQUIRE(wit->u.size() == 1u);
    REQUIRE(wit->v.size() == 1u);
    REQUIRE(wit->s.size() >= 10u);
}

TEST_CASE("singleton search finds the iceberg pair", "[tssm]") {
    NNSFT x = sfts::iceberg(2, 2);
    auto z = find_periodic_point(x, {1, 1});
    auto wit = search_tssm_violation(x, 2, 3, *z, {TssmStrategy::singletons});
    REQUIRE(wit.has_value());
    REQUIRE(wit->s.empty());
    require_genuine(Admissibility::with_solver(x, 3, *z), *wit);
}

TEST_CASE("search stays silent where tssm holds", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    PeriodicPoint z = all_const(2, 0);
    for (int g : {2, 3}) {
        auto wit = search_tssm_violation(
            x, g, 2, z,
            {TssmStrategy::singletons, TssmStrategy::stripes, TssmStrategy::rows,
             TssmStrategy::combs},
            2);
        REQUIRE_FALSE(wit.has_value());
    }
    REQUIRE_THROWS_AS(search_tssm_violation(x, 0, 2, z, {TssmStrategy::singletons}),
                      std::invalid_argument);
}

TEST_CASE("hard-core first offenders are the adjacent pairs", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    auto offenders = enumerate_first_offenders(x, 2, 2, all_const(2, 0));
    std::sort(offenders.begin(), offenders.end());
    REQUIRE(offenders.size() == 2u);
    REQUIRE(offenders[0] == Pattern(Shape({Site{0, 0}, Site{0, 1}}), {1, 1}));
    REQUIRE(offenders[1] == Pattern(Shape({Site{0, 0}, Site{1, 0}}), {1, 1}));
    REQUIRE_THROWS_AS(enumerate_first_offenders(x, 0, 2, all_const(2, 0)),
                      std::invalid_argument);
}

TEST_CASE("1d iceberg offenders match brute force", "[tssm]") {
    NNSFT x = sfts::iceberg(2, 1);
    auto z = find_periodic_point(x, {1});
    REQUIRE(z.has_value());
    auto got = enumerate_first_offenders(x, 3, 3, *z);
    std::sort(got.begin(), got.end());
    Admissibility adm = Admissibility::with_one_dim(x);
    auto want = brute_offenders(x, 3, adm);
    REQUIRE(got == want);
    // Adjacent sign clashes plus the two distance-2 extremes.
    REQUIRE(got.size() == 8u);
    for (const Pattern& o : got) {
        REQUIRE_FALSE(adm.check(o));
        for (const Site& p : o.shape()) REQUIRE(adm.check(o.erase(p)));
        REQUIRE(o.shape().min_corner() == origin(1));
        REQUIRE(o.shape().diameter() <= 3);
    }
}

TEST_CASE("2d iceberg offenders match brute force", "[tssm]") {
    NNSFT x = sfts::iceberg(2, 2);
    auto z = find_periodic_point(x, {1, 1});
    auto got = enumerate_first_offenders(x, 1, 3, *z);
    std::sort(got.begin(), got.end());
    Admissibility adm = Admissibility::with_solver(x, 3, *z);
    auto want = brute_offenders(x, 1, adm);
    REQUIRE(got == want);
    REQUIRE(got.size() == 12u);  // six sign clashes per axis
}

TEST_CASE("pivot path for a short row", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    PeriodicPoint z = all_const(2, 0);
    Shape w3({Site{0, 0}, Site{1, 0}, Site{2, 0}});
    Pattern a(w3, {0, 0, 0});
    Pattern b(w3, {1, 0, 1});
    auto seq = pivot_sequence(x, w3, a, b, 2, 2, z);
    REQUIRE(seq.size() == 3u);  // two disagreement sites
    REQUIRE(seq.front() == a);
    REQUIRE(seq.back() == b);
    Admissibility adm = Admissibility::with_local_shortcut(x);
    for (const Pattern& p : seq) {
        REQUIRE(p.shape() == w3);
        REQUIRE(adm.check(p));
    }
    REQUIRE(pivot_sequence(x, w3, a, a, 2, 2, z).size() == 1u);
}

TEST_CASE("random pivot pairs satisfy the step containment", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    PeriodicPoint z = all_const(2, 0);
    Admissibility adm = Admissibility::with_local_shortcut(x);
    Shape w = block(1, 2);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto sample = [&] {
        while (true) {
            std::vector<int> letters(w.size());
            for (auto& l : letters) l = coin(rng) < 0.25 ? 1 : 0;
            Pattern p(w, letters);
            if (adm.check(p)) return p;
        }
    };
    const int g = 2;
    for (int trial = 0; trial < 20; ++trial) {
        Pattern a = sample(), b = sample();
        auto seq = pivot_sequence(x, w, a, b, g, 2, z);
        Shape sigma = a.disagreement(b);
        REQUIRE(seq.size() == sigma.size() + 1);
        REQUIRE(seq.front() == a);
        REQUIRE(seq.back() == b);
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            REQUIRE(adm.check(seq[i]));
            Shape step = seq[i].disagreement(seq[i + 1]);
            Shape allowed = sigma.intersect(n_neighbourhood(Shape({sigma.at(i)}), g));
            REQUIRE(step.minus(allowed).empty());
        }
    }
}

TEST_CASE("pivot endpoint validation", "[tssm]") {
    NNSFT x = sfts::hard_core(2);
    PeriodicPoint z = all_const(2, 0);
    Shape w({Site{0, 0}, Site{1, 0}});
    Pattern bad(w, {1, 1});
    Pattern good(w, {0, 0});
    REQUIRE_THROWS_AS(pivot_sequence(x, w, bad, good, 2, 2, z), std::invalid_argument);
    REQUIRE_THROWS_AS(pivot_sequence(x, w, good.restrict_to(Shape({Site{0, 0}})), good, 2, 2, z),
                      std::invalid_argument);
}

TEST_CASE("a wrong tssm certificate surfaces as a distinct error", "[tssm]") {
    // Sign changes in the iceberg system need three steps. With the gap
    // understated as 1, the first pivot pins +2 two sites away from a kept
    // -2 and the refill is infeasible.
    NNSFT x = sfts::iceberg(2, 1);
    auto z = find_periodic_point(x, {1});
    REQUIRE(z.has_value());
    Shape w4({Site{0}, Site{1}, Site{2}, Site{3}});
    Pattern a(w4, {0, 0, 0, 0});
    Pattern b(w4, {3, 3, 3, 3});
    REQUIRE(pivot_sequence(x, w4, a, b, 3, 3, *z).size() == 5u);
    REQUIRE_THROWS_AS(pivot_sequence(x, w4, a, b, 1, 3, *z), CertificateViolation);
}
