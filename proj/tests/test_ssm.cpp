// Boundary-influence decay profiles, the stripe counterexample geometry,
// decay-rate certificates, and the maximal height-Lipschitz configuration.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sftlab/ssm.hpp"

using namespace sftlab;

TEST_CASE("stripe geometry layout", "[ssm]") {
    ProfileGeometry g = geometries::c4_stripe(2);
    REQUIRE(g.distance == 4);
    REQUIRE(g.region.size() == 7u);
    REQUIRE(g.locus == Shape({Site{-4, 0}, Site{4, 0}}));
    REQUIRE(g.base.size() == 14u);
    REQUIRE(g.base.at(Site{0, 1}) == 0);
    REQUIRE(g.base.at(Site{1, 1}) == 1);
    REQUIRE(g.base.at(Site{0, -1}) == 1);
    REQUIRE(g.base.at(Site{1, -1}) == 0);
    REQUIRE(g.target.at(origin(2)) == 2);
    REQUIRE_THROWS_AS(geometries::c4_stripe(0), std::invalid_argument);
}

TEST_CASE("stripe conditionals flip with the far ends", "[ssm]") {
    NNSFT c4 = sfts::proper_colouring(4, 2);
    auto z = find_periodic_point(c4, {2, 2});
    REQUIRE(z.has_value());
    Admissibility adm = Admissibility::with_solver(c4, 6, *z);
    Interaction phi = models::checkerboard(4, 2);
    DecayProfile prof =
        ssm_profile(phi, adm, [](int n) { return geometries::c4_stripe(n); }, {1, 2});
    REQUIRE(prof.distances == std::vector<Coord>{2, 4});
    REQUIRE(prof.max_discrepancy[0] == 1.0);
    REQUIRE(prof.max_discrepancy[1] == 1.0);
    // No decay at all: the fitted rate vanishes.
    REQUIRE(prof.alpha == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(prof.c == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("hard-core interval influence decays exponentially", "[ssm]") {
    NNSFT gm = sfts::hard_core(1);
    Admissibility adm = Admissibility::with_one_dim(gm);
    Interaction phi = models::hard_core(1.0, 1);
    DecayProfile prof = ssm_profile(
        phi, adm, [](int n) { return geometries::interval_1d(n, 0); }, {1, 2, 3, 4, 5, 6});
    REQUIRE(prof.distances.size() == 6u);
    for (std::size_t i = 0; i + 1 < prof.max_discrepancy.size(); ++i)
        REQUIRE(prof.max_discrepancy[i] > prof.max_discrepancy[i + 1]);
    REQUIRE(prof.alpha > 0.5);
    REQUIRE(prof.c > 0.0);
    REQUIRE(prof.residual < 0.1);

    DecayProfile whole = wsm_profile(
        phi, adm, [](int n) { return geometries::interval_1d(n, 0); }, {1, 2, 3, 4, 5, 6});
    REQUIRE(whole.distances == prof.distances);
    REQUIRE(whole.max_discrepancy == prof.max_discrepancy);
}

TEST_CASE("row influence through a hard-core strip", "[ssm]") {
    NNSFT hs = sfts::hard_core(2);
    Admissibility adm = Admissibility::with_local_shortcut(hs);
    Interaction phi = models::hard_core(1.0, 2);
    DecayProfile prof = ssm_profile(
        phi, adm, [](int n) { return geometries::row_2d(n, 0, 1); }, {1, 2, 3});
    REQUIRE(prof.distances == std::vector<Coord>{2, 3, 4});
    for (double v : prof.max_discrepancy) REQUIRE(v > 0.0);
    REQUIRE(prof.alpha > 0.0);
}

TEST_CASE("profile input validation", "[ssm]") {
    Interaction phi = models::hard_core(1.0, 1);
    Admissibility adm = Admissibility::with_one_dim(sfts::hard_core(1));
    auto bad_family = [](int n) {
        ProfileGeometry g = geometries::interval_1d(n, 0);
        g.locus = Shape({Site{n + 1}});  // leaves the left endpoint uncovered
        return g;
    };
    REQUIRE_THROWS_AS(ssm_profile(phi, adm, bad_family, {1}), std::invalid_argument);

    NNSFT dead(Alphabet::numeric(2), 1, false);
    Interaction u = models::uniform(dead);
    Admissibility dead_adm = Admissibility::with_one_dim(dead);
    REQUIRE_THROWS_AS(
        ssm_profile(u, dead_adm, [](int n) { return geometries::interval_1d(n, 0); }, {1}),
        std::domain_error);
}

TEST_CASE("height-activity rate certificate", "[ssm]") {
    RateCertificate rc = lipschitz_ssm_rate(1, 2, 4.0);
    REQUIRE(rc.g == 1);
    REQUIRE(rc.d == 2);
    REQUIRE(rc.beta == Catch::Approx(48.0).margin(1e-12));
    REQUIRE_FALSE(rc.guaranteed);
    REQUIRE(std::isinf(rc.c));
    REQUIRE(rc.lambda_pub ==
            BigInt(9) * boost::multiprecision::pow(BigInt(2), 81));
    REQUIRE(rc.lambda_pub.str() == "21760664753063325144711168");

    // beta crosses 1 exactly between these activities.
    REQUIRE_FALSE(lipschitz_ssm_rate(1, 2, 9216.0).guaranteed);
    REQUIRE(lipschitz_ssm_rate(1, 2, 9216.0).alpha == Catch::Approx(0.0).margin(1e-12));
    RateCertificate ok = lipschitz_ssm_rate(1, 2, 9217.0);
    REQUIRE(ok.guaranteed);
    REQUIRE(ok.alpha > 0.0);
    REQUIRE(ok.c == Catch::Approx(8.0 / (ok.beta * (1.0 - ok.beta))).epsilon(1e-12));
    REQUIRE(ok.alpha ==
            Catch::Approx(0.5 * std::log(9217.0) - std::log(3.0) - 5.0 * std::log(2.0))
                .margin(1e-13));

    REQUIRE_THROWS_AS(lipschitz_ssm_rate(-1, 2, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(lipschitz_ssm_rate(1, 0, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(lipschitz_ssm_rate(1, 2, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(lipschitz_ssm_rate(40, 2, 2.0), std::invalid_argument);
}

TEST_CASE("rate threshold for mixing", "[ssm]") {
    double threshold = 4.0 * std::log(2.0);
    REQUIRE_FALSE(rate_implies_tssm(threshold, 2, 2));
    REQUIRE(rate_implies_tssm(threshold + 1e-9, 2, 2));
    REQUIRE_FALSE(rate_implies_tssm(threshold - 1e-9, 2, 2));
    REQUIRE(rate_implies_tssm(0.1, 1, 2));
    REQUIRE_THROWS_AS(rate_implies_tssm(1.0, 2, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(rate_implies_tssm(1.0, 0, 2), std::invalid_argument);
}

TEST_CASE("maximal height configuration on an interval", "[ssm]") {
    Shape region({Site{0}, Site{1}, Site{2}});
    Pattern low(n_boundary(region, 1), {0, 0});
    REQUIRE(max_config_xg(3, region, low) == Pattern(region, {1, 2, 1}));
    Pattern high(n_boundary(region, 1), {3, 3});
    REQUIRE(max_config_xg(3, region, high) == Pattern(region, {3, 3, 3}));
}

TEST_CASE("maximal height configuration dominates every fill", "[ssm]") {
    const int g = 3;
    NNSFT x = sfts::height_lipschitz(g, 2);
    Shape region({Site{0, 0}, Site{1, 0}, Site{0, 1}, Site{1, 1}});
    Shape ring = n_boundary(region, 1);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> value(0, g);
    int tested = 0;
    while (tested < 20) {
        std::vector<int> letters(ring.size());
        for (auto& l : letters) l = value(rng);
        Pattern boundary(ring, letters);
        Pattern theta;
        try {
            theta = max_config_xg(g, region, boundary);
        } catch (const std::invalid_argument&) {
            continue;  // boundary not 1-Lipschitz along the ring
        } catch (const std::domain_error&) {
            continue;
        }
        ++tested;
        RegionProblem pr(x, region, boundary);
        std::size_t fills = 0;
        bool saw_theta = false;
        pr.for_each([&](const Pattern& fill) {
            ++fills;
            if (fill == theta) saw_theta = true;
            for (const Site& p : region) REQUIRE(fill.at(p) <= theta.at(p));
            return true;
        });
        REQUIRE(fills > 0u);
        REQUIRE(saw_theta);
    }
}

TEST_CASE("larger boundaries give larger maximal configurations", "[ssm]") {
    Shape region({Site{0}, Site{1}, Site{2}});
    Shape ring = n_boundary(region, 1);
    Pattern lo = max_config_xg(4, region, Pattern(ring, {0, 1}));
    Pattern hi = max_config_xg(4, region, Pattern(ring, {2, 3}));
    for (const Site& p : region) REQUIRE(lo.at(p) <= hi.at(p));
}

TEST_CASE("maximal height configuration guards", "[ssm]") {
    Shape region({Site{0}});
    Shape ring = n_boundary(region, 1);
    REQUIRE_THROWS_AS(max_config_xg(0, region, Pattern(ring, {0, 0})), std::invalid_argument);
    REQUIRE_THROWS_AS(max_config_xg(2, Shape(), Pattern()), std::invalid_argument);
    REQUIRE_THROWS_AS(max_config_xg(2, region, Pattern(Shape({Site{1}}), {0})),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(max_config_xg(2, region, Pattern(ring, {0, 3})), std::invalid_argument);

    // Adjacent ring sites two levels apart violate the Lipschitz condition.
    Shape pair({Site{0, 0}, Site{1, 0}});
    Shape pring = n_boundary(pair, 1);
    std::vector<int> vals(pring.size(), 0);
    auto i1 = pring.index_of(Site{0, 1});
    auto i2 = pring.index_of(Site{1, 1});
    REQUIRE(i1.has_value());
    REQUIRE(i2.has_value());
    vals[*i1] = 0;
    vals[*i2] = 2;
    REQUIRE_THROWS_AS(max_config_xg(2, pair, Pattern(pring, vals)), std::invalid_argument);

    // 1-Lipschitz along the ring yet with no compatible fill.
    REQUIRE_THROWS_AS(max_config_xg(3, region, Pattern(ring, {0, 3})), std::domain_error);
}
