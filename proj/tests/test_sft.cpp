// Nearest-neighbour SFT tables, local admissibility, and the canonical
// model builders.

#include <catch2/catch_amalgamated.hpp>

#include "sftlab/sft.hpp"

using namespace sftlab;

TEST_CASE("adjacency tables and masks", "[sft]") {
    NNSFT x(Alphabet::numeric(3), 2, true);
    REQUIRE(x.full_mask() == 0b111u);
    REQUIRE(x.allowed(0, 1, 2));
    x.set_allowed(0, 1, 2, false);
    REQUIRE_FALSE(x.allowed(0, 1, 2));
    REQUIRE(x.allowed(1, 1, 2));  // other axis untouched
    REQUIRE(x.allowed(0, 2, 1));  // order matters
    REQUIRE(x.next_mask(0, 1) == 0b011u);
    REQUIRE(x.prev_mask(0, 2) == 0b101u);
    x.set_allowed(0, 1, 2, true);
    REQUIRE(x.next_mask(0, 1) == 0b111u);
    REQUIRE_THROWS_AS(x.allowed(2, 0, 0), std::out_of_range);
    REQUIRE_THROWS_AS(x.set_allowed(0, 3, 0, false), std::out_of_range);
    REQUIRE_THROWS_AS(NNSFT(Alphabet::numeric(2), 0), std::invalid_argument);
}

TEST_CASE("from_forbidden_pairs applies to every axis", "[sft]") {
    NNSFT x = NNSFT::from_forbidden_pairs(Alphabet::numeric(2), 3, {{1, 1}});
    for (int axis = 0; axis < 3; ++axis) {
        REQUIRE_FALSE(x.allowed(axis, 1, 1));
        REQUIRE(x.allowed(axis, 0, 1));
        REQUIRE(x.allowed(axis, 1, 0));
        REQUIRE(x.allowed(axis, 0, 0));
    }
    REQUIRE(x == sfts::hard_core(3));
    REQUIRE_FALSE(x == sfts::hard_core(2));
}

TEST_CASE("local admissibility checks forward edges only once", "[sft]") {
    NNSFT x = sfts::hard_core(2);
    Shape dom({Site{0, 0}, Site{1, 0}});
    REQUIRE(is_locally_admissible(x, Pattern(dom, {1, 0})));
    REQUIRE_FALSE(is_locally_admissible(x, Pattern(dom, {1, 1})));
    // Diagonal neighbours are unconstrained.
    Shape diag({Site{0, 0}, Site{1, 1}});
    REQUIRE(is_locally_admissible(x, Pattern(diag, {1, 1})));
    // Gaps are unconstrained.
    Shape gap({Site{0, 0}, Site{2, 0}});
    REQUIRE(is_locally_admissible(x, Pattern(gap, {1, 1})));
    REQUIRE(is_locally_admissible(x, Pattern()));
    REQUIRE_THROWS_AS(is_locally_admissible(x, Pattern(Shape({Site{0}}), {0})),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(is_locally_admissible(x, Pattern(Shape({origin(2)}), {7})),
                      std::invalid_argument);
}

TEST_CASE("proper colouring model", "[sft]") {
    NNSFT x = sfts::proper_colouring(4, 2);
    REQUIRE(x.letters() == 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int axis = 0; axis < 2; ++axis) REQUIRE(x.allowed(axis, a, b) == (a != b));
}

TEST_CASE("height lipschitz model", "[sft]") {
    NNSFT x = sfts::height_lipschitz(3, 2);
    REQUIRE(x.letters() == 4);
    REQUIRE(x.allowed(0, 0, 1));
    REQUIRE(x.allowed(1, 2, 2));
    REQUIRE_FALSE(x.allowed(0, 0, 2));
    REQUIRE_FALSE(x.allowed(1, 3, 0));
}

TEST_CASE("iceberg model", "[sft]") {
    NNSFT x = sfts::iceberg(2, 2);
    REQUIRE(x.letters() == 4);
    REQUIRE(x.alphabet().labels() == std::vector<std::string>{"-2", "-1", "+1", "+2"});
    REQUIRE(sfts::iceberg_value(2, 0) == -2);
    REQUIRE(sfts::iceberg_value(2, 1) == -1);
    REQUIRE(sfts::iceberg_value(2, 2) == 1);
    REQUIRE(sfts::iceberg_value(2, 3) == 2);
    auto idx = [&](int v) { return v < 0 ? v + 2 : v + 1; };
    // Allowed iff the product of values is at least -1.
    for (int a : {-2, -1, 1, 2})
        for (int b : {-2, -1, 1, 2})
            REQUIRE(x.allowed(0, idx(a), idx(b)) == (a * b >= -1));
}

TEST_CASE("full shift allows everything", "[sft]") {
    NNSFT x = NNSFT::full_shift(Alphabet::numeric(5), 2);
    for (int a = 0; a < 5; ++a) REQUIRE(x.next_mask(1, a) == x.full_mask());
}
