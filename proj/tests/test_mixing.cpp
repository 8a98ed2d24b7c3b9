// Mixing certificates: safe symbols, single-site and N-fillability, the
// implication chain, and derived strong irreducibility gaps.

#include <catch2/catch_amalgamated.hpp>

#include "sftlab/mixing.hpp"

using namespace sftlab;
using P = MixingCertificate::Property;
using R = MixingCertificate::Provenance;

namespace {

const MixingCertificate* find_cert(const std::vector<MixingCertificate>& certs, P p) {
    for (const auto& c : certs)
        if (c.property == p) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("safe symbols", "[mixing]") {
    REQUIRE(find_safe_symbols(sfts::hard_core(2)) == std::vector<int>{0});
    REQUIRE(find_safe_symbols(sfts::hard_core(3)) == std::vector<int>{0});
    REQUIRE(find_safe_symbols(sfts::height_lipschitz(2, 2)) == std::vector<int>{1});
    REQUIRE(find_safe_symbols(sfts::proper_colouring(4, 2)).empty());
    REQUIRE(find_safe_symbols(sfts::iceberg(2, 2)).empty());
    NNSFT full = NNSFT::full_shift(Alphabet::numeric(3), 2);
    REQUIRE(find_safe_symbols(full) == std::vector<int>{0, 1, 2});
}

TEST_CASE("single-site fillability", "[mixing]") {
    REQUIRE(check_ssf(sfts::hard_core(2)));
    REQUIRE(check_ssf(sfts::height_lipschitz(2, 2)));
    // Heights 0 and 3 on opposite neighbours are locally fine but unfillable.
    REQUIRE_FALSE(check_ssf(sfts::height_lipschitz(3, 2)));
    REQUIRE_FALSE(check_ssf(sfts::proper_colouring(4, 2)));
    REQUIRE(check_ssf(sfts::proper_colouring(5, 2)));
    REQUIRE_FALSE(check_ssf(sfts::iceberg(2, 2)));
    // In d=1 a colouring needs 3 letters for single-site fills.
    REQUIRE_FALSE(check_ssf(sfts::proper_colouring(2, 1)));
    REQUIRE(check_ssf(sfts::proper_colouring(3, 1)));
    REQUIRE_THROWS_AS(check_ssf(sfts::proper_colouring(4, 2), 16), BudgetExceeded);
}

TEST_CASE("five colours are fillable without a safe symbol", "[mixing]") {
    // No colour neighbours all five others, yet four boundary colours
    // always leave at least one of five free.
    NNSFT x = sfts::proper_colouring(5, 2);
    REQUIRE(find_safe_symbols(x).empty());
    REQUIRE(check_ssf(x));
}

TEST_CASE("n-fillability of colourings", "[mixing]") {
    REQUIRE_FALSE(check_n_fillability(sfts::proper_colouring(4, 2), 1));
    REQUIRE(check_n_fillability(sfts::proper_colouring(5, 2), 1));
    REQUIRE(check_n_fillability(sfts::hard_core(2), 1));
    REQUIRE(check_n_fillability(sfts::hard_core(2), 2));
    REQUIRE_THROWS_AS(check_n_fillability(sfts::hard_core(2), 0), std::invalid_argument);
    SolveOptions tiny;
    tiny.node_budget = 4;
    REQUIRE_THROWS_AS(check_n_fillability(sfts::proper_colouring(4, 2), 2, tiny),
                      BudgetExceeded);
}

TEST_CASE("derived strong irreducibility gap", "[mixing]") {
    auto c = derive_strong_irreducibility(sfts::hard_core(2), 2);
    REQUIRE(c.has_value());
    REQUIRE(c->property == P::strong_irreducible);
    REQUIRE(c->parameter == 4);  // first fillable N is 1, gap 2(N+1)
    REQUIRE(c->provenance == R::implication);
    REQUIRE(c->implied_from == P::n_fillable);
    // 4-colourings are not 1-fillable, so nothing is derived at n_max = 1.
    REQUIRE_FALSE(derive_strong_irreducibility(sfts::proper_colouring(4, 2), 1).has_value());
}

TEST_CASE("certificate chain for a safe-symbol system", "[mixing]") {
    auto chain = certificate_chain(sfts::hard_core(2));
    const auto* safe = find_cert(chain, P::safe_symbol);
    REQUIRE(safe != nullptr);
    REQUIRE(safe->parameter == 0);
    REQUIRE(safe->provenance == R::exhaustive_check);

    const auto* ssf = find_cert(chain, P::ssf);
    REQUIRE(ssf != nullptr);

    const auto* tssm = find_cert(chain, P::tssm);
    REQUIRE(tssm != nullptr);
    REQUIRE(tssm->parameter == 2);
    REQUIRE(tssm->provenance == R::implication);
    REQUIRE(tssm->implied_from == P::ssf);

    const auto* si = find_cert(chain, P::strong_irreducible);
    REQUIRE(si != nullptr);
    REQUIRE(si->parameter == 2);
    REQUIRE(best_si_gap(chain) == 2);
}

TEST_CASE("certificate chain falls back to fillability", "[mixing]") {
    auto chain = certificate_chain(sfts::proper_colouring(5, 2));
    REQUIRE(find_cert(chain, P::safe_symbol) == nullptr);
    REQUIRE(find_cert(chain, P::ssf) != nullptr);
    REQUIRE(find_cert(chain, P::tssm) != nullptr);
    REQUIRE(best_si_gap(chain) == 2);

    // 4-colourings: no SSF; fillability at N=2 gives gap 6 and no TSSM claim.
    auto chain4 = certificate_chain(sfts::proper_colouring(4, 2));
    REQUIRE(find_cert(chain4, P::ssf) == nullptr);
    REQUIRE(find_cert(chain4, P::tssm) == nullptr);
    const auto* si = find_cert(chain4, P::strong_irreducible);
    REQUIRE(si != nullptr);
    REQUIRE(si->parameter == 6);
    REQUIRE(si->implied_from == P::n_fillable);
    REQUIRE(best_si_gap(chain4) == 6);
}

TEST_CASE("user assertions pass through and implications close over them", "[mixing]") {
    MixingCertificate asserted;
    asserted.property = P::strong_irreducible;
    asserted.parameter = 3;
    asserted.provenance = R::user_asserted;
    auto chain = certificate_chain(sfts::iceberg(2, 2), {asserted}, 1);
    const auto* si = find_cert(chain, P::strong_irreducible);
    REQUIRE(si != nullptr);
    REQUIRE(si->parameter == 3);
    REQUIRE(si->provenance == R::user_asserted);
    REQUIRE(best_si_gap(chain) == 3);
    // No exhaustive claim appears for a system without cheap certificates.
    REQUIRE(find_cert(chain, P::ssf) == nullptr);
    REQUIRE(find_cert(chain, P::safe_symbol) == nullptr);
}

TEST_CASE("1d chains use the mixing route", "[mixing]") {
    auto chain = certificate_chain(sfts::hard_core(1));
    const auto* mix = find_cert(chain, P::top_mixing_1d);
    REQUIRE(mix != nullptr);
    const auto* tssm = find_cert(chain, P::tssm);
    REQUIRE(tssm != nullptr);
    REQUIRE(best_si_gap(chain).has_value());
}

TEST_CASE("no certificates for an unmixing system", "[mixing]") {
    // Period-2 cycle in 1d: not mixing, nothing to certify.
    NNSFT cyc(Alphabet::numeric(2), 1, false);
    cyc.set_allowed(0, 0, 1, true);
    cyc.set_allowed(0, 1, 0, true);
    auto chain = certificate_chain(cyc);
    REQUIRE_FALSE(best_si_gap(chain).has_value());
}

TEST_CASE("property names", "[mixing]") {
    REQUIRE(std::string(property_name(P::safe_symbol)) == "safe-symbol");
    REQUIRE(std::string(property_name(P::ssf)) == "ssf");
    REQUIRE(std::string(property_name(P::n_fillable)) == "n-fillable");
    REQUIRE(std::string(property_name(P::strong_irreducible)) == "strong-irreducible");
    REQUIRE(std::string(property_name(P::tssm)) == "tssm");
    REQUIRE(std::string(property_name(P::top_mixing_1d)) == "top-mixing-1d");
}
