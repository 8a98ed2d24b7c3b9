// Derives mixing certificates for a few built-in systems and shows a tssm
// refutation together with its witness patterns.

#include <cstdio>
#include <vector>

#include "sftlab/mixing.hpp"
#include "sftlab/tssm.hpp"

using namespace sftlab;

namespace {

const char* provenance_name(MixingCertificate::Provenance p) {
    switch (p) {
        case MixingCertificate::Provenance::exhaustive_check: return "exhaustive";
        case MixingCertificate::Provenance::implication: return "implied";
        case MixingCertificate::Provenance::user_asserted: return "asserted";
    }
    return "?";
}

void show(const char* name, const NNSFT& x) {
    std::printf("%s\n", name);
    const std::vector<int> safe = find_safe_symbols(x);
    std::printf("  safe symbols:");
    if (safe.empty()) std::printf(" none");
    for (int a : safe) std::printf(" %s", x.alphabet().label(a).c_str());
    std::printf("\n");
    for (const MixingCertificate& c : certificate_chain(x)) {
        const bool is_letter = c.property == MixingCertificate::Property::safe_symbol;
        std::printf("  %-19s %s %d  (%s", property_name(c.property),
                    is_letter ? "letter" : "gap", c.parameter, provenance_name(c.provenance));
        if (c.implied_from) std::printf(" from %s", property_name(*c.implied_from));
        std::printf(")\n");
    }
}

void show_pattern(const char* tag, const Pattern& p, const Alphabet& alpha) {
    std::printf("  %s:", tag);
    for (std::size_t i = 0; i < p.shape().size(); ++i) {
        const Site& s = p.shape().at(i);
        std::printf(" (%lld,%lld)=%s", static_cast<long long>(s[0]),
                    static_cast<long long>(s[1]), alpha.label(p.at(s)).c_str());
    }
    std::printf("\n");
}

}  // namespace

int main() {
    show("hard core, d=2", sfts::hard_core(2));
    show("proper colouring, k=5", sfts::proper_colouring(5, 2));
    show("proper colouring, k=4", sfts::proper_colouring(4, 2));
    show("height differences, g=2", sfts::height_lipschitz(2, 2));

    std::printf("\ntssm refutation for the iceberg system at gap 2\n");
    const NNSFT ice = sfts::iceberg(2, 2);
    const PeriodicPoint z{{1, 1}, Pattern(Shape({origin(2)}), {0})};
    const TSSMVerdict v = check_tssm(ice, 2, 3, z);
    if (v.kind == TSSMVerdict::Kind::violation && v.witness) {
        show_pattern("u", v.witness->u, ice.alphabet());
        if (!v.witness->s.shape().empty()) show_pattern("s", v.witness->s, ice.alphabet());
        show_pattern("v", v.witness->v, ice.alphabet());
        std::printf("  u and v extend separately alongside s but never together\n");
    } else {
        std::printf("  unexpected verdict\n");
    }
    return 0;
}
