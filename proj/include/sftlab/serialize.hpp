#pragma once
// JSON encodings shared by the command-line tool and the test suite.
//
//   SFT           {"alphabet": ["0","1"], "axes": 2,
//                  "allowed": {"axis_0": [["0","0"],["0","1"],["1","0"]], ...}}
//                 or "forbidden" with the complementary pair lists.
//   Interaction   {"model": {"name": "hard_core", "params": {"lambda": 1.0, "d": 2}}}
//                 or explicit: {"alphabet": [...], "axes": d,
//                  "vertex": {"1": -0.69}, "edges": {"axis_0": {"1,1": "inf"}}}
//                 Omitted vertex/edge entries are zero.
//   Pattern       {"sites": [[0,0],[1,0]], "letters": ["0","1"]}
//   Periodic pt   {"periods": [2,2], "cell": <pattern>}
//   Certificate   {"property": "tssm", "gap": 2, "provenance": "implication",
//                  "from": "ssf"}

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sftlab/interaction.hpp"
#include "sftlab/global.hpp"
#include "sftlab/mixing.hpp"

namespace sftlab {

using Json = nlohmann::ordered_json;

namespace detail {

inline int letter_of(const Alphabet& alphabet, const std::string& label) {
    if (auto i = alphabet.index_of(label)) return *i;
    throw std::invalid_argument("unknown letter label: " + label);
}

inline const Json& field(const Json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument("missing field: " + key);
    return *it;
}

inline Alphabet alphabet_from_json(const Json& j) {
    std::vector<std::string> labels;
    for (const auto& l : field(j, "alphabet")) labels.push_back(l.get<std::string>());
    return Alphabet(std::move(labels));
}

inline std::string axis_key(int axis) { return "axis_" + std::to_string(axis); }

/// "a,b" for single-letter relations, falling back on whole-string lookup so
/// labels containing commas still round-trip when unambiguous.
inline std::pair<int, int> edge_key_letters(const Alphabet& alphabet, const std::string& key) {
    for (std::size_t cut = key.find(','); cut != std::string::npos;
         cut = key.find(',', cut + 1)) {
        auto a = alphabet.index_of(key.substr(0, cut));
        auto b = alphabet.index_of(key.substr(cut + 1));
        if (a && b) return {*a, *b};
    }
    throw std::invalid_argument("edge key is not a letter pair: " + key);
}

}  // namespace detail

inline Json sft_to_json(const NNSFT& x) {
    Json j;
    j["alphabet"] = x.alphabet().labels();
    j["axes"] = x.dim();
    Json allowed = Json::object();
    for (int axis = 0; axis < x.dim(); ++axis) {
        Json pairs = Json::array();
        for (int a = 0; a < x.letters(); ++a)
            for (int b = 0; b < x.letters(); ++b)
                if (x.allowed(axis, a, b))
                    pairs.push_back({x.alphabet().label(a), x.alphabet().label(b)});
        allowed[detail::axis_key(axis)] = std::move(pairs);
    }
    j["allowed"] = std::move(allowed);
    return j;
}

inline NNSFT sft_from_json(const Json& j) {
    Alphabet alphabet = detail::alphabet_from_json(j);
    const int dim = detail::field(j, "axes").get<int>();
    if (dim < 1) throw std::invalid_argument("axes must be >= 1");
    const bool has_allowed = j.contains("allowed");
    if (has_allowed == j.contains("forbidden"))
        throw std::invalid_argument("need exactly one of allowed/forbidden");
    NNSFT x(alphabet, dim, !has_allowed);
    const Json& table = has_allowed ? j["allowed"] : j["forbidden"];
    for (int axis = 0; axis < dim; ++axis) {
        auto it = table.find(detail::axis_key(axis));
        if (it == table.end()) {
            if (has_allowed)
                throw std::invalid_argument("missing relation for " + detail::axis_key(axis));
            continue;
        }
        for (const auto& pair : *it) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("relation entries must be letter pairs");
            const int a = detail::letter_of(alphabet, pair[0].get<std::string>());
            const int b = detail::letter_of(alphabet, pair[1].get<std::string>());
            x.set_allowed(axis, a, b, has_allowed);
        }
    }
    return x;
}

inline Json interaction_to_json(const Interaction& phi) {
    Json j;
    j["alphabet"] = phi.alphabet().labels();
    j["axes"] = phi.dim();
    Json vertex = Json::object();
    for (int a = 0; a < phi.alphabet().size(); ++a)
        if (phi.vertex(a) != 0.0) vertex[phi.alphabet().label(a)] = phi.vertex(a);
    j["vertex"] = std::move(vertex);
    Json edges = Json::object();
    for (int axis = 0; axis < phi.dim(); ++axis) {
        Json table = Json::object();
        for (int a = 0; a < phi.alphabet().size(); ++a)
            for (int b = 0; b < phi.alphabet().size(); ++b) {
                const double w = phi.edge(axis, a, b);
                if (w == 0.0) continue;
                const std::string key =
                    phi.alphabet().label(a) + "," + phi.alphabet().label(b);
                if (w == kInfiniteEnergy)
                    table[key] = "inf";
                else
                    table[key] = w;
            }
        edges[detail::axis_key(axis)] = std::move(table);
    }
    j["edges"] = std::move(edges);
    return j;
}

struct ModelSpec {
    std::string name;
    std::string params;  // flag summary shown by the registry listing
    std::function<Interaction(const Json&)> build;
};

namespace detail {

inline double param_double(const Json& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (!it->is_number()) throw std::invalid_argument("parameter " + key + " must be a number");
    return it->get<double>();
}

inline int param_int(const Json& params, const std::string& key, int fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (!it->is_number_integer())
        throw std::invalid_argument("parameter " + key + " must be an integer");
    return it->get<int>();
}

inline int param_dim(const Json& params) { return param_int(params, "d", 2); }

}  // namespace detail

inline const std::vector<ModelSpec>& model_registry() {
    static const std::vector<ModelSpec> registry = {
        {"hard_core", "lambda=1.0 d=2",
         [](const Json& p) {
             return models::hard_core(detail::param_double(p, "lambda", 1.0),
                                      detail::param_dim(p));
         }},
        {"ising", "E=0.0 J=1.0 d=2",
         [](const Json& p) {
             return models::ising(detail::param_double(p, "E", 0.0),
                                  detail::param_double(p, "J", 1.0), detail::param_dim(p));
         }},
        {"potts", "q=3 J=1.0 d=2",
         [](const Json& p) {
             return models::potts(detail::param_int(p, "q", 3),
                                  detail::param_double(p, "J", 1.0), detail::param_dim(p));
         }},
        {"checkerboard", "k=4 d=2",
         [](const Json& p) {
             return models::checkerboard(detail::param_int(p, "k", 4), detail::param_dim(p));
         }},
        {"iceberg", "M=2 d=2",
         [](const Json& p) {
             return models::iceberg(detail::param_int(p, "M", 2), detail::param_dim(p));
         }},
        {"lipschitz", "g=2 lambda=1.0 d=2",
         [](const Json& p) {
             return models::lipschitz(detail::param_int(p, "g", 2),
                                      detail::param_double(p, "lambda", 1.0),
                                      detail::param_dim(p));
         }},
    };
    return registry;
}

inline Interaction build_model(const std::string& name, const Json& params) {
    for (const ModelSpec& spec : model_registry())
        if (spec.name == name) return spec.build(params);
    throw std::invalid_argument("unknown model: " + name);
}

inline Interaction interaction_from_json(const Json& j) {
    if (j.contains("model")) {
        const Json& m = j["model"];
        return build_model(detail::field(m, "name").get<std::string>(),
                           m.contains("params") ? m["params"] : Json::object());
    }
    Alphabet alphabet = detail::alphabet_from_json(j);
    const int dim = detail::field(j, "axes").get<int>();
    Interaction phi(alphabet, dim);
    if (j.contains("vertex"))
        for (const auto& [label, w] : j["vertex"].items())
            phi.set_vertex(detail::letter_of(alphabet, label), w.get<double>());
    if (j.contains("edges"))
        for (int axis = 0; axis < dim; ++axis) {
            auto it = j["edges"].find(detail::axis_key(axis));
            if (it == j["edges"].end()) continue;
            for (const auto& [key, w] : it->items()) {
                auto [a, b] = detail::edge_key_letters(alphabet, key);
                if (w.is_string()) {
                    if (w.get<std::string>() != "inf")
                        throw std::invalid_argument("edge weight must be a number or \"inf\"");
                    phi.set_edge(axis, a, b, kInfiniteEnergy);
                } else {
                    phi.set_edge(axis, a, b, w.get<double>());
                }
            }
        }
    return phi;
}

inline Json pattern_to_json(const Alphabet& alphabet, const Pattern& w) {
    Json j;
    Json sites = Json::array();
    Json letters = Json::array();
    for (std::size_t i = 0; i < w.shape().size(); ++i) {
        sites.push_back(w.shape().sites()[i]);
        letters.push_back(alphabet.label(w.letters()[i]));
    }
    j["sites"] = std::move(sites);
    j["letters"] = std::move(letters);
    return j;
}

inline Pattern pattern_from_json(const Alphabet& alphabet, const Json& j) {
    std::vector<Site> sites;
    for (const auto& s : detail::field(j, "sites")) sites.push_back(s.get<Site>());
    std::vector<int> letters;
    for (const auto& l : detail::field(j, "letters"))
        letters.push_back(detail::letter_of(alphabet, l.get<std::string>()));
    // Shape sorts its sites; reorder the letters the same way.
    Shape shape(sites);
    if (shape.size() != sites.size()) throw std::invalid_argument("duplicate sites in pattern");
    std::vector<int> sorted(letters.size());
    for (std::size_t i = 0; i < sites.size(); ++i) sorted[*shape.index_of(sites[i])] = letters[i];
    return Pattern(std::move(shape), std::move(sorted));
}

inline Json periodic_to_json(const Alphabet& alphabet, const PeriodicPoint& z) {
    Json j;
    j["periods"] = z.periods;
    j["cell"] = pattern_to_json(alphabet, z.cell);
    return j;
}

inline PeriodicPoint periodic_from_json(const Alphabet& alphabet, const Json& j) {
    PeriodicPoint z;
    z.periods = detail::field(j, "periods").get<std::vector<Coord>>();
    z.cell = pattern_from_json(alphabet, detail::field(j, "cell"));
    return z;
}

namespace detail {

inline const char* provenance_name(MixingCertificate::Provenance p) {
    switch (p) {
        case MixingCertificate::Provenance::exhaustive_check: return "exhaustive_check";
        case MixingCertificate::Provenance::implication: return "implication";
        case MixingCertificate::Provenance::user_asserted: return "user_asserted";
    }
    std::abort();
}

inline MixingCertificate::Property property_from_name(const std::string& name) {
    using P = MixingCertificate::Property;
    for (P p : {P::safe_symbol, P::ssf, P::n_fillable, P::strong_irreducible, P::tssm,
                P::top_mixing_1d})
        if (name == property_name(p)) return p;
    throw std::invalid_argument("unknown property: " + name);
}

}  // namespace detail

inline Json certificate_to_json(const MixingCertificate& c) {
    Json j;
    j["property"] = property_name(c.property);
    j["gap"] = c.parameter;
    j["provenance"] = detail::provenance_name(c.provenance);
    if (c.implied_from) j["from"] = property_name(*c.implied_from);
    return j;
}

inline MixingCertificate certificate_from_json(const Json& j) {
    MixingCertificate c;
    c.property = detail::property_from_name(detail::field(j, "property").get<std::string>());
    c.parameter = detail::field(j, "gap").get<int>();
    const std::string prov = j.value("provenance", "user_asserted");
    using Prov = MixingCertificate::Provenance;
    for (Prov p : {Prov::exhaustive_check, Prov::implication, Prov::user_asserted})
        if (prov == detail::provenance_name(p)) {
            c.provenance = p;
            if (j.contains("from"))
                c.implied_from = detail::property_from_name(j["from"].get<std::string>());
            return c;
        }
    throw std::invalid_argument("unknown provenance: " + prov);
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed config " + path + ": " + e.what());
    }
}

}  // namespace sftlab
