// Command-line front end. Every run prints one JSON record:
//   {"subcommand", "inputs", "result", "assumptions", "seconds"}
// where "assumptions" lists the certificates the computation consumed.
// Exit codes: 0 computed, 2 property refuted or pattern inadmissible,
// 3 budget exhausted, 4 input error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sftlab/counting.hpp"
#include "sftlab/mixing.hpp"
#include "sftlab/one_dim.hpp"
#include "sftlab/pressure.hpp"
#include "sftlab/serialize.hpp"
#include "sftlab/ssm.hpp"
#include "sftlab/tssm.hpp"

using namespace sftlab;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

struct Common {
    std::string model, config;
    Json params = Json::object();
    std::uint64_t seed = 0;
    int threads = 0;  // accepted for interface stability; runs are single-threaded
    std::string csv;
    bool table = false;
};

void add_input_flags(CLI::App* sub, Common& c) {
    sub->add_option("--model", c.model, "registry model name (see `models`)");
    sub->add_option("--config", c.config, "SFT or interaction config file (JSON)");
    sub->add_option_function<double>(
        "--lambda", [&c](const double& v) { c.params["lambda"] = v; }, "activity parameter");
    sub->add_option_function<double>(
        "--E", [&c](const double& v) { c.params["E"] = v; }, "external field (ising)");
    sub->add_option_function<double>(
        "--J", [&c](const double& v) { c.params["J"] = v; }, "coupling (ising, potts)");
    sub->add_option_function<int>(
        "--q", [&c](const int& v) { c.params["q"] = v; }, "number of Potts states");
    sub->add_option_function<int>(
        "--k", [&c](const int& v) { c.params["k"] = v; }, "number of colours (checkerboard)");
    sub->add_option_function<int>(
        "--M", [&c](const int& v) { c.params["M"] = v; }, "iceberg magnitude");
    sub->add_option_function<int>(
        "--g", [&c](const int& v) { c.params["g"] = v; }, "height bound (lipschitz)");
    sub->add_option_function<int>(
        "--d", [&c](const int& v) { c.params["d"] = v; }, "lattice dimension (default 2)");
    sub->add_option("--seed", c.seed, "seed for randomized strategies (default 0)");
    sub->add_option("--threads", c.threads, "worker threads; results are thread-count independent");
    sub->add_option("--csv", c.csv, "also write series rows to this path");
    sub->add_flag("--table", c.table, "human-readable output instead of a JSON line");
}

struct Resolved {
    Interaction phi;
    NNSFT x;
    Json inputs = Json::object();
};

Resolved resolve_input(const Common& c) {
    Resolved r;
    if (!c.model.empty() && !c.config.empty())
        throw std::invalid_argument("pass exactly one of --model / --config");
    if (!c.model.empty()) {
        r.phi = build_model(c.model, c.params);
        r.inputs["model"] = c.model;
        r.inputs["params"] = c.params;
    } else if (!c.config.empty()) {
        Json j = load_json_file(c.config);
        if (j.contains("model") || j.contains("vertex") || j.contains("edges"))
            r.phi = interaction_from_json(j);
        else
            r.phi = models::uniform(sft_from_json(j));
        r.inputs["config"] = c.config;
        r.inputs["description"] = j;
    } else {
        throw std::invalid_argument("pass --model NAME or --config FILE");
    }
    r.x = underlying_sft(r.phi);
    r.inputs["seed"] = c.seed;
    return r;
}

Json parse_pattern_arg(const std::string& s) {
    if (!s.empty() && s.front() == '{') {
        try {
            return Json::parse(s);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(std::string("malformed inline pattern: ") + e.what());
        }
    }
    return load_json_file(s);
}

void print_table(const Json& rec) {
    std::cout << rec["subcommand"].get<std::string>() << "\n";
    for (const auto& [k, v] : rec["result"].items())
        std::cout << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                  << "\n";
    for (const auto& a : rec["assumptions"])
        std::cout << "  assuming " << a.get<std::string>() << "\n";
    std::cout << "  seconds: " << rec["seconds"].dump() << "\n";
}

int finish(const Common& c, const std::string& sub, const Json& inputs, Json result,
           std::vector<std::string> assumptions, double seconds, int code) {
    Json rec;
    rec["subcommand"] = sub;
    rec["inputs"] = inputs;
    rec["result"] = std::move(result);
    rec["assumptions"] = std::move(assumptions);
    rec["seconds"] = seconds;
    if (c.table)
        print_table(rec);
    else
        std::cout << rec.dump() << "\n";
    return code;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open csv path: " + path);
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
}

std::string cert_note(const MixingCertificate& c) {
    using P = MixingCertificate::Property;
    std::string s = property_name(c.property);
    if (c.property == P::tssm || c.property == P::strong_irreducible ||
        c.property == P::n_fillable)
        s += " gap " + std::to_string(c.parameter);
    switch (c.provenance) {
        case MixingCertificate::Provenance::exhaustive_check: s += " via exhaustive check"; break;
        case MixingCertificate::Provenance::implication:
            s += " via ";
            s += c.implied_from ? property_name(*c.implied_from) : "implication";
            break;
        case MixingCertificate::Provenance::user_asserted: s += " via user assertion"; break;
    }
    return s;
}

/// Certificates backing solver-based admissibility: the implication chain,
/// the best strong irreducibility gap, and a periodic point for extensions.
struct Backing {
    std::vector<MixingCertificate> chain;
    bool ssf = false;
    std::optional<int> si_gap;
    std::optional<PeriodicPoint> z;
    std::vector<std::string> assumptions;
};

Backing backing_for(const NNSFT& x, std::optional<int> forced_gap, std::vector<Coord> periods,
                    bool want_point) {
    Backing b;
    std::vector<MixingCertificate> asserted;
    if (forced_gap) {
        MixingCertificate c;
        c.property = MixingCertificate::Property::strong_irreducible;
        c.parameter = *forced_gap;
        c.provenance = MixingCertificate::Provenance::user_asserted;
        asserted.push_back(c);
    }
    b.chain = certificate_chain(x, asserted);
    for (const auto& c : b.chain)
        if (c.property == MixingCertificate::Property::ssf) b.ssf = true;
    b.si_gap = forced_gap ? forced_gap : best_si_gap(b.chain);
    if (b.si_gap) {
        for (const auto& c : b.chain) {
            const bool si = c.property == MixingCertificate::Property::strong_irreducible ||
                            c.property == MixingCertificate::Property::tssm;
            if (si && c.parameter == *b.si_gap) {
                b.assumptions.push_back(cert_note(c));
                break;
            }
        }
        if (want_point) {
            if (periods.empty()) periods.assign(static_cast<std::size_t>(x.dim()), 2 * *b.si_gap);
            b.z = find_periodic_point(x, periods);
            if (!b.z)
                throw std::invalid_argument(
                    "no periodic point found for the default periods; pass --periods");
        }
    }
    return b;
}

int require_si(const Backing& b) {
    if (!b.si_gap)
        throw std::invalid_argument(
            "no strong irreducibility certificate available; pass --si-gap");
    return *b.si_gap;
}

// ---------------------------------------------------------------- admissible

struct AdmissibleOpts {
    std::string pattern;
    bool local_only = false;
    std::optional<int> si_gap;
    std::vector<Coord> periods;
};

int run_admissible(const Common& c, const AdmissibleOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    Json pj = parse_pattern_arg(o.pattern);
    r.inputs["pattern"] = pj;
    Pattern u = pattern_from_json(r.x.alphabet(), pj);

    Json result;
    std::vector<std::string> assumptions;
    const bool local = is_locally_admissible(r.x, u);
    result["locally_admissible"] = local;
    int code = local ? 0 : 2;
    if (local && !o.local_only) {
        if (r.x.dim() == 1) {
            Admissibility adm = Admissibility::with_one_dim(r.x);
            const bool global = adm.check(u);
            result["globally_admissible"] = global;
            result["method"] = "one-dimensional exact";
            if (!global) code = 2;
        } else {
            Backing b = backing_for(r.x, o.si_gap, o.periods, true);
            if (b.ssf && !o.si_gap) {
                result["globally_admissible"] = true;
                result["method"] = "local implies global under single-site fillability";
                assumptions.push_back("ssf via exhaustive check");
            } else if (b.si_gap && b.z) {
                Admissibility adm = Admissibility::with_solver(r.x, *b.si_gap, *b.z);
                const bool global = adm.check(u);
                result["globally_admissible"] = global;
                result["method"] =
                    "extension solver at gap " + std::to_string(*b.si_gap);
                assumptions = b.assumptions;
                if (!global) code = 2;
            } else {
                result["globally_admissible"] = nullptr;
                result["method"] = "no strong irreducibility certificate; local check only";
            }
        }
    }
    return finish(c, "admissible", r.inputs, result, assumptions, sw.seconds(), code);
}

// ------------------------------------------------------------------- certify

struct CertifyOpts {
    std::optional<int> tssm_gap;
    std::optional<int> si_gap;
    std::vector<Coord> periods;
    int fill_n_max = 2;
    std::uint64_t node_budget = 50'000'000;
    double wall_seconds = 120.0;
};

int run_certify(const Common& c, const CertifyOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    auto chain = certificate_chain(r.x, {}, o.fill_n_max);

    Json result;
    Json certs = Json::array();
    Json safe = Json::array();
    bool ssf = false;
    std::optional<int> tssm_gap;
    for (const auto& cert : chain) {
        certs.push_back(certificate_to_json(cert));
        using P = MixingCertificate::Property;
        if (cert.property == P::safe_symbol) safe.push_back(r.x.alphabet().label(cert.parameter));
        if (cert.property == P::ssf) ssf = true;
        if (cert.property == P::tssm && (!tssm_gap || cert.parameter < *tssm_gap))
            tssm_gap = cert.parameter;
    }
    result["certificates"] = std::move(certs);
    result["safe_symbols"] = std::move(safe);
    result["ssf"] = ssf;
    result["tssm_gap"] = tssm_gap ? Json(*tssm_gap) : Json(nullptr);
    auto si = best_si_gap(chain);
    result["strong_irreducibility_gap"] = si ? Json(*si) : Json(nullptr);

    std::vector<std::string> assumptions;
    int code = 0;
    if (o.tssm_gap) {
        Backing b = backing_for(r.x, o.si_gap, o.periods, true);
        const int gap = require_si(b);
        assumptions = b.assumptions;
        TssmBudget budget{o.node_budget, o.wall_seconds};
        TSSMVerdict v = check_tssm(r.x, *o.tssm_gap, gap, *b.z, budget);
        Json check;
        check["gap"] = *o.tssm_gap;
        check["subsets_processed"] = v.subsets_processed;
        check["subsets_total"] = v.subsets_total;
        switch (v.kind) {
            case TSSMVerdict::Kind::certified: check["verdict"] = "certified"; break;
            case TSSMVerdict::Kind::violation:
                check["verdict"] = "violation";
                code = 2;
                break;
            case TSSMVerdict::Kind::exhausted:
                check["verdict"] = "exhausted";
                code = 3;
                break;
        }
        if (v.witness) {
            check["witness"] = Json{{"u", pattern_to_json(r.x.alphabet(), v.witness->u)},
                                    {"s", pattern_to_json(r.x.alphabet(), v.witness->s)},
                                    {"v", pattern_to_json(r.x.alphabet(), v.witness->v)}};
        }
        result["tssm_check"] = std::move(check);
    }
    return finish(c, "certify", r.inputs, result, assumptions, sw.seconds(), code);
}

// --------------------------------------------------------------- tssm-search

struct TssmSearchOpts {
    int gap = 0;
    std::optional<int> si_gap;
    std::vector<Coord> periods;
    std::vector<std::string> strategies;
    int extent = 3;
};

int run_tssm_search(const Common& c, const TssmSearchOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    r.inputs["gap"] = o.gap;
    r.inputs["strategies"] = o.strategies;  // as given; empty means all

    std::vector<std::string> names = o.strategies;
    if (names.empty()) names = {"singletons", "stripes", "rows", "combs"};
    std::vector<TssmStrategy> strategies;
    for (const auto& name : names) {
        if (name == "singletons")
            strategies.push_back(TssmStrategy::singletons);
        else if (name == "stripes")
            strategies.push_back(TssmStrategy::stripes);
        else if (name == "rows")
            strategies.push_back(TssmStrategy::rows);
        else if (name == "combs")
            strategies.push_back(TssmStrategy::combs);
        else
            throw std::invalid_argument("unknown strategy: " + name);
    }

    Backing b = backing_for(r.x, o.si_gap, o.periods, true);
    const int si = require_si(b);
    auto wit = search_tssm_violation(r.x, o.gap, si, *b.z, strategies, o.extent);

    Json result;
    result["found"] = static_cast<bool>(wit);
    int code = 0;
    if (wit) {
        Admissibility adm = Admissibility::with_solver(r.x, si, *b.z);
        auto us = wit->u.merge(wit->s);
        auto sv = wit->s.merge(wit->v);
        std::optional<Pattern> usv;
        if (us) usv = us->merge(wit->v);
        result["witness"] = Json{{"u", pattern_to_json(r.x.alphabet(), wit->u)},
                                 {"s", pattern_to_json(r.x.alphabet(), wit->s)},
                                 {"v", pattern_to_json(r.x.alphabet(), wit->v)}};
        result["checks"] = Json{{"us_admissible", us && adm.check(*us)},
                                {"sv_admissible", sv && adm.check(*sv)},
                                {"usv_admissible", usv && adm.check(*usv)}};
        code = 2;
    }
    return finish(c, "tssm-search", r.inputs, result, b.assumptions, sw.seconds(), code);
}

// ----------------------------------------------------------------- offenders

struct OffendersOpts {
    int diameter = 3;
    std::optional<int> si_gap;
    std::vector<Coord> periods;
    std::uint64_t node_budget = 200'000'000;
};

int run_offenders(const Common& c, const OffendersOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    r.inputs["diameter"] = o.diameter;
    Backing b = backing_for(r.x, o.si_gap, o.periods, true);
    const int si = require_si(b);
    SolveOptions opt;
    opt.node_budget = o.node_budget;
    auto offenders = enumerate_first_offenders(r.x, o.diameter, si, *b.z, opt);

    Json result;
    result["count"] = offenders.size();
    Json list = Json::array();
    for (const auto& w : offenders) list.push_back(pattern_to_json(r.x.alphabet(), w));
    result["offenders"] = std::move(list);
    return finish(c, "offenders", r.inputs, result, b.assumptions, sw.seconds(), 0);
}

// ------------------------------------------------------------------ periodic

struct PeriodicOpts {
    std::vector<Coord> periods;
    std::uint64_t node_budget = 50'000'000;
};

int run_periodic(const Common& c, const PeriodicOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    std::vector<Coord> periods = o.periods;
    if (periods.empty()) periods.assign(static_cast<std::size_t>(r.x.dim()), 2);
    r.inputs["periods"] = periods;
    auto z = find_periodic_point(r.x, periods, o.node_budget);
    Json result;
    result["found"] = static_cast<bool>(z);
    if (z) result["point"] = periodic_to_json(r.x.alphabet(), *z);
    return finish(c, "periodic", r.inputs, result, {}, sw.seconds(), z ? 0 : 2);
}

// --------------------------------------------------------------------- pivot

struct PivotOpts {
    std::string from, to;
    int gap = 0;
    std::optional<int> si_gap;
    std::vector<Coord> periods;
};

int run_pivot(const Common& c, const PivotOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    Json ja = parse_pattern_arg(o.from);
    Json jb = parse_pattern_arg(o.to);
    r.inputs["from"] = ja;
    r.inputs["to"] = jb;
    r.inputs["gap"] = o.gap;
    Pattern u = pattern_from_json(r.x.alphabet(), ja);
    Pattern v = pattern_from_json(r.x.alphabet(), jb);

    Backing b = backing_for(r.x, o.si_gap, o.periods, true);
    const int si = require_si(b);
    Admissibility adm = Admissibility::with_solver(r.x, si, *b.z);
    Json result;
    if (!adm.check(u) || !adm.check(v)) {
        result["admissible_endpoints"] = false;
        return finish(c, "pivot", r.inputs, result, b.assumptions, sw.seconds(), 2);
    }
    auto seq = pivot_sequence(r.x, u.shape(), u, v, o.gap, si, *b.z);
    result["admissible_endpoints"] = true;
    result["steps"] = seq.empty() ? 0 : seq.size() - 1;
    Json list = Json::array();
    for (const auto& w : seq) list.push_back(pattern_to_json(r.x.alphabet(), w));
    result["sequence"] = std::move(list);
    return finish(c, "pivot", r.inputs, result, b.assumptions, sw.seconds(), 0);
}

// ------------------------------------------------------------ entropy-bounds

struct EntropyOpts {
    int n_max = 4;
    std::uint64_t state_budget = 1u << 24;
};

int run_entropy(const Common& c, const EntropyOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    r.inputs["n_max"] = o.n_max;
    Json result;
    std::vector<std::string> rows;
    if (r.x.dim() == 1) result["exact"] = entropy_1d(r.x);
    auto terms = friedland_upper_bounds(r.x, o.n_max, o.state_budget);
    Json series = Json::array();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        series.push_back(Json{{"n", i + 1}, {"upper", terms[i]}});
        rows.push_back(std::to_string(i + 1) + "," + std::to_string(terms[i]));
    }
    result["upper_bounds"] = std::move(series);
    write_csv(c.csv, "n,upper", rows);
    return finish(c, "entropy-bounds", r.inputs, result, {}, sw.seconds(), 0);
}

// ------------------------------------------------------------------ pressure

struct PressureOpts {
    double epsilon = 0.01;
    std::optional<int> n;
    int n_max = 8;
    std::optional<int> tssm_gap;
    bool local_global = false;
    std::vector<Coord> periods;
    double wall_seconds = 600.0;
    int h_max = 14;
};

int run_pressure(const Common& c, const PressureOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    r.inputs["epsilon"] = o.epsilon;
    if (o.n) r.inputs["n"] = *o.n;

    PressureCertificates certs;
    std::vector<std::string> assumptions;
    std::optional<PeriodicPoint> z;
    if (o.tssm_gap) {
        certs.tssm_gap = *o.tssm_gap;
        certs.local_is_global = o.local_global;
        assumptions.push_back("tssm gap " + std::to_string(*o.tssm_gap) + " via user assertion");
        if (o.local_global)
            assumptions.push_back("local implies global via user assertion");
        std::vector<Coord> periods = o.periods;
        if (periods.empty())
            periods.assign(static_cast<std::size_t>(r.x.dim()), 2 * certs.tssm_gap);
        z = find_periodic_point(r.x, periods);
        if (!z)
            throw std::invalid_argument(
                "no periodic point found for the default periods; pass --periods");
    } else {
        Backing b = backing_for(r.x, std::nullopt, o.periods, true);
        certs.tssm_gap = require_si(b);
        certs.local_is_global = b.ssf;
        assumptions = b.assumptions;
        if (b.ssf) assumptions.push_back("local implies global via ssf");
        z = b.z;
    }
    assumptions.push_back("full support via D-condition");

    PressureJob job;
    job.phi = r.phi;
    job.z = *z;
    job.certificates = certs;
    job.epsilon = o.epsilon;
    job.wall_seconds = o.wall_seconds;
    job.transfer.h_max = o.h_max;
    std::vector<int> schedule;
    if (o.n)
        schedule = {*o.n};
    else
        for (int n = 2; n <= o.n_max; ++n) schedule.push_back(n);
    if (schedule.empty()) throw std::invalid_argument("empty truncation schedule");

    Json trace = Json::array();
    std::vector<std::string> rows;
    std::optional<BoundPair> best;
    bool converged = false;
    for (int n : schedule) {
        Stopwatch step;
        BoundPair bp = pressure_bounds(job, n);
        const double dt = step.seconds();
        trace.push_back(Json{{"n", n},
                             {"lower", bp.lower},
                             {"upper", bp.upper},
                             {"width", bp.width()},
                             {"seconds", dt}});
        rows.push_back(std::to_string(n) + "," + std::to_string(bp.lower) + "," +
                       std::to_string(bp.upper) + "," + std::to_string(bp.width()) + "," +
                       std::to_string(dt));
        if (!best || bp.width() < best->width()) best = bp;
        if (best->width() <= o.epsilon) {
            converged = true;
            break;
        }
        if (sw.seconds() > o.wall_seconds) break;
    }
    if (o.n) converged = true;  // single-truncation mode has no target width

    Json result;
    result["lower"] = best->lower;
    result["upper"] = best->upper;
    result["width"] = best->width();
    result["n"] = best->n;
    result["converged"] = converged;
    result["trace"] = std::move(trace);
    write_csv(c.csv, "n,lower,upper,width,seconds", rows);
    return finish(c, "pressure", r.inputs, result, assumptions, sw.seconds(),
                  converged ? 0 : 3);
}

// --------------------------------------------------------------- ssm-profile

struct SsmProfileOpts {
    std::string geometry;  // interval | row | stripe; default by dimension
    int n_min = 1;
    int n_max = 6;
    std::string target, base;
    bool wsm = false;
    std::optional<int> si_gap;
    std::vector<Coord> periods;
};

int run_ssm_profile(const Common& c, const SsmProfileOpts& o) {
    Stopwatch sw;
    Resolved r = resolve_input(c);
    std::string geometry = o.geometry;
    if (geometry.empty()) geometry = r.x.dim() == 1 ? "interval" : "row";
    r.inputs["geometry"] = geometry;
    r.inputs["wsm"] = o.wsm;

    const Alphabet& alphabet = r.x.alphabet();
    const int target =
        o.target.empty() ? 0 : sftlab::detail::letter_of(alphabet, o.target);
    const int base = o.base.empty() ? 0 : sftlab::detail::letter_of(alphabet, o.base);

    std::function<ProfileGeometry(int)> family;
    if (geometry == "interval") {
        if (r.x.dim() != 1) throw std::invalid_argument("interval geometry needs d = 1");
        family = [target](int n) { return geometries::interval_1d(n, target); };
    } else if (geometry == "row") {
        if (r.x.dim() != 2) throw std::invalid_argument("row geometry needs d = 2");
        family = [base, target](int n) { return geometries::row_2d(n, base, target); };
    } else if (geometry == "stripe") {
        if (r.x.dim() != 2) throw std::invalid_argument("stripe geometry needs d = 2");
        family = [](int n) { return geometries::c4_stripe(n); };
    } else {
        throw std::invalid_argument("unknown geometry: " + geometry);
    }

    std::vector<std::string> assumptions;
    std::optional<Admissibility> adm;
    if (r.x.dim() == 1) {
        adm = Admissibility::with_one_dim(r.x);
    } else {
        Backing b = backing_for(r.x, o.si_gap, o.periods, true);
        if (b.ssf && !o.si_gap) {
            adm = Admissibility::with_local_shortcut(r.x);
            assumptions.push_back("local implies global via ssf");
        } else {
            adm = Admissibility::with_solver(r.x, require_si(b), *b.z);
            assumptions = b.assumptions;
        }
    }

    std::vector<int> ns;
    for (int n = o.n_min; n <= o.n_max; ++n) ns.push_back(n);
    DecayProfile prof = o.wsm ? wsm_profile(r.phi, *adm, family, ns)
                              : ssm_profile(r.phi, *adm, family, ns);

    Json result;
    result["distances"] = prof.distances;
    result["max_discrepancy"] = prof.max_discrepancy;
    result["fit"] = Json{{"c", prof.c}, {"alpha", prof.alpha}, {"residual", prof.residual}};
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < ns.size() && i < prof.max_discrepancy.size(); ++i)
        rows.push_back(std::to_string(ns[i]) + "," + std::to_string(prof.max_discrepancy[i]));
    write_csv(c.csv, "n,max_discrepancy", rows);
    return finish(c, "ssm-profile", r.inputs, result, assumptions, sw.seconds(), 0);
}

// --------------------------------------------------------------- rate-bounds

struct RateOpts {
    int g = 1;
    int d = 2;
    double lambda = 0.0;
    std::optional<int> alphabet_size;
};

int run_rate(const Common& c, const RateOpts& o) {
    Stopwatch sw;
    Json inputs;
    inputs["g"] = o.g;
    inputs["d"] = o.d;
    inputs["lambda"] = o.lambda;
    RateCertificate rc = lipschitz_ssm_rate(o.g, o.d, o.lambda);
    Json result;
    result["beta"] = rc.beta;
    result["alpha"] = rc.alpha;
    result["C"] = rc.guaranteed ? Json(rc.c) : Json(nullptr);
    result["guaranteed"] = rc.guaranteed;
    result["lambda_pub"] = rc.lambda_pub.str();
    if (o.alphabet_size) {
        inputs["alphabet_size"] = *o.alphabet_size;
        result["tssm_if_ssm"] = rate_implies_tssm(rc.alpha, *o.alphabet_size, o.d);
    }
    return finish(c, "rate-bounds", inputs, result, {}, sw.seconds(), 0);
}

// -------------------------------------------------------------------- models

int run_models(const Common& c) {
    Stopwatch sw;
    Json list = Json::array();
    for (const ModelSpec& spec : model_registry())
        list.push_back(Json{{"name", spec.name}, {"params", spec.params}});
    Json result;
    result["models"] = std::move(list);
    return finish(c, "models", Json::object(), result, {}, sw.seconds(), 0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision procedures and rigorous bounds for nearest-neighbour SFTs"};
    app.require_subcommand(1);
    Common common;

    auto* cmd_admissible =
        app.add_subcommand("admissible", "local and global admissibility of a pattern");
    AdmissibleOpts admissible_opts;
    add_input_flags(cmd_admissible, common);
    cmd_admissible->add_option("--pattern", admissible_opts.pattern,
                               "pattern (inline JSON or file path)")
        ->required();
    cmd_admissible->add_flag("--local-only", admissible_opts.local_only,
                             "skip the global admissibility check");
    cmd_admissible->add_option("--si-gap", admissible_opts.si_gap,
                               "asserted strong irreducibility gap");
    cmd_admissible->add_option("--periods", admissible_opts.periods, "periodic point periods")
        ->delimiter(',');

    auto* cmd_certify = app.add_subcommand("certify", "mixing certificate chain");
    CertifyOpts certify_opts;
    add_input_flags(cmd_certify, common);
    cmd_certify->add_option("--tssm-gap", certify_opts.tssm_gap,
                            "additionally run the exhaustive TSSM check at this gap");
    cmd_certify->add_option("--si-gap", certify_opts.si_gap,
                            "asserted strong irreducibility gap");
    cmd_certify->add_option("--periods", certify_opts.periods, "periodic point periods")
        ->delimiter(',');
    cmd_certify->add_option("--fill-n-max", certify_opts.fill_n_max,
                            "largest cube tried for fillability");
    cmd_certify->add_option("--node-budget", certify_opts.node_budget, "solver node budget");
    cmd_certify->add_option("--wall-seconds", certify_opts.wall_seconds,
                            "wall-clock budget for the TSSM check");

    auto* cmd_search = app.add_subcommand("tssm-search", "hunt for a TSSM violation");
    TssmSearchOpts search_opts;
    add_input_flags(cmd_search, common);
    cmd_search->add_option("--gap", search_opts.gap, "TSSM gap to refute")->required();
    cmd_search->add_option("--si-gap", search_opts.si_gap, "asserted strong irreducibility gap");
    cmd_search->add_option("--periods", search_opts.periods, "periodic point periods")
        ->delimiter(',');
    cmd_search
        ->add_option("--strategy", search_opts.strategies,
                     "singletons | stripes | rows | combs (repeatable)")
        ->delimiter(',');
    cmd_search->add_option("--extent", search_opts.extent, "maximal premise extent");

    auto* cmd_offenders = app.add_subcommand("offenders", "first offenders up to a diameter");
    OffendersOpts offenders_opts;
    add_input_flags(cmd_offenders, common);
    cmd_offenders->add_option("--diameter", offenders_opts.diameter, "diameter bound");
    cmd_offenders->add_option("--si-gap", offenders_opts.si_gap,
                              "asserted strong irreducibility gap");
    cmd_offenders->add_option("--periods", offenders_opts.periods, "periodic point periods")
        ->delimiter(',');
    cmd_offenders->add_option("--node-budget", offenders_opts.node_budget, "solver node budget");

    auto* cmd_periodic = app.add_subcommand("periodic", "search for a periodic point");
    PeriodicOpts periodic_opts;
    add_input_flags(cmd_periodic, common);
    cmd_periodic->add_option("--periods", periodic_opts.periods, "periods per axis")
        ->delimiter(',');
    cmd_periodic->add_option("--node-budget", periodic_opts.node_budget, "solver node budget");

    auto* cmd_pivot = app.add_subcommand("pivot", "pivot path between two patterns");
    PivotOpts pivot_opts;
    add_input_flags(cmd_pivot, common);
    cmd_pivot->add_option("--from", pivot_opts.from, "start pattern (inline JSON or path)")
        ->required();
    cmd_pivot->add_option("--to", pivot_opts.to, "end pattern (inline JSON or path)")
        ->required();
    cmd_pivot->add_option("--gap", pivot_opts.gap, "TSSM gap for the pivot neighbourhoods")
        ->required();
    cmd_pivot->add_option("--si-gap", pivot_opts.si_gap, "asserted strong irreducibility gap");
    cmd_pivot->add_option("--periods", pivot_opts.periods, "periodic point periods")
        ->delimiter(',');

    auto* cmd_entropy = app.add_subcommand("entropy-bounds", "entropy bounds and 1D exact value");
    EntropyOpts entropy_opts;
    add_input_flags(cmd_entropy, common);
    cmd_entropy->add_option("--n-max", entropy_opts.n_max, "largest block radius in the series");
    cmd_entropy->add_option("--state-budget", entropy_opts.state_budget,
                            "transfer state budget");

    auto* cmd_pressure = app.add_subcommand("pressure", "rigorous pressure bracket");
    PressureOpts pressure_opts;
    add_input_flags(cmd_pressure, common);
    cmd_pressure->add_option("--epsilon", pressure_opts.epsilon, "target bracket width");
    cmd_pressure->add_option("--n", pressure_opts.n, "single truncation radius");
    cmd_pressure->add_option("--n-max", pressure_opts.n_max, "largest truncation radius");
    cmd_pressure->add_option("--tssm-gap", pressure_opts.tssm_gap,
                             "asserted TSSM gap (skips the certificate chain)");
    cmd_pressure->add_flag("--local-global", pressure_opts.local_global,
                           "assert that local admissibility implies global");
    cmd_pressure->add_option("--periods", pressure_opts.periods, "periodic point periods")
        ->delimiter(',');
    cmd_pressure->add_option("--wall-seconds", pressure_opts.wall_seconds, "wall-clock budget");
    cmd_pressure->add_option("--h-max", pressure_opts.h_max, "transfer column height cap");

    auto* cmd_profile = app.add_subcommand("ssm-profile", "finite-volume mixing decay profile");
    SsmProfileOpts profile_opts;
    add_input_flags(cmd_profile, common);
    cmd_profile->add_option("--geometry", profile_opts.geometry, "interval | row | stripe");
    cmd_profile->add_option("--n-min", profile_opts.n_min, "smallest instance");
    cmd_profile->add_option("--n-max", profile_opts.n_max, "largest instance");
    cmd_profile->add_option("--target", profile_opts.target, "target letter label");
    cmd_profile->add_option("--base", profile_opts.base, "base letter label (row geometry)");
    cmd_profile->add_flag("--wsm", profile_opts.wsm, "whole-boundary variant");
    cmd_profile->add_option("--si-gap", profile_opts.si_gap,
                            "asserted strong irreducibility gap");
    cmd_profile->add_option("--periods", profile_opts.periods, "periodic point periods")
        ->delimiter(',');

    auto* cmd_rate = app.add_subcommand("rate-bounds", "decay-rate certificate arithmetic");
    RateOpts rate_opts;
    cmd_rate->add_option("--g", rate_opts.g, "interaction range");
    cmd_rate->add_option("--d", rate_opts.d, "lattice dimension");
    cmd_rate->add_option("--lambda", rate_opts.lambda, "activity")->required();
    cmd_rate->add_option("--alphabet-size", rate_opts.alphabet_size,
                         "also compare against the TSSM threshold");
    cmd_rate->add_flag("--table", common.table, "human-readable output");

    auto* cmd_models = app.add_subcommand("models", "list the model registry");
    cmd_models->add_flag("--table", common.table, "human-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    auto fail = [&](const std::string& message, int code) {
        Json result;
        result["error"] = message;
        return finish(common, sub, Json::object(), result, {}, 0.0, code);
    };
    try {
        if (app.got_subcommand(cmd_admissible)) return run_admissible(common, admissible_opts);
        if (app.got_subcommand(cmd_certify)) return run_certify(common, certify_opts);
        if (app.got_subcommand(cmd_search)) return run_tssm_search(common, search_opts);
        if (app.got_subcommand(cmd_offenders)) return run_offenders(common, offenders_opts);
        if (app.got_subcommand(cmd_periodic)) return run_periodic(common, periodic_opts);
        if (app.got_subcommand(cmd_pivot)) return run_pivot(common, pivot_opts);
        if (app.got_subcommand(cmd_entropy)) return run_entropy(common, entropy_opts);
        if (app.got_subcommand(cmd_pressure)) return run_pressure(common, pressure_opts);
        if (app.got_subcommand(cmd_profile)) return run_ssm_profile(common, profile_opts);
        if (app.got_subcommand(cmd_rate)) return run_rate(common, rate_opts);
        if (app.got_subcommand(cmd_models)) return run_models(common);
    } catch (const BudgetExceeded& e) {
        return fail(e.what(), 3);
    } catch (const CertificateViolation& e) {
        return fail(e.what(), 2);
    } catch (const std::domain_error& e) {
        return fail(e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return fail(e.what(), 4);
    } catch (const std::exception& e) {
        return fail(e.what(), 4);
    }
    return 4;
}
