// ncg-forge: batch interface for the finite noncommutative-geometry
// workbench. Loads self-describing JSON documents, runs the validators,
// distance solver and duality constructions, and emits deterministic
// reports (identical invocations produce identical bytes).
//
// Exit codes: 0 all checks passed, 1 axiom/validation failure,
// 2 schema or load error.

#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"

#include "ncg/json_io.hpp"

using namespace ncg;

namespace {

struct GlobalOptions {
    double tol = 1e-9;
    std::string format = "human";
};

void print_report(const Report& rep, const GlobalOptions& opts) {
    if (opts.format == "json") {
        write_json(std::cout, report_to_json(rep));
        return;
    }
    std::cout << "== " << rep.subject << " ==\n";
    for (const auto& e : rep.entries) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", e.residual);
        std::cout << "[" << to_string(e.status) << "] " << e.name
                  << "  residual=" << buf;
        if (!e.detail.empty()) std::cout << "  (" << e.detail << ")";
        std::cout << "\n";
    }
    std::cout << (rep.passed() ? "PASSED" : "FAILED") << "\n";
}

// classification entries describe properties, not validity
bool gate_passed(const Report& rep) {
    for (const auto& e : rep.entries) {
        if (e.name == "orientable" || e.name == "irreducible") continue;
        if (e.status == CheckStatus::Fail) return false;
    }
    return true;
}

int cmd_validate(const std::string& path, const GlobalOptions& opts) {
    const auto doc = load_document(path);
    Report rep;
    bool ok = false;
    if (doc.kind == "triple") {
        const auto t = triple_from_json(doc.payload);
        rep = axiom_report(t, opts.tol);
        ok = gate_passed(rep);
    } else if (doc.kind == "category") {
        const auto c = category_from_json(doc.payload);
        rep = validate_category(c, opts.tol);
        ok = rep.passed();
    } else if (doc.kind == "spaceoid") {
        const auto s = spaceoid_from_json(doc.payload);
        rep = validate_spaceoid(s, opts.tol);
        ok = rep.passed();
    } else if (doc.kind == "bimodule") {
        const auto m = bimodule_from_json(doc.payload);
        rep.subject = "bimodule";
        rep.add("constructible", CheckStatus::Pass, 0.0);
        rep.add("left-full",
                is_full(m, ModuleSide::Left, opts.tol) ? CheckStatus::Pass
                                                       : CheckStatus::Fail,
                0.0, "classification");
        rep.add("right-full",
                is_full(m, ModuleSide::Right, opts.tol) ? CheckStatus::Pass
                                                        : CheckStatus::Fail,
                0.0, "classification");
        rep.add("imprimitivity",
                is_imprimitivity(m, opts.tol) ? CheckStatus::Pass : CheckStatus::Fail,
                0.0, "classification");
        ok = true; // classification only
    } else {
        throw SchemaError("unknown document kind '" + doc.kind + "'");
    }
    print_report(rep, opts);
    return ok ? 0 : 1;
}

int cmd_distance(const std::string& path, const std::string& selectors, bool oracle,
                 const GlobalOptions& opts) {
    const auto doc = load_document(path);
    if (doc.kind != "triple") throw SchemaError("distance expects a triple document");
    const auto t = triple_from_json(doc.payload);

    std::vector<PureState> states;
    if (doc.payload.contains("states")) {
        for (const auto& sj : doc.payload.at("states"))
            states.push_back(state_from_json(t.algebra(), sj));
    } else {
        if (!t.algebra().is_commutative())
            throw SchemaError("non-commutative algebra: supply a 'states' list");
        for (const auto& c : spectrum(t.algebra()))
            states.push_back(PureState::from_character(c));
    }
    if (!selectors.empty()) {
        std::vector<PureState> picked;
        std::istringstream iss(selectors);
        std::string tok;
        while (std::getline(iss, tok, ',')) {
            const std::size_t i = std::stoul(tok);
            if (i >= states.size()) throw SchemaError("state selector out of range");
            picked.push_back(states[i]);
        }
        states = std::move(picked);
    }

    Json out;
    out["states"] = states.size();
    Json entries = Json::array();
    bool ok = true;
    if (states.size() == 1) {
        Json e;
        e["i"] = 0;
        e["j"] = 0;
        e["value"] = 0.0;
        entries.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            const auto res = connes_distance(t, states[i], states[j], opts.tol);
            Json e;
            e["i"] = i;
            e["j"] = j;
            if (res.infinite())
                e["value"] = "inf";
            else
                e["value"] = res.value;
            e["certified_gap"] = res.certified_gap;
            e["witness"] = element_to_json(res.optimizer);
            if (oracle && !res.infinite() && t.algebra().dim() <= 6) {
                double peak = 1e-3;
                for (const auto& co : res.optimizer.coords())
                    peak = std::max(peak, std::abs(co));
                const double radius = 1.5 * peak;
                const std::size_t steps = t.algebra().dim() <= 3 ? 41 : 15;
                const double reference =
                    distance_oracle(t, states[i], states[j], radius, steps);
                e["oracle"] = reference;
                if (reference > res.value + 1e-6) ok = false;
            }
            entries.push_back(std::move(e));
        }
    out["entries"] = std::move(entries);
    if (opts.format == "json") {
        write_json(std::cout, out);
    } else {
        for (const auto& e : out["entries"]) {
            std::cout << "d(" << e["i"] << "," << e["j"] << ") = ";
            if (e["value"].is_string())
                std::cout << "inf";
            else {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.12g", e["value"].get<double>());
                std::cout << buf;
            }
            if (e.contains("oracle")) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.12g", e["oracle"].get<double>());
                std::cout << "  (oracle >= " << buf << ")";
            }
            std::cout << "\n";
        }
    }
    return ok ? 0 : 1;
}

int cmd_dualize(const std::string& path, bool roundtrip, const GlobalOptions& opts) {
    const auto doc = load_document(path);
    if (doc.kind == "category") {
        const auto c = category_from_json(doc.payload);
        const auto sigma = sigma_spaceoid(c, opts.tol);
        if (roundtrip) {
            const auto res = gelfand_transform_cat(c, opts.tol);
            const bool iso = res.report.passed();
            if (opts.format == "json") {
                Json j;
                j["isomorphic"] = iso;
                j["report"] = report_to_json(res.report);
                write_json(std::cout, j);
            } else {
                std::cout << "isomorphic: " << (iso ? "true" : "false") << "\n";
            }
            return iso ? 0 : 1;
        }
        write_json(std::cout, envelope("spaceoid", spaceoid_to_json(sigma.spaceoid)));
        return 0;
    }
    if (doc.kind == "spaceoid") {
        const auto s = spaceoid_from_json(doc.payload);
        const auto gamma = gamma_sections(s, opts.tol);
        if (roundtrip) {
            const auto res = evaluation_transform(s, opts.tol);
            const bool iso = res.report.passed();
            if (opts.format == "json") {
                Json j;
                j["isomorphic"] = iso;
                j["report"] = report_to_json(res.report);
                write_json(std::cout, j);
            } else {
                std::cout << "isomorphic: " << (iso ? "true" : "false") << "\n";
            }
            return iso ? 0 : 1;
        }
        write_json(std::cout, envelope("category", category_to_json(gamma.category)));
        return 0;
    }
    throw SchemaError("dualize expects a category or spaceoid document");
}

int cmd_morphism(const std::string& path, const GlobalOptions& opts) {
    const auto doc = load_document(path);
    if (doc.kind != "morphism") throw SchemaError("morphism expects a morphism document");
    const auto pos = path.find_last_of('/');
    const std::string base_dir = pos == std::string::npos ? "." : path.substr(0, pos);
    const auto m = morphism_from_json(doc.payload, base_dir);

    TripleMorphism tm{m.source, m.target, m.phi, m.intertwiner, m.flags};
    bool ok = true;
    Report combined;
    combined.subject = "morphism-flavors";
    for (const auto& flavor : m.flavors) {
        Report rep;
        if (flavor == "tgs") {
            rep = validate_tgs(tm, opts.tol);
        } else if (flavor == "riemannian") {
            rep = validate_riemannian(tm, opts.tol);
        } else if (flavor == "metric") {
            rep = validate_metric(tm, std::max(opts.tol, 1e-6));
        } else {
            throw SchemaError("unknown flavor '" + flavor + "'");
        }
        const bool passed = rep.passed();
        ok = ok && passed;
        combined.add(flavor, passed ? CheckStatus::Pass : CheckStatus::Fail,
                     rep.worst_residual(), [&] {
                         std::string detail;
                         for (const auto& e : rep.entries)
                             if (e.status == CheckStatus::Fail) {
                                 if (!detail.empty()) detail += "; ";
                                 detail += e.name;
                                 if (!e.detail.empty()) detail += " [" + e.detail + "]";
                             }
                         return detail;
                     }());
    }
    print_report(combined, opts);
    return ok ? 0 : 1;
}

int cmd_report(std::uint64_t seed, std::size_t count, const GlobalOptions& opts) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Report rep;
    rep.subject = "property-sweep";

    // duality round trips on random section categories
    double worst_duality = 0.0;
    bool duality_ok = true;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t nx = 1 + rng() % 3;
        const std::size_t no = 1 + rng() % 2;
        std::vector<std::string> names;
        for (std::size_t a = 0; a < no; ++a) names.push_back(std::string(1, char('A' + a)));
        auto s = Spaceoid::trivial(nx, names);
        // coherent random gauge phases
        std::vector<Complex> gauge(nx * no * no);
        for (auto& z : gauge) {
            const double t = std::uniform_real_distribution<double>(0, 6.2831853)(rng);
            z = Complex(std::cos(t), std::sin(t));
        }
        for (std::size_t p = 0; p < nx; ++p)
            for (std::size_t a = 0; a < no; ++a)
                for (std::size_t b = 0; b < no; ++b) {
                    const Complex gab = gauge[(p * no + a) * no + b];
                    const Complex gba = gauge[(p * no + b) * no + a];
                    s.iota_ref(p, a, b) = std::conj(gab) * std::conj(gba);
                    for (std::size_t c = 0; c < no; ++c) {
                        const Complex gbc = gauge[(p * no + b) * no + c];
                        const Complex gac = gauge[(p * no + a) * no + c];
                        s.mu_ref(p, a, b, c) = gab * gbc / gac;
                    }
                }
        const auto ev = evaluation_transform(s, opts.tol);
        duality_ok = duality_ok && ev.report.passed();
        worst_duality = std::max(worst_duality, ev.report.worst_residual());
        const auto gt = gelfand_transform_cat(gamma_sections(s, opts.tol).category,
                                              opts.tol);
        duality_ok = duality_ok && gt.report.passed();
        worst_duality = std::max(worst_duality, gt.report.worst_residual());
    }
    rep.add("duality-round-trips", duality_ok ? CheckStatus::Pass : CheckStatus::Fail,
            worst_duality, std::to_string(count) + " random spaceoids");

    // distance symmetry on random commutative triples
    double worst_sym = 0.0;
    bool dist_ok = true;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t n = 2 + rng() % 2;
        const FiniteCStarAlgebra a(std::vector<std::size_t>(n, 1));
        ComplexMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const Complex z(g(rng), i == j ? 0.0 : g(rng));
                d(i, j) = z;
                d(j, i) = std::conj(z);
            }
        const SpectralTriple t(Representation::standard(a), d);
        const auto w0 = PureState::from_character(Character(a, 0));
        const auto w1 = PureState::from_character(Character(a, 1));
        const auto d01 = connes_distance(t, w0, w1, 1e-9);
        const auto d10 = connes_distance(t, w1, w0, 1e-9);
        if (d01.infinite() != d10.infinite()) dist_ok = false;
        if (!d01.infinite()) {
            worst_sym = std::max(worst_sym, std::abs(d01.value - d10.value));
            if (std::abs(d01.value - d10.value) > 2e-6) dist_ok = false;
        }
    }
    rep.add("distance-symmetry", dist_ok ? CheckStatus::Pass : CheckStatus::Fail,
            worst_sym, std::to_string(count) + " random triples");

    // imprimitivity reconstruction on random line bimodules
    bool imp_ok = true;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t n = 1 + rng() % 5;
        std::vector<std::size_t> sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        for (std::size_t i = n; i > 1; --i)
            std::swap(sigma[i - 1], sigma[rng() % i]);
        std::vector<Complex> phases(n);
        for (auto& z : phases) {
            const double t = std::uniform_real_distribution<double>(0, 6.2831853)(rng);
            z = Complex(std::cos(t), std::sin(t));
        }
        const auto dec =
            spectral_decomposition(HilbertBimodule::line_bimodule(sigma, phases));
        imp_ok = imp_ok && dec.sigma == sigma && dec.residual <= 1e-9;
    }
    rep.add("imprimitivity-reconstruction",
            imp_ok ? CheckStatus::Pass : CheckStatus::Fail, 0.0,
            std::to_string(count) + " random permutations");

    print_report(rep, opts);
    return rep.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite noncommutative geometry workbench"};
    app.require_subcommand(1);

    GlobalOptions opts;
    if (const char* env = std::getenv("NCG_FORGE_TOL")) opts.tol = std::atof(env);
    app.add_option("--tol", opts.tol, "global comparison tolerance");
    app.add_option("--format", opts.format, "output format: human or json")
        ->check(CLI::IsMember({"human", "json"}));

    std::string path, selectors;
    bool oracle = false, roundtrip = false;
    std::uint64_t seed = 0;
    std::size_t count = 10;

    auto* validate = app.add_subcommand("validate", "run the axiom validators");
    validate->add_option("file", path)->required();

    auto* distance = app.add_subcommand("distance", "Connes distance matrix");
    distance->add_option("file", path)->required();
    distance->add_option("--states", selectors, "comma-separated state indices");
    distance->add_flag("--oracle", oracle, "cross-check against the grid oracle");

    auto* dualize = app.add_subcommand("dualize", "apply Sigma or Gamma");
    dualize->add_option("file", path)->required();
    dualize->add_flag("--roundtrip", roundtrip,
                      "dualize twice and compare-isomorphic");

    auto* morphism = app.add_subcommand("morphism", "validate morphism flavors");
    morphism->add_option("file", path)->required();

    auto* report = app.add_subcommand("report", "randomized property sweep");
    report->add_option("--seed", seed, "sweep seed");
    report->add_option("--count", count, "instances per property");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(path, opts);
        if (app.got_subcommand(distance)) return cmd_distance(path, selectors, oracle, opts);
        if (app.got_subcommand(dualize)) return cmd_dualize(path, roundtrip, opts);
        if (app.got_subcommand(morphism)) return cmd_morphism(path, opts);
        if (app.got_subcommand(report)) return cmd_report(seed, count, opts);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
