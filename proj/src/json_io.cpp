#include "ncg/json_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ncg {

namespace {

[[noreturn]] void schema_fail(const std::string& msg) { throw SchemaError(msg); }

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        schema_fail(where + ": missing field '" + key + "'");
    return j.at(key);
}

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema_fail(where + ": complex numbers are [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

} // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema_fail(where + ": matrix must be a nonempty array");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        schema_fail(where + ": matrix rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) schema_fail(where + ": ragged matrix");
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(j[i][k], where);
    }
    return m;
}

Json triple_to_json(const SpectralTriple& t) {
    Json j;
    j["algebra"] = Json{{"blocks", t.algebra().block_dims()}};
    j["multiplicities"] = t.rep().multiplicities();
    j["basis_change"] = matrix_to_json(t.rep().basis_change());
    j["dirac"] = matrix_to_json(t.dirac());
    j["grading"] = t.grading() ? matrix_to_json(*t.grading()) : Json(nullptr);
    j["real_structure"] =
        t.real_structure()
            ? Json{{"unitary", matrix_to_json(t.real_structure()->unitary_part())}}
            : Json(nullptr);
    j["ko_dim"] = t.ko_dimension() ? Json(*t.ko_dimension()) : Json(nullptr);
    return j;
}

SpectralTriple triple_from_json(const Json& j) {
    const auto& alg = field(j, "algebra", "triple");
    const auto& blocks = field(alg, "blocks", "triple.algebra");
    if (!blocks.is_array() || blocks.empty()) schema_fail("triple.algebra.blocks: bad array");
    std::vector<std::size_t> dims;
    for (const auto& b : blocks) {
        if (!b.is_number_unsigned() || b.get<std::size_t>() == 0)
            schema_fail("triple.algebra.blocks: entries must be positive integers");
        dims.push_back(b.get<std::size_t>());
    }
    FiniteCStarAlgebra algebra(dims);

    const auto& mj = field(j, "multiplicities", "triple");
    if (!mj.is_array() || mj.size() != dims.size())
        schema_fail("triple.multiplicities: one entry per block required");
    std::vector<std::size_t> mults;
    for (const auto& m : mj) {
        if (!m.is_number_unsigned()) schema_fail("triple.multiplicities: bad entry");
        mults.push_back(m.get<std::size_t>());
    }
    auto basis_change = matrix_from_json(field(j, "basis_change", "triple"),
                                         "triple.basis_change");
    Representation rep(algebra, mults, std::move(basis_change));

    auto dirac = matrix_from_json(field(j, "dirac", "triple"), "triple.dirac");

    std::optional<ComplexMatrix> grading;
    if (j.contains("grading") && !j.at("grading").is_null())
        grading = matrix_from_json(j.at("grading"), "triple.grading");

    std::optional<AntiunitaryOperator> real;
    if (j.contains("real_structure") && !j.at("real_structure").is_null())
        real = AntiunitaryOperator(matrix_from_json(
            field(j.at("real_structure"), "unitary", "triple.real_structure"),
            "triple.real_structure.unitary"));

    std::optional<int> ko;
    if (j.contains("ko_dim") && !j.at("ko_dim").is_null()) {
        if (!j.at("ko_dim").is_number_integer()) schema_fail("triple.ko_dim: integer");
        ko = j.at("ko_dim").get<int>();
    }
    return SpectralTriple(std::move(rep), std::move(dirac), std::move(grading),
                          std::move(real), ko);
}

Json category_to_json(const FiniteCStarCategory& c) {
    Json j;
    j["objects"] = c.objects();
    Json dims;
    for (std::size_t a = 0; a < c.object_count(); ++a)
        dims[c.objects()[a]] = c.hilbert_dims()[a];
    j["hilbert_dims"] = std::move(dims);
    Json homs;
    for (std::size_t a = 0; a < c.object_count(); ++a)
        for (std::size_t b = 0; b < c.object_count(); ++b) {
            Json basis = Json::array();
            for (const auto& m : c.hom_basis(a, b)) basis.push_back(matrix_to_json(m));
            homs[c.objects()[a] + "," + c.objects()[b]] = std::move(basis);
        }
    j["hom_bases"] = std::move(homs);
    return j;
}

FiniteCStarCategory category_from_json(const Json& j) {
    const auto& oj = field(j, "objects", "category");
    if (!oj.is_array() || oj.empty()) schema_fail("category.objects: nonempty array");
    std::vector<std::string> objects;
    for (const auto& o : oj) {
        if (!o.is_string()) schema_fail("category.objects: names must be strings");
        objects.push_back(o.get<std::string>());
    }
    const auto& dj = field(j, "hilbert_dims", "category");
    std::vector<std::size_t> dims;
    for (const auto& name : objects) {
        if (!dj.contains(name)) schema_fail("category.hilbert_dims: missing '" + name + "'");
        dims.push_back(dj.at(name).get<std::size_t>());
    }
    const auto& hj = field(j, "hom_bases", "category");
    std::vector<std::vector<ComplexMatrix>> homs(objects.size() * objects.size());
    for (std::size_t a = 0; a < objects.size(); ++a)
        for (std::size_t b = 0; b < objects.size(); ++b) {
            const std::string key = objects[a] + "," + objects[b];
            if (!hj.contains(key)) continue; // empty hom space
            const auto& basis = hj.at(key);
            if (!basis.is_array()) schema_fail("category.hom_bases['" + key + "']: array");
            for (const auto& m : basis)
                homs[a * objects.size() + b].push_back(
                    matrix_from_json(m, "category.hom_bases['" + key + "']"));
        }
    return FiniteCStarCategory(std::move(objects), std::move(dims), std::move(homs));
}

Json spaceoid_to_json(const Spaceoid& s) {
    Json j;
    j["base_points"] = s.base_points();
    j["objects"] = s.objects();
    Json mu, iota;
    const auto& names = s.objects();
    for (std::size_t p = 0; p < s.base_points(); ++p)
        for (std::size_t a = 0; a < s.object_count(); ++a)
            for (std::size_t b = 0; b < s.object_count(); ++b) {
                const Complex iv = s.iota(p, a, b);
                if (std::abs(iv - Complex(1.0, 0.0)) > 0.0)
                    iota[std::to_string(p) + ":" + names[a] + ":" + names[b]] =
                        complex_to_json(iv);
                for (std::size_t c = 0; c < s.object_count(); ++c) {
                    const Complex mv = s.mu(p, a, b, c);
                    if (std::abs(mv - Complex(1.0, 0.0)) > 0.0)
                        mu[std::to_string(p) + ":" + names[a] + ":" + names[b] + ":" +
                           names[c]] = complex_to_json(mv);
                }
            }
    j["mu"] = mu.is_null() ? Json::object() : std::move(mu);
    j["iota"] = iota.is_null() ? Json::object() : std::move(iota);
    return j;
}

Spaceoid spaceoid_from_json(const Json& j) {
    const auto& bp = field(j, "base_points", "spaceoid");
    if (!bp.is_number_unsigned() || bp.get<std::size_t>() == 0)
        schema_fail("spaceoid.base_points: positive integer");
    const auto& oj = field(j, "objects", "spaceoid");
    if (!oj.is_array() || oj.empty()) schema_fail("spaceoid.objects: nonempty array");
    std::vector<std::string> objects;
    for (const auto& o : oj) objects.push_back(o.get<std::string>());
    auto index_of = [&](const std::string& name, const std::string& where) {
        for (std::size_t k = 0; k < objects.size(); ++k)
            if (objects[k] == name) return k;
        schema_fail(where + ": unknown object '" + name + "'");
    };

    auto s = Spaceoid::trivial(bp.get<std::size_t>(), objects);
    if (j.contains("mu")) {
        for (const auto& [key, value] : j.at("mu").items()) {
            std::istringstream iss(key);
            std::string ps, as, bs, cs;
            if (!std::getline(iss, ps, ':') || !std::getline(iss, as, ':') ||
                !std::getline(iss, bs, ':') || !std::getline(iss, cs, ':'))
                schema_fail("spaceoid.mu: keys look like 'p:A:B:C'");
            const std::size_t p = std::stoul(ps);
            if (p >= s.base_points()) schema_fail("spaceoid.mu: point out of range");
            s.mu_ref(p, index_of(as, "spaceoid.mu"), index_of(bs, "spaceoid.mu"),
                     index_of(cs, "spaceoid.mu")) = complex_from_json(value, "spaceoid.mu");
        }
    }
    if (j.contains("iota")) {
        for (const auto& [key, value] : j.at("iota").items()) {
            std::istringstream iss(key);
            std::string ps, as, bs;
            if (!std::getline(iss, ps, ':') || !std::getline(iss, as, ':') ||
                !std::getline(iss, bs, ':'))
                schema_fail("spaceoid.iota: keys look like 'p:A:B'");
            const std::size_t p = std::stoul(ps);
            if (p >= s.base_points()) schema_fail("spaceoid.iota: point out of range");
            s.iota_ref(p, index_of(as, "spaceoid.iota"), index_of(bs, "spaceoid.iota")) =
                complex_from_json(value, "spaceoid.iota");
        }
    }
    return s;
}

Json bimodule_to_json(const HilbertBimodule& m) {
    Json j;
    j["left_blocks"] = m.left_blocks();
    j["right_blocks"] = m.right_blocks();
    Json comps = Json::array();
    for (const auto& c : m.components()) {
        Json cj;
        cj["i"] = c.i;
        cj["j"] = c.j;
        cj["dim"] = c.dim();
        cj["basis"] = matrix_to_json(c.basis);
        cj["gram"] = matrix_to_json(c.gram());
        comps.push_back(std::move(cj));
    }
    j["components"] = std::move(comps);
    return j;
}

HilbertBimodule bimodule_from_json(const Json& j) {
    const std::size_t m = field(j, "left_blocks", "bimodule").get<std::size_t>();
    const std::size_t n = field(j, "right_blocks", "bimodule").get<std::size_t>();
    std::vector<BimoduleComponent> comps;
    for (const auto& cj : field(j, "components", "bimodule")) {
        BimoduleComponent comp;
        comp.i = field(cj, "i", "bimodule.component").get<std::size_t>();
        comp.j = field(cj, "j", "bimodule.component").get<std::size_t>();
        if (cj.contains("basis")) {
            comp.basis = matrix_from_json(cj.at("basis"), "bimodule.component.basis");
        } else if (cj.contains("gram")) {
            // factor a Hermitian positive definite Gram matrix as B^H B
            const auto g = matrix_from_json(cj.at("gram"), "bimodule.component.gram");
            const auto eig = hermitian_eig(g, 1e-8);
            ComplexMatrix root(g.rows(), g.rows());
            for (std::size_t k = 0; k < eig.values.size(); ++k) {
                if (eig.values[k] <= 0.0)
                    schema_fail("bimodule.component.gram must be positive definite");
                for (std::size_t r = 0; r < g.rows(); ++r)
                    for (std::size_t cidx = 0; cidx < g.rows(); ++cidx)
                        root(r, cidx) += eig.vectors(r, k) *
                                         std::conj(eig.vectors(cidx, k)) *
                                         Complex(std::sqrt(eig.values[k]), 0.0);
            }
            comp.basis = root;
        } else {
            schema_fail("bimodule.component: needs 'basis' or 'gram'");
        }
        comps.push_back(std::move(comp));
    }
    return HilbertBimodule(m, n, std::move(comps));
}

Json report_to_json(const Report& r) {
    Json j;
    j["subject"] = r.subject;
    j["passed"] = r.passed();
    j["worst_residual"] = r.worst_residual();
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json ej;
        ej["name"] = e.name;
        ej["status"] = to_string(e.status);
        ej["residual"] = e.residual;
        if (!e.detail.empty()) ej["detail"] = e.detail;
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    return j;
}

Document load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema_fail("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        schema_fail("malformed JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string() ||
        !j.contains("payload"))
        schema_fail("'" + path + "': expected an envelope {\"kind\", \"payload\"}");
    return Document{j.at("kind").get<std::string>(), j.at("payload")};
}

Json envelope(const std::string& kind, Json payload) {
    Json j;
    j["kind"] = kind;
    j["payload"] = std::move(payload);
    return j;
}

namespace {

SpectralTriple triple_from_ref(const Json& j, const std::string& base_dir,
                               const std::string& where) {
    if (j.is_string()) {
        const std::string path = base_dir + "/" + j.get<std::string>();
        const auto doc = load_document(path);
        if (doc.kind != "triple")
            schema_fail(where + ": referenced document is not a triple");
        return triple_from_json(doc.payload);
    }
    if (j.is_object()) return triple_from_json(j);
    schema_fail(where + ": expected a path string or an inline triple");
}

} // namespace

MorphismDocument morphism_from_json(const Json& payload, const std::string& base_dir) {
    auto source = triple_from_ref(field(payload, "source", "morphism"), base_dir,
                                  "morphism.source");
    auto target = triple_from_ref(field(payload, "target", "morphism"), base_dir,
                                  "morphism.target");

    const auto& pj = field(payload, "phi", "morphism");
    std::optional<AlgebraHomomorphism> phi;
    if (pj.contains("index_map")) {
        std::vector<std::size_t> kappa;
        for (const auto& e : pj.at("index_map")) kappa.push_back(e.get<std::size_t>());
        phi = AlgebraHomomorphism::from_index_map(source.algebra(), target.algebra(),
                                                  std::move(kappa));
    } else if (pj.contains("matrix")) {
        phi = AlgebraHomomorphism::from_linear_map(
            source.algebra(), target.algebra(),
            matrix_from_json(pj.at("matrix"), "morphism.phi.matrix"));
    } else {
        schema_fail("morphism.phi: needs 'index_map' or 'matrix'");
    }

    auto inter = matrix_from_json(field(payload, "Phi", "morphism"), "morphism.Phi");
    MorphismFlags flags;
    if (payload.contains("flags")) {
        const auto& fj = payload.at("flags");
        flags.check_real = fj.value("check_real", false);
        flags.check_even = fj.value("check_even", false);
    }
    std::vector<std::string> flavors{"tgs", "riemannian", "metric"};
    if (payload.contains("flavors")) {
        flavors.clear();
        for (const auto& f : payload.at("flavors")) flavors.push_back(f.get<std::string>());
    }
    return MorphismDocument{std::move(source), std::move(target), std::move(*phi),
                            std::move(inter), flags, std::move(flavors)};
}

namespace {

void write_value(std::ostream& os, const Json& j, int indent);

void write_indent(std::ostream& os, int indent) {
    for (int i = 0; i < indent; ++i) os << ' ';
}

void write_number(std::ostream& os, double v) {
    if (std::isinf(v)) {
        os << (v > 0 ? "\"inf\"" : "\"-inf\"");
        return;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
}

void write_string(std::ostream& os, const std::string& s) {
    os << '"';
    for (char ch : s) {
        switch (ch) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\t': os << "\\t"; break;
        default: os << ch;
        }
    }
    os << '"';
}

void write_value(std::ostream& os, const Json& j, int indent) {
    switch (j.type()) {
    case Json::value_t::null: os << "null"; break;
    case Json::value_t::boolean: os << (j.get<bool>() ? "true" : "false"); break;
    case Json::value_t::number_integer: os << j.get<std::int64_t>(); break;
    case Json::value_t::number_unsigned: os << j.get<std::uint64_t>(); break;
    case Json::value_t::number_float: write_number(os, j.get<double>()); break;
    case Json::value_t::string: write_string(os, j.get<std::string>()); break;
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            break;
        }
        // matrices and short numeric arrays stay on one line
        bool flat = true;
        for (const auto& e : j)
            if (e.is_object() || (e.is_array() && !e.empty() && e[0].is_array()))
                flat = false;
        if (flat && j.size() <= 64) {
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << ", ";
                first = false;
                write_value(os, e, 0);
            }
            os << ']';
        } else {
            os << "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << ",\n";
                first = false;
                write_indent(os, indent + 2);
                write_value(os, e, indent + 2);
            }
            os << '\n';
            write_indent(os, indent);
            os << ']';
        }
        break;
    }
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            break;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            write_indent(os, indent + 2);
            write_string(os, key);
            os << ": ";
            write_value(os, value, indent + 2);
        }
        os << '\n';
        write_indent(os, indent);
        os << '}';
        break;
    }
    default: os << "null";
    }
}

} // namespace

void write_json(std::ostream& os, const Json& j) {
    write_value(os, j, 0);
    os << '\n';
}

std::string json_to_string(const Json& j) {
    std::ostringstream oss;
    write_json(oss, j);
    return oss.str();
}

PureState state_from_json(const FiniteCStarAlgebra& a, const Json& j) {
    const std::size_t block = field(j, "block", "state").get<std::size_t>();
    const auto& vj = field(j, "vector", "state");
    std::vector<Complex> xi;
    for (const auto& z : vj) xi.push_back(complex_from_json(z, "state.vector"));
    return PureState(a, block, std::move(xi));
}

Json state_to_json(const PureState& s) {
    Json j;
    j["block"] = s.block_index();
    Json v = Json::array();
    for (const auto& z : s.vector()) v.push_back(Json::array({z.real(), z.imag()}));
    j["vector"] = std::move(v);
    return j;
}

Json element_to_json(const AlgebraElement& e) {
    Json blocks = Json::array();
    for (const auto& b : e.blocks()) blocks.push_back(matrix_to_json(b));
    return blocks;
}

} // namespace ncg
