#pragma once

// JSON serialization for every document kind the CLI handles. All documents
// use a self-describing envelope {"kind": "...", "payload": {...}} so the
// validate command can dispatch on the kind. Output is written through a
// deterministic printer (12 significant digits, fixed key order, infinity
// as the literal string "inf") so identical invocations produce identical
// bytes.

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "ncg/bimodule.hpp"
#include "ncg/cstarcat.hpp"
#include "ncg/morphisms.hpp"
#include "ncg/report.hpp"
#include "ncg/spaceoid.hpp"
#include "ncg/triple.hpp"

namespace ncg {

using Json = nlohmann::ordered_json;

// matrices are nested arrays of [re, im] pairs
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);

Json triple_to_json(const SpectralTriple& t);
SpectralTriple triple_from_json(const Json& j);

Json category_to_json(const FiniteCStarCategory& c);
FiniteCStarCategory category_from_json(const Json& j);

Json spaceoid_to_json(const Spaceoid& s);
Spaceoid spaceoid_from_json(const Json& j);

Json bimodule_to_json(const HilbertBimodule& m);
HilbertBimodule bimodule_from_json(const Json& j);

Json report_to_json(const Report& r);

struct Document {
    std::string kind;
    Json payload;
};

Document load_document(const std::string& path);
Json envelope(const std::string& kind, Json payload);

// Morphism documents reference their endpoint triples by relative path or
// carry them inline.
struct MorphismDocument {
    SpectralTriple source;
    SpectralTriple target;
    AlgebraHomomorphism phi;
    ComplexMatrix intertwiner;
    MorphismFlags flags;
    std::vector<std::string> flavors; // subset of {tgs, riemannian, metric}
};

MorphismDocument morphism_from_json(const Json& payload, const std::string& base_dir);

// Deterministic writer: fixed key order (insertion order of ordered_json),
// doubles with 12 significant digits, no trailing whitespace.
void write_json(std::ostream& os, const Json& j);
std::string json_to_string(const Json& j);

// Pure states for the distance command: {"block": i, "vector": [[re,im],..]}.
PureState state_from_json(const FiniteCStarAlgebra& a, const Json& j);
Json state_to_json(const PureState& s);
Json element_to_json(const AlgebraElement& e);

} // namespace ncg
