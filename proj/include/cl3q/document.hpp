#pragma once

// JSON persistence for line classes. A document is self-describing: it
// carries the field block (p, e, modulus, omega), the declared parameter and
// construction provenance, and the lines as normalized Plucker 6-tuples in
// ascending lexicographic order. Everything is emitted through ordered_json
// with a fixed key order, so a given class always serializes to the same
// bytes. Parsing is strict about identity (field block must match the
// canonical representation, tuples must name existing lines, no duplicates)
// but deliberately does not enforce the size/parameter relation; that is the
// verifier's job, and a wrong-size document should fail verification rather
// than parsing.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cl3q/errors.hpp"
#include "cl3q/geometry.hpp"
#include "cl3q/klein.hpp"
#include "cl3q/line_classes.hpp"

namespace cl3q {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json to_document(const Geometry& g, const LineClass& cls) {
    const Field& f = g.field();
    if (cls.q != f.q()) throw DocumentInvalid("class and geometry disagree on q");

    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["field"] = {{"p", f.p()}, {"e", f.e()}, {"modulus", f.modulus()}, {"omega", g.omega()}};

    Json pairs = Json::array();
    for (const DerivationPair& pr : cls.provenance.pairs)
        pairs.push_back(Json::array({pr.lambda1, pr.lambda2}));

    Json lines = Json::array();
    for (LineId ln : cls.lines) {
        Plucker p = g.line_plucker(ln);
        lines.push_back(Json::array({p[0], p[1], p[2], p[3], p[4], p[5]}));
    }

    doc["class"] = {{"parameter", cls.parameter},
                    {"provenance", {{"family", cls.provenance.family}, {"pairs", pairs}}},
                    {"lines", lines}};
    return doc;
}

inline std::string document_to_string(const Json& doc) { return doc.dump(2) + "\n"; }

namespace detail {

inline const Json& require_key(const Json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw DocumentInvalid(std::string("document is missing ") + where + "." + key);
    return *it;
}

} // namespace detail

// Builds the geometry a document describes. The field block must match the
// canonical representation for its (p, e); anything else would silently
// reinterpret every element code in the document.
inline Geometry geometry_for_document(const Json& doc, int max_q = 13) {
    int version = detail::require_key(doc, "schema_version", "").get<int>();
    if (version != kSchemaVersion)
        throw DocumentInvalid("unsupported schema_version " + std::to_string(version));

    const Json& fb = detail::require_key(doc, "field", "");
    int p = detail::require_key(fb, "p", "field").get<int>();
    int e = detail::require_key(fb, "e", "field").get<int>();
    auto modulus = detail::require_key(fb, "modulus", "field").get<std::vector<int>>();
    int omega = detail::require_key(fb, "omega", "field").get<int>();

    Field f = Field::build(p, e);
    if (modulus != f.modulus())
        throw DocumentInvalid("field modulus is not the canonical choice for GF(" +
                              std::to_string(p) + "^" + std::to_string(e) + ")");
    return Geometry::build(std::move(f), omega, max_q);
}

inline LineClass from_document(const Geometry& g, const Json& doc) {
    const Json& cb = detail::require_key(doc, "class", "");

    LineClass cls;
    cls.q = g.field().q();
    cls.parameter = detail::require_key(cb, "parameter", "class").get<long long>();

    const Json& prov = detail::require_key(cb, "provenance", "class");
    cls.provenance.family = detail::require_key(prov, "family", "provenance").get<std::string>();
    for (const Json& pr : detail::require_key(prov, "pairs", "provenance")) {
        if (!pr.is_array() || pr.size() != 2)
            throw DocumentInvalid("provenance pair is not a [lambda1, lambda2] array");
        cls.provenance.pairs.push_back(DerivationPair{pr[0].get<int>(), pr[1].get<int>()});
    }

    const Json& lines = detail::require_key(cb, "lines", "class");
    cls.lines.reserve(lines.size());
    for (const Json& t : lines) {
        if (!t.is_array() || t.size() != 6)
            throw DocumentInvalid("line entry is not a 6-tuple");
        Plucker p;
        for (int i = 0; i < 6; ++i) {
            long long v = t[i].get<long long>();
            if (v < 0 || v >= g.field().q())
                throw DocumentInvalid("line coordinate " + std::to_string(v) +
                                      " is not a field element code");
            p[i] = static_cast<std::uint16_t>(v);
        }
        LineId ln = g.line_id(p);
        if (ln < 0)
            throw DocumentInvalid("tuple " + Json(t).dump() +
                                  " does not name a line (Klein relation fails)");
        cls.lines.push_back(ln);
    }
    std::sort(cls.lines.begin(), cls.lines.end());
    if (std::adjacent_find(cls.lines.begin(), cls.lines.end()) != cls.lines.end())
        throw DocumentInvalid("document contains a duplicate line");
    return cls;
}

inline Json report_to_json(const CountCheckReport& r) {
    auto hist = [](const std::map<long long, long long>& h) {
        Json out = Json::object();
        for (const auto& [value, count] : h) out[std::to_string(value)] = count;
        return out;
    };
    Json j;
    j["pass"] = r.pass;
    j["structural_ok"] = r.structural_ok;
    j["parameter"] = r.x;
    j["expect_in"] = r.expect_in;
    j["expect_out"] = r.expect_out;
    j["histogram_in"] = hist(r.histogram_in);
    j["histogram_out"] = hist(r.histogram_out);
    j["witnesses"] = r.witnesses;
    return j;
}

} // namespace cl3q
