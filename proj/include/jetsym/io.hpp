#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "jetsym/determining.hpp"
#include "jetsym/jet_space.hpp"
#include "jetsym/parser.hpp"
#include "jetsym/prolongation.hpp"

/// JSON documents of the command-line tool. Indices are 1-based on the wire.
namespace jetsym::io {

using Json = nlohmann::ordered_json;

inline int get_int(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) throw Error(std::string("missing integer field '") + key + "'");
    return j.at(key).get<int>();
}

inline std::string text_of(const Json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw Error(where + " must be an expression string");
}

inline Poly read_poly(const Json& j, const TablePtr& table, const std::string& where) {
    try {
        return parse_poly(text_of(j, where), table);
    } catch (const ParseError& e) {
        throw Error(where + ": " + e.what());
    }
}

inline Json scalar_json(const GaussScalar& s) { return s.str(); }

inline GaussScalar read_scalar(const Json& j, const std::string& where) {
    try {
        return parse_scalar(text_of(j, where));
    } catch (const ParseError& e) {
        throw Error(where + ": " + e.what());
    }
}

/// {"n", "m", "entries": [{"k", "i", "j", "F"}], "truncation"?}; omitted entries are 0.
inline PDESystem read_system(const Json& doc, int max_order = 3) {
    if (!doc.is_object()) throw Error("system document must be a JSON object");
    const int n = get_int(doc, "n"), m = get_int(doc, "m");
    if (n < 1 || m < 1) throw Error("system needs n >= 1 and m >= 1");
    JetContext ctx(n, m, max_order);
    std::optional<int> trunc;
    if (doc.contains("truncation") && !doc.at("truncation").is_null()) trunc = get_int(doc, "truncation");
    PDESystem sys(ctx);
    if (trunc)
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) sys.set(k, i, j, ctx.zero().truncated(*trunc));
    if (!doc.contains("entries")) return sys;
    if (!doc.at("entries").is_array()) throw Error("'entries' must be an array");
    std::vector<bool> seen(static_cast<std::size_t>(m * n * n), false);
    std::size_t idx = 0;
    for (auto& e : doc.at("entries")) {
        const std::string where = "entries[" + std::to_string(idx++) + "]";
        const int k = get_int(e, "k"), i = get_int(e, "i"), j = get_int(e, "j");
        if (k < 1 || k > m || i < 1 || i > n || j < 1 || j > n) throw Error(where + ": index out of range");
        if (i > j) throw Error(where + ": entries must have i <= j");
        auto s = seen[static_cast<std::size_t>(((k - 1) * n + i - 1) * n + j - 1)];
        if (s) throw Error(where + ": duplicate entry");
        s = true;
        if (!e.contains("F")) throw Error(where + ": missing field 'F'");
        Poly F = read_poly(e.at("F"), ctx.table(), where + ".F");
        if (trunc) F = F.truncated(*trunc);
        try {
            sys.set(k - 1, i - 1, j - 1, F);
        } catch (const Error& err) {
            throw Error(where + ": " + err.what());
        }
    }
    return sys;
}

inline Json system_json(const PDESystem& sys) {
    const auto& ctx = sys.ctx();
    Json doc;
    doc["n"] = ctx.n();
    doc["m"] = ctx.m();
    if (auto t = sys.truncation()) doc["truncation"] = *t;
    doc["entries"] = Json::array();
    for (int k = 0; k < ctx.m(); ++k)
        for (int i = 0; i < ctx.n(); ++i)
            for (int j = i; j < ctx.n(); ++j) {
                const Poly& F = sys.F(k, i, j);
                if (F.is_zero()) continue;
                doc["entries"].push_back(Json{{"k", k + 1}, {"i", i + 1}, {"j", j + 1}, {"F", F.str()}});
            }
    return doc;
}

/// {"theta": [...], "eta": [...], "name"?} against the context.
inline VectorField read_field(const Json& f, const JetContext& ctx, const std::string& where) {
    if (!f.is_object()) throw Error(where + " must be an object");
    std::vector<Poly> theta, eta;
    for (auto [key, out, count] : {std::tuple{"theta", &theta, ctx.n()}, std::tuple{"eta", &eta, ctx.m()}}) {
        if (!f.contains(key) || !f.at(key).is_array()) throw Error(where + ": missing array '" + key + "'");
        const auto& arr = f.at(key);
        if (static_cast<int>(arr.size()) != count)
            throw Error(where + "." + key + " must have " + std::to_string(count) + " entries");
        for (std::size_t c = 0; c < arr.size(); ++c)
            out->push_back(read_poly(arr[c], ctx.table(), where + "." + key + "[" + std::to_string(c) + "]"));
    }
    try {
        return VectorField(ctx, theta, eta);
    } catch (const Error& e) {
        throw Error(where + ": " + e.what());
    }
}

inline Json field_json(const VectorField& X) {
    Json f;
    f["theta"] = Json::array();
    f["eta"] = Json::array();
    for (auto& t : X.theta()) f["theta"].push_back(t.str());
    for (auto& e : X.eta()) f["eta"].push_back(e.str());
    return f;
}

inline std::string field_text(const VectorField& X) {
    std::ostringstream os;
    const auto& ctx = X.ctx();
    bool first = true;
    for (std::size_t c = 0; c < X.components(); ++c) {
        if (X.component(c).is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        std::string var = c < static_cast<std::size_t>(ctx.n()) ? "x" + std::to_string(c + 1)
                                                                : "u" + std::to_string(c - ctx.n() + 1);
        os << "(" << X.component(c).str() << ")*d/d" << var;
    }
    return first ? "0" : os.str();
}

/// Single field document {"n", "m", "theta", "eta"}.
inline VectorField read_field_document(const Json& doc, int max_order = 3) {
    if (!doc.is_object()) throw Error("field document must be a JSON object");
    JetContext ctx(get_int(doc, "n"), get_int(doc, "m"), max_order);
    return read_field(doc, ctx, "field");
}

struct NamedFields {
    JetContext ctx;
    std::vector<VectorField> fields;
    std::vector<std::string> names;
};

/// {"n", "m", "fields": [{"name"?, "theta", "eta"}]}.
inline NamedFields read_fields_document(const Json& doc, int max_order = 3) {
    if (!doc.is_object()) throw Error("fields document must be a JSON object");
    NamedFields out{JetContext(get_int(doc, "n"), get_int(doc, "m"), max_order), {}, {}};
    if (!doc.contains("fields") || !doc.at("fields").is_array()) throw Error("missing array 'fields'");
    std::size_t k = 0;
    for (auto& f : doc.at("fields")) {
        const std::string where = "fields[" + std::to_string(k) + "]";
        out.fields.push_back(read_field(f, out.ctx, where));
        out.names.push_back(f.contains("name") && f.at("name").is_string() ? f.at("name").get<std::string>()
                                                                           : "X" + std::to_string(k + 1));
        ++k;
    }
    return out;
}

/// Flat array of scalar strings in (alpha, beta, gamma, delta, epsilon) order.
inline InitialData read_initial_data(const Json& doc, int n, int m) {
    if (!doc.is_array()) throw Error("initial data must be a JSON array of scalar strings");
    if (doc.size() != InitialData::length(n, m))
        throw Error("initial data must have length (n+m+2)(n+m) = " + std::to_string(InitialData::length(n, m)) +
                    ", got " + std::to_string(doc.size()));
    Vector v;
    for (std::size_t k = 0; k < doc.size(); ++k) v.push_back(read_scalar(doc[k], "initial data[" + std::to_string(k) + "]"));
    return InitialData(n, m, std::move(v));
}

inline Json initial_data_json(const InitialData& w) {
    Json a = Json::array();
    for (auto& s : w.values()) a.push_back(s.str());
    return a;
}

/// Comma-separated scalars, e.g. "1,-1/2,i".
inline Vector read_point(const std::string& text) {
    Vector out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(read_scalar(Json(part), "point coordinate " + std::to_string(out.size() + 1)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace jetsym::io
