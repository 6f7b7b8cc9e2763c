#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "jetsym/determining.hpp"
#include "jetsym/io.hpp"
#include "jetsym/lie_algebra.hpp"
#include "jetsym/segre.hpp"

/// The `jetsym` command-line tool. Exit codes: 0 success, 1 domain error, 2 usage error.
namespace jetsym::cli {

using io::Json;

struct Options {
    int order = 3;
    std::string format = "text";
    std::string point;
    std::string system, field, fields, initial, signature, R;
    int n = 0, m = 0;
    std::vector<std::string> files;
};

struct Report {
    Json json;
    std::string text;
};

namespace detail {

inline Json load_json(const std::string& path, std::istream& in) {
    std::string content;
    if (path == "-") {
        std::ostringstream os;
        os << in.rdbuf();
        content = os.str();
    } else {
        std::ifstream f(path);
        if (!f) throw Error("cannot open '" + path + "'");
        std::ostringstream os;
        os << f.rdbuf();
        content = os.str();
    }
    try {
        return Json::parse(content);
    } catch (const Json::parse_error& e) {
        throw Error("invalid JSON in '" + path + "': " + e.what());
    }
}

inline std::string one_based(int k, int i, int j) {
    return std::to_string(k + 1) + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

inline Json point_json(const Vector& p) {
    Json a = Json::array();
    for (auto& s : p) a.push_back(s.str());
    return a;
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

inline Report involutive(const Options& o, std::istream& in) {
    auto sys = io::read_system(load_json(o.system, in));
    auto rep = involutivity_check(sys);
    Report r;
    r.json["involutive"] = rep.involutive;
    r.json["failures"] = Json::array();
    std::ostringstream os;
    os << "involutive: " << bool_str(rep.involutive) << "\n";
    for (auto& f : rep.failures) {
        r.json["failures"].push_back(
            Json{{"k", f.k + 1}, {"i", f.i + 1}, {"j", f.j + 1}, {"l", f.l + 1}, {"difference", f.difference.str()}});
        os << "incompatible k=" << f.k + 1 << " i=" << f.i + 1 << " j=" << f.j + 1 << " l=" << f.l + 1
           << ": " << f.difference.str() << "\n";
    }
    r.text = os.str();
    return r;
}

inline Report symmetry_check(const Options& o, std::istream& in) {
    auto sys = io::read_system(load_json(o.system, in));
    auto doc = load_json(o.field, in);
    if (io::get_int(doc, "n") != sys.ctx().n() || io::get_int(doc, "m") != sys.ctx().m())
        throw Error("field and system have different dimensions");
    auto X = io::read_field(doc, sys.ctx(), "field");
    auto res = lie_criterion_check(X, sys);
    Report r;
    r.json["symmetry"] = res.all_zero();
    r.json["residuals"] = Json::array();
    std::ostringstream os;
    os << "symmetry: " << bool_str(res.all_zero()) << "\n";
    for (auto& [idx, p] : res.entries()) {
        if (p.is_zero()) continue;
        auto [k, i, j] = idx;
        r.json["residuals"].push_back(Json{{"k", k + 1}, {"i", i + 1}, {"j", j + 1}, {"residual", p.str()}});
        os << "residual" << one_based(k, i, j) << " = " << p.str() << "\n";
    }
    r.text = os.str();
    return r;
}

inline Report determining(const Options& o, std::istream& in) {
    auto sys = translate(io::read_system(load_json(o.system, in)), io::read_point(o.point));
    UnknownCoefficientField field(sys.ctx(), o.order);
    auto det = generate_determining(sys, field);
    Report r;
    r.json["order"] = o.order;
    r.json["unknowns"] = det.unknowns();
    r.json["equations"] = det.equations();
    r.json["columns"] = det.sys.column_labels;
    r.json["rows"] = Json::array();
    std::ostringstream os;
    os << "unknowns: " << det.unknowns() << "\nequations: " << det.equations() << "\n";
    for (std::size_t row = 0; row < det.equations(); ++row) {
        Json entries = Json::object();
        std::string eq;
        for (std::size_t c = 0; c < det.unknowns(); ++c) {
            const auto& s = det.sys.matrix[row][c];
            if (s.is_zero()) continue;
            entries[det.sys.column_labels[c]] = s.str();
            eq += (eq.empty() ? "" : " + ") + ("(" + s.str() + ")*" + det.sys.column_labels[c]);
        }
        r.json["rows"].push_back(Json{{"source", det.row_label(row)}, {"entries", entries}});
        os << det.row_label(row) << ": " << eq << " = 0\n";
    }
    r.text = os.str();
    return r;
}

inline Report taylor(const Options& o, std::istream& in) {
    auto sys = io::read_system(load_json(o.system, in));
    auto omega = io::read_initial_data(load_json(o.initial, in), sys.ctx().n(), sys.ctx().m());
    auto point = io::read_point(o.point);
    auto T = taylor_from_initial_data(sys, point, omega, o.order);
    Report r;
    r.json["order"] = o.order;
    r.json["point"] = point_json(point);
    r.json["initial_data"] = io::initial_data_json(omega);
    r.json["field"] = io::field_json(T);
    r.text = "field: " + io::field_text(T) + "\n";
    return r;
}

inline Report symmetry_algebra_cmd(const Options& o, std::istream& in) {
    auto sys = io::read_system(load_json(o.system, in));
    auto point = io::read_point(o.point);
    auto alg = symmetry_algebra(sys, o.order, point);
    Report r;
    r.json["order"] = o.order;
    r.json["point"] = point_json(point);
    r.json["dimension"] = alg.dimension;
    r.json["bound"] = alg.bound;
    r.json["basis"] = Json::array();
    std::ostringstream os;
    os << "dimension: " << alg.dimension << " (bound " << alg.bound << ")\n";
    for (std::size_t k = 0; k < alg.basis.size(); ++k) {
        r.json["basis"].push_back(io::field_json(alg.basis[k]));
        os << "X" << k + 1 << " = " << io::field_text(alg.basis[k]) << "\n";
    }
    r.text = os.str();
    return r;
}

inline void require_dims(const Options& o) {
    if (o.n < 1 || o.m < 1) throw Error("--n and --m must be at least 1");
}

inline Report flat_algebra(const Options& o, std::istream&) {
    require_dims(o);
    auto gens = flat_generators(JetContext(o.n, o.m, 3));
    Report r;
    r.json["n"] = o.n;
    r.json["m"] = o.m;
    r.json["dimension"] = span_dimension(gens.fields());
    r.json["generators"] = Json::array();
    std::ostringstream os;
    os << "dimension: " << span_dimension(gens.fields()) << "\n";
    for (std::size_t k = 0; k < gens.size(); ++k) {
        Json f{{"name", gens.names()[k]}};
        Json body = io::field_json(gens[k]);
        f["theta"] = body["theta"];
        f["eta"] = body["eta"];
        r.json["generators"].push_back(f);
        os << gens.names()[k] << " = " << io::field_text(gens[k]) << "\n";
    }
    r.text = os.str();
    return r;
}

inline Report bracket_cmd(const Options& o, std::istream& in) {
    if (o.files.size() != 2) throw Error("bracket needs exactly two field files");
    auto X = io::read_field_document(load_json(o.files[0], in));
    auto doc = load_json(o.files[1], in);
    if (io::get_int(doc, "n") != X.ctx().n() || io::get_int(doc, "m") != X.ctx().m())
        throw Error("fields have different dimensions");
    auto Y = io::read_field(doc, X.ctx(), "field");
    auto B = bracket(X, Y);
    Report r;
    r.json["bracket"] = io::field_json(B);
    r.text = "bracket: " + io::field_text(B) + "\n";
    return r;
}

inline Report closure(const Options& o, std::istream& in) {
    FieldBasis basis;
    if (!o.fields.empty()) {
        auto nf = io::read_fields_document(load_json(o.fields, in));
        basis = FieldBasis(nf.fields, nf.names);
    } else {
        require_dims(o);
        basis = flat_generators(JetContext(o.n, o.m, 3));
    }
    auto rep = closure_check(basis);
    Report r;
    std::ostringstream os;
    r.json["closes"] = rep.closes;
    r.json["dimension"] = basis.size();
    os << "closes: " << bool_str(rep.closes) << "\ndimension: " << basis.size() << "\n";
    const auto& names = basis.names();
    if (rep.closes) {
        r.json["structure_constants"] = Json::array();
        for (std::size_t a = 0; a < basis.size(); ++a)
            for (std::size_t b = a + 1; b < basis.size(); ++b) {
                Json coeffs = Json::object();
                std::string line;
                for (std::size_t c = 0; c < basis.size(); ++c) {
                    const auto& s = rep.constants[a][b][c];
                    if (s.is_zero()) continue;
                    coeffs[names[c]] = s.str();
                    line += (line.empty() ? "" : " + ") + ("(" + s.str() + ")*" + names[c]);
                }
                if (coeffs.empty()) continue;
                r.json["structure_constants"].push_back(Json{{"a", names[a]}, {"b", names[b]}, {"bracket", coeffs}});
                os << "[" << names[a] << ", " << names[b] << "] = " << line << "\n";
            }
    } else {
        const auto& f = *rep.failure;
        r.json["failure"] = Json{{"a", names[f.a]},
                                 {"b", names[f.b]},
                                 {"bracket", io::field_json(f.bracket)},
                                 {"residual", io::field_json(f.residual)}};
        os << "[" << names[f.a] << ", " << names[f.b] << "] = " << io::field_text(f.bracket)
           << " is outside the span; residual " << io::field_text(f.residual) << "\n";
    }
    r.text = os.str();
    return r;
}

inline Report segre_derive(const Options& o, std::istream&) {
    auto sig = Signature::parse(o.signature);
    std::optional<Poly> R;
    if (!o.R.empty()) {
        auto ctx = DefiningSeries::make_context(sig.n());
        try {
            R = parse_poly(o.R, ctx.table());
        } catch (const ParseError& e) {
            throw Error(std::string("--R: ") + e.what());
        }
    }
    auto sys = segre_system(DefiningSeries(sig, R), o.order);
    Report r;
    r.json = io::system_json(sys);
    std::ostringstream os;
    os << "truncation: " << o.order << "\n";
    for (int i = 0; i < sig.n(); ++i)
        for (int j = i; j < sig.n(); ++j) os << "u" << one_based(0, i, j) << " = " << sys.F(0, i, j).str() << "\n";
    r.text = os.str();
    return r;
}

/// Components of a holomorphic field in z1..zn, w names.
inline std::pair<std::vector<std::string>, std::string> zw_components(const VectorField& X) {
    const int n = X.ctx().n();
    std::vector<std::string> names;
    for (int j = 1; j <= n; ++j) names.push_back("z" + std::to_string(j));
    names.push_back("w");
    auto t = VarTable::plain(names);
    std::vector<std::optional<std::size_t>> map(X.ctx().table()->size());
    for (int j = 0; j <= n; ++j) map[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j);
    std::vector<std::string> Z;
    for (int j = 0; j < n; ++j) Z.push_back(remap(X.component(static_cast<std::size_t>(j)), t, map).str());
    return {Z, remap(X.component(static_cast<std::size_t>(n)), t, map).str()};
}

inline Report cr_aut(const Options& o, std::istream&) {
    auto sig = Signature::parse(o.signature);
    auto alg = cr_automorphism_algebra(sig);
    const int n = sig.n();
    const bool tr = totally_real_check(alg.basis);
    Report r;
    r.json["signature"] = sig.str();
    r.json["real_dimension"] = alg.real_dimension;
    r.json["bound"] = n * n + 4 * n + 3;
    r.json["totally_real"] = tr;
    r.json["basis"] = Json::array();
    std::ostringstream os;
    os << "real_dimension: " << alg.real_dimension << " (bound " << n * n + 4 * n + 3 << ")\n"
       << "totally_real: " << bool_str(tr) << "\n";
    for (std::size_t k = 0; k < alg.basis.size(); ++k) {
        auto [Z, W] = zw_components(alg.basis[k]);
        r.json["basis"].push_back(Json{{"Z", Z}, {"W", W}});
        os << "X" << k + 1 << " = ";
        bool first = true;
        auto term = [&](const std::string& c, const std::string& var) {
            if (c == "0") return;
            os << (first ? "" : " + ") << "(" << c << ")*d/d" << var;
            first = false;
        };
        for (std::size_t j = 0; j < Z.size(); ++j) term(Z[j], "z" + std::to_string(j + 1));
        term(W, "w");
        os << (first ? "0" : "") << "\n";
    }
    r.text = os.str();
    return r;
}

inline Report totally_real(const Options& o, std::istream& in) {
    auto nf = io::read_fields_document(load_json(o.fields, in));
    const bool tr = totally_real_check(nf.fields);
    Report r;
    r.json["totally_real"] = tr;
    r.json["count"] = nf.fields.size();
    r.text = "totally_real: " + bool_str(tr) + "\n";
    return r;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lie symmetries of completely overdetermined second-order PDE systems", "jetsym"};
    app.require_subcommand(1);
    Options o;

    auto shared = [&](CLI::App* sub) {
        sub->add_option("--order", o.order, "Truncation order (default 3)");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--point", o.point, "Base point x0,u0 as comma-separated scalars (default origin)");
        return sub;
    };
    auto needs_system = [&](CLI::App* sub) {
        sub->add_option("--system", o.system, "System JSON file ('-' for stdin)")->required();
        return sub;
    };

    std::vector<std::pair<CLI::App*, Report (*)(const Options&, std::istream&)>> commands;
    auto add = [&](const char* name, const char* help, Report (*fn)(const Options&, std::istream&)) {
        CLI::App* sub = shared(app.add_subcommand(name, help));
        commands.emplace_back(sub, fn);
        return sub;
    };

    needs_system(add("involutive", "Check compatibility of the system", detail::involutive));
    auto* sc = needs_system(add("symmetry-check", "Lie criterion residual of a field", detail::symmetry_check));
    sc->add_option("--field", o.field, "Field JSON file")->required();
    needs_system(add("determining", "Determining equations of the degree-N ansatz", detail::determining));
    auto* ty = needs_system(add("taylor", "Symmetry from initial data by recursion", detail::taylor));
    ty->add_option("--initial", o.initial, "Initial data JSON array")->required();
    needs_system(add("symmetry-algebra", "Basis of the symmetry algebra", detail::symmetry_algebra_cmd));
    auto* fa = add("flat-algebra", "Generators of the symmetries of u_xx = 0", detail::flat_algebra);
    fa->add_option("--n", o.n, "Independent variables")->required();
    fa->add_option("--m", o.m, "Dependent variables")->required();
    auto* br = add("bracket", "Lie bracket of two fields", detail::bracket_cmd);
    br->add_option("files", o.files, "Two field JSON files")->expected(2)->required();
    auto* cl = add("closure", "Structure constants of a span", detail::closure);
    cl->add_option("--fields", o.fields, "Fields JSON file");
    cl->add_option("--n", o.n, "Use the flat generators with n independent variables");
    cl->add_option("--m", o.m, "... and m dependent variables");
    auto* sd = add("segre-derive", "Second-order system of a Segre family", detail::segre_derive);
    sd->add_option("--signature", o.signature, "Levi signature, e.g. +-")->required();
    sd->add_option("--R", o.R, "Perturbation R(x, u, zeta1..zeta{n+1}) of degree >= 3");
    auto* ca = add("cr-aut", "Infinitesimal automorphisms of a hyperquadric", detail::cr_aut);
    ca->add_option("--signature", o.signature, "Levi signature, e.g. ++")->required();
    auto* tr = add("totally-real", "Check that a real span meets its i-multiple only in 0", detail::totally_real);
    tr->add_option("--fields", o.fields, "Fields JSON file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, fn] : commands) {
            if (!sub->parsed()) continue;
            Report r = fn(o, in);
            if (o.format == "json")
                out << r.json.dump(2) << "\n";
            else
                out << r.text;
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

inline int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, in, out, err);
}

} // namespace jetsym::cli
