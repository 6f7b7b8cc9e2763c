#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/linear.hpp"
#include "jetsym/poly.hpp"

namespace jetsym {

/// Point in the variables of a table; variables not listed are 0.
using Point = std::map<std::size_t, GaussScalar>;

/// Solves G(unknowns, rest) = 0 for the unknowns as truncated power series in
/// the remaining variables (implicit function theorem).
///
/// The series are expressed in coordinates centred at `base`: when base is not
/// the origin, every variable v in the result stands for v - base[v].
/// Unknown variables occurring in the output are always absent.
inline std::map<std::size_t, Poly> implicit_series_solve(std::vector<Poly> G,
                                                         const std::vector<std::size_t>& unknowns,
                                                         const Point& base, int order) {
    if (G.empty()) throw Error("implicit_series_solve: empty system");
    if (G.size() != unknowns.size()) throw Error("implicit_series_solve: need as many equations as unknowns");
    if (order < 0) throw Error("implicit_series_solve: negative order");
    TablePtr table = G[0].table();
    for (auto& g : G)
        if (g.table() != table) throw Error("implicit_series_solve: mixed variable tables");
    for (auto v : unknowns) G[0].check_var(v);

    std::map<std::size_t, Poly> shift;
    for (auto& [v, value] : base) {
        G[0].check_var(v);
        if (value.is_zero()) continue;
        shift.emplace(v, Poly::var(table, v) + Poly::constant(table, value));
    }
    if (!shift.empty())
        for (auto& g : G) g = substitute(g, shift);

    const std::size_t k = unknowns.size();
    for (std::size_t a = 0; a < k; ++a)
        if (!G[a].constant_term().is_zero())
            throw Error("implicit_series_solve: equation " + std::to_string(a) + " does not vanish at the base point");

    Matrix jac(k, Vector(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) jac[a][b] = differentiate(G[a], unknowns[b]).constant_term();
    Matrix jinv;
    try {
        jinv = invert(jac);
    } catch (const Error&) {
        throw Error("implicit_series_solve: Jacobian with respect to the unknowns is singular at the base point");
    }

    // Chord iteration z <- z - J^{-1} G(z); each pass fixes one more degree.
    std::map<std::size_t, Poly> z;
    for (auto v : unknowns) z.emplace(v, Poly(table).truncated(order));
    auto residual = [&]() {
        std::vector<Poly> r;
        r.reserve(k);
        for (auto& g : G) r.push_back(substitute(g, z, order));
        return r;
    };
    for (int pass = 0; pass <= order; ++pass) {
        auto r = residual();
        for (std::size_t b = 0; b < k; ++b) {
            Poly delta(table, order);
            for (std::size_t a = 0; a < k; ++a)
                if (!jinv[b][a].is_zero()) delta += r[a] * jinv[b][a];
            z.at(unknowns[b]) -= delta;
        }
    }
    for (auto& r : residual())
        if (!r.is_zero()) throw Error("implicit_series_solve: back-substitution check failed");
    return z;
}

} // namespace jetsym
