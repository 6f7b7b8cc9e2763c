#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/poly.hpp"
#include "jetsym/var_table.hpp"

namespace jetsym {

/// Polynomial (or truncated series) in x, u and jet coordinates.
using JetFunction = Poly;

/// Jet space J^r_{n,m} with natural coordinates; wraps a jet VarTable with max order >= 2.
class JetContext {
public:
    JetContext() = default;
    JetContext(int n, int m, int max_jet_order = 3, std::vector<std::string> parameters = {})
        : JetContext(VarTable::jet(n, m, max_jet_order, std::move(parameters))) {}
    explicit JetContext(TablePtr table) : table_(std::move(table)) {
        if (!table_ || table_->n() < 1 || table_->m() < 1) throw Error("jet context needs n >= 1 and m >= 1");
        if (table_->max_jet_order() < 2) throw Error("jet context needs max jet order >= 2");
    }

    const TablePtr& table() const { return table_; }
    int n() const { return table_->n(); }
    int m() const { return table_->m(); }
    int max_order() const { return table_->max_jet_order(); }

    Poly zero() const { return Poly(table_); }
    Poly constant(const GaussScalar& c) const { return Poly::constant(table_, c); }
    Poly x(int i) const { return Poly::var(table_, table_->x(i)); }
    Poly u(int mu) const { return Poly::var(table_, table_->u(mu)); }
    Poly jet(int mu, std::vector<int> multi) const { return Poly::var(table_, table_->jet(mu, std::move(multi))); }
    Poly p(int mu, int i) const { return jet(mu, {i}); }

    /// Highest jet order of any variable occurring in f (0 when f lives on (x, u)).
    int jet_order(const Poly& f) const {
        int o = 0;
        for (auto& [e, c] : f.terms())
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v] && (*table_)[v].kind == VarKind::Jet) o = std::max(o, (*table_)[v].order());
        return o;
    }

    bool operator==(const JetContext& o) const { return table_ == o.table_; }

private:
    TablePtr table_;
};

/// u^k_{ij} = F^k_{ij}(x, u, u_x) with F^k_{ij} = F^k_{ji}; only i <= j is stored.
class PDESystem {
public:
    PDESystem() = default;
    explicit PDESystem(JetContext ctx) : ctx_(std::move(ctx)) {
        const int n = ctx_.n();
        entries_.assign(static_cast<std::size_t>(ctx_.m() * n * (n + 1) / 2), ctx_.zero());
    }

    static PDESystem flat(const JetContext& ctx) { return PDESystem(ctx); }

    const JetContext& ctx() const { return ctx_; }

    const Poly& F(int k, int i, int j) const { return entries_.at(slot(k, i, j)); }

    void set(int k, int i, int j, Poly f) {
        if (f.table() != ctx_.table()) f = rebase(f, ctx_.table());
        if (ctx_.jet_order(f) > 1) throw Error("right-hand side may only involve first-order jets");
        entries_.at(slot(k, i, j)) = std::move(f);
    }

    /// Smallest truncation bound among the entries, if any entry is a truncated series.
    std::optional<int> truncation() const {
        std::optional<int> b;
        for (auto& f : entries_)
            if (f.bound()) b = b ? std::min(*b, *f.bound()) : *f.bound();
        return b;
    }

    bool is_flat() const {
        for (auto& f : entries_)
            if (!f.is_zero()) return false;
        return true;
    }

private:
    std::size_t slot(int k, int i, int j) const {
        const int n = ctx_.n();
        if (i > j) std::swap(i, j);
        if (k < 0 || k >= ctx_.m() || i < 0 || j >= n) throw Error("system index out of range");
        int pair = i * n - i * (i - 1) / 2 + (j - i);
        return static_cast<std::size_t>(k * (n * (n + 1) / 2) + pair);
    }

    JetContext ctx_;
    std::vector<Poly> entries_;
};

/// Total derivative D_i; raises jet order by at most one.
inline JetFunction total_derivative(const JetContext& ctx, const JetFunction& f, int i) {
    const auto& table = *ctx.table();
    JetFunction out = differentiate(f, table.x(i));
    for (std::size_t v = 0; v < table.size(); ++v) {
        const auto& var = table[v];
        if (var.kind != VarKind::Dependent && var.kind != VarKind::Jet) continue;
        if (!f.depends_on(v)) continue;
        std::vector<int> multi = var.multi;
        multi.push_back(i);
        if (static_cast<int>(multi.size()) > ctx.max_order())
            throw Error("total derivative overflows the maximal jet order " + std::to_string(ctx.max_order()));
        out += ctx.jet(var.index, multi) * differentiate(f, v);
    }
    return out;
}

/// Total derivative restricted to the equation manifold:
/// D_i followed by u^mu_{ij} <- F^mu_{ij}, on functions of first-order jets.
inline JetFunction restricted_total_derivative(const PDESystem& sys, const JetFunction& f, int i) {
    const auto& ctx = sys.ctx();
    const auto& table = *ctx.table();
    if (ctx.jet_order(f) > 1) throw Error("restricted total derivative needs a function of first-order jets");
    JetFunction out = differentiate(f, table.x(i));
    for (int k = 0; k < ctx.m(); ++k) {
        auto uk = table.u(k);
        if (f.depends_on(uk)) out += ctx.p(k, i) * differentiate(f, uk);
        for (int j = 0; j < ctx.n(); ++j) {
            auto pj = table.jet(k, {j});
            if (f.depends_on(pj)) out += sys.F(k, i, j) * differentiate(f, pj);
        }
    }
    return out;
}

struct CompatibilityFailure {
    int k, i, j, l;
    Poly difference; ///< Delta_l F^k_{ij} - Delta_i F^k_{lj}
};

struct InvolutivityReport {
    bool involutive = true;
    std::vector<CompatibilityFailure> failures;
};

/// Frobenius condition as cross-derivative compatibility:
/// Delta_l F^k_{ij} = Delta_i F^k_{lj} for all k, j and i < l.
/// For truncated series only the known terms of the difference are tested.
inline InvolutivityReport involutivity_check(const PDESystem& sys) {
    InvolutivityReport rep;
    const int n = sys.ctx().n();
    for (int k = 0; k < sys.ctx().m(); ++k)
        for (int i = 0; i < n; ++i)
            for (int l = i + 1; l < n; ++l)
                for (int j = 0; j < n; ++j) {
                    Poly d = restricted_total_derivative(sys, sys.F(k, i, j), l) -
                             restricted_total_derivative(sys, sys.F(k, l, j), i);
                    if (!d.is_zero()) rep.failures.push_back({k, i, j, l, std::move(d)});
                }
    rep.involutive = rep.failures.empty();
    return rep;
}

} // namespace jetsym
