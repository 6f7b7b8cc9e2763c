#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "jetsym/jet_space.hpp"

namespace jetsym {

/// X = sum_j theta_j d/dx_j + sum_mu eta^mu d/du^mu with coefficients on (x, u).
class VectorField {
public:
    VectorField() = default;
    VectorField(JetContext ctx, std::vector<Poly> theta, std::vector<Poly> eta)
        : ctx_(std::move(ctx)), theta_(std::move(theta)), eta_(std::move(eta)) {
        if (theta_.size() != static_cast<std::size_t>(ctx_.n()) || eta_.size() != static_cast<std::size_t>(ctx_.m()))
            throw Error("vector field has the wrong number of coefficients");
        for (auto* part : {&theta_, &eta_})
            for (auto& c : *part) {
                if (c.table() != ctx_.table()) c = rebase(c, ctx_.table());
                for (auto& [e, s] : c.terms())
                    for (std::size_t v = 0; v < e.size(); ++v)
                        if (e[v] && !ctx_.table()->is_base(v))
                            throw Error("vector field coefficient mentions '" + (*ctx_.table())[v].name +
                                        "'; only x and u are allowed");
            }
    }

    static VectorField zero(const JetContext& ctx) {
        return VectorField(ctx, std::vector<Poly>(ctx.n(), ctx.zero()), std::vector<Poly>(ctx.m(), ctx.zero()));
    }

    const JetContext& ctx() const { return ctx_; }
    const std::vector<Poly>& theta() const { return theta_; }
    const std::vector<Poly>& eta() const { return eta_; }
    const Poly& theta(int j) const { return theta_.at(j); }
    const Poly& eta(int mu) const { return eta_.at(mu); }

    /// Coefficient by component: 0..n-1 are theta_j, n..n+m-1 are eta^mu.
    std::size_t components() const { return theta_.size() + eta_.size(); }
    const Poly& component(std::size_t c) const {
        return c < theta_.size() ? theta_[c] : eta_.at(c - theta_.size());
    }
    Poly& component(std::size_t c) { return c < theta_.size() ? theta_[c] : eta_.at(c - theta_.size()); }

    bool is_zero() const {
        for (std::size_t c = 0; c < components(); ++c)
            if (!component(c).is_zero()) return false;
        return true;
    }

    /// X acting as a derivation on functions of (x, u) (jet variables are ignored).
    Poly apply(const Poly& f) const {
        const auto& table = *ctx_.table();
        Poly out(ctx_.table());
        for (int j = 0; j < ctx_.n(); ++j)
            if (!theta_[j].is_zero() && f.depends_on(table.x(j))) out += theta_[j] * differentiate(f, table.x(j));
        for (int mu = 0; mu < ctx_.m(); ++mu)
            if (!eta_[mu].is_zero() && f.depends_on(table.u(mu))) out += eta_[mu] * differentiate(f, table.u(mu));
        return out;
    }

    VectorField& operator+=(const VectorField& o) {
        for (std::size_t c = 0; c < components(); ++c) component(c) += o.component(c);
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        for (std::size_t c = 0; c < components(); ++c) component(c) -= o.component(c);
        return *this;
    }
    VectorField& operator*=(const GaussScalar& s) {
        for (std::size_t c = 0; c < components(); ++c) component(c) *= s;
        return *this;
    }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(const GaussScalar& s, VectorField a) { return a *= s; }

    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.ctx_ == b.ctx_ && a.theta_ == b.theta_ && a.eta_ == b.eta_;
    }

private:
    JetContext ctx_;
    std::vector<Poly> theta_;
    std::vector<Poly> eta_;
};

/// X^{(r)}: the base field plus coefficients eta^mu_I for every sorted I with 1 <= |I| <= r.
class ProlongedField {
public:
    using Key = std::pair<int, std::vector<int>>;

    ProlongedField(VectorField base, int order) : base_(std::move(base)), order_(order) {}

    const VectorField& base() const { return base_; }
    int order() const { return order_; }

    const Poly& eta(int mu, std::vector<int> multi) const {
        std::sort(multi.begin(), multi.end());
        if (multi.empty()) return base_.eta(mu);
        auto it = eta_jet_.find({mu, multi});
        if (it == eta_jet_.end()) throw Error("prolongation coefficient beyond the prolongation order");
        return it->second;
    }
    const std::map<Key, Poly>& coefficients() const { return eta_jet_; }

private:
    friend ProlongedField prolong(const VectorField& X, int r);

    VectorField base_;
    int order_;
    std::map<Key, Poly> eta_jet_;
};

/// r-th prolongation via eta^mu_{I,i} = D_i eta^mu_I - sum_j (D_i theta_j) u^mu_{I,j},
/// splitting each sorted multi-index at its last entry.
inline ProlongedField prolong(const VectorField& X, int r) {
    const auto& ctx = X.ctx();
    if (r < 0) throw Error("negative prolongation order");
    if (r > ctx.max_order()) throw Error("prolongation order exceeds the maximal jet order");
    ProlongedField out(X, r);
    std::vector<Poly> Dtheta; // D_i theta_j, index i * n + j
    for (int i = 0; i < ctx.n(); ++i)
        for (int j = 0; j < ctx.n(); ++j) Dtheta.push_back(total_derivative(ctx, X.theta(j), i));
    for (int s = 1; s <= r; ++s) {
        for (int mu = 0; mu < ctx.m(); ++mu) {
            for (auto& multi : VarTable::sorted_multi_indices(ctx.n(), s)) {
                std::vector<int> prefix(multi.begin(), multi.end() - 1);
                const int i = multi.back();
                const Poly& lower = prefix.empty() ? X.eta(mu) : out.eta_jet_.at({mu, prefix});
                Poly value = total_derivative(ctx, lower, i);
                for (int j = 0; j < ctx.n(); ++j) {
                    const Poly& dt = Dtheta[static_cast<std::size_t>(i * ctx.n() + j)];
                    if (dt.is_zero()) continue;
                    std::vector<int> idx = prefix;
                    idx.push_back(j);
                    value -= dt * ctx.jet(mu, idx);
                }
                out.eta_jet_.emplace(ProlongedField::Key{mu, multi}, std::move(value));
            }
        }
    }
    return out;
}

/// X^{(r)} as a derivation on jet functions of order <= r.
inline Poly apply_prolonged(const ProlongedField& Xp, const JetFunction& f) {
    const auto& ctx = Xp.base().ctx();
    if (ctx.jet_order(f) > Xp.order()) throw Error("function order exceeds the prolongation order");
    const auto& table = *ctx.table();
    Poly out = Xp.base().apply(f);
    for (std::size_t v = 0; v < table.size(); ++v) {
        const auto& var = table[v];
        if (var.kind != VarKind::Jet || !f.depends_on(v)) continue;
        out += Xp.eta(var.index, var.multi) * differentiate(f, v);
    }
    return out;
}

/// Residual of the Lie tangency condition, one entry per (mu, i <= j).
class ResidualTable {
public:
    ResidualTable(int n, int m) : n_(n), m_(m) {}

    int n() const { return n_; }
    int m() const { return m_; }
    const Poly& at(int mu, int i, int j) const {
        if (i > j) std::swap(i, j);
        return entries_.at({mu, i, j});
    }
    void set(int mu, int i, int j, Poly p) { entries_.insert_or_assign({mu, i, j}, std::move(p)); }
    const std::map<std::tuple<int, int, int>, Poly>& entries() const { return entries_; }

    bool all_zero() const {
        for (auto& [k, p] : entries_)
            if (!p.is_zero()) return false;
        return true;
    }

private:
    int n_, m_;
    std::map<std::tuple<int, int, int>, Poly> entries_;
};

/// residual^mu_{ij} = (eta^mu_{ij} - X^{(1)} F^mu_{ij}) restricted to u^nu_{kl} = F^nu_{kl}.
/// X is an infinitesimal symmetry iff every residual vanishes.
inline ResidualTable lie_criterion_check(const VectorField& X, const PDESystem& sys) {
    const auto& ctx = sys.ctx();
    if (!(X.ctx() == ctx)) throw Error("vector field and system live on different jet spaces");
    const auto& table = *ctx.table();
    ProlongedField Xp = prolong(X, 2);
    std::map<std::size_t, Poly> on_shell;
    for (int k = 0; k < ctx.m(); ++k)
        for (int i = 0; i < ctx.n(); ++i)
            for (int j = i; j < ctx.n(); ++j) on_shell.emplace(table.jet(k, {i, j}), sys.F(k, i, j));
    ResidualTable out(ctx.n(), ctx.m());
    for (int mu = 0; mu < ctx.m(); ++mu)
        for (int i = 0; i < ctx.n(); ++i)
            for (int j = i; j < ctx.n(); ++j) {
                // F has no second-order jets, so only eta_{ij} needs the on-shell substitution.
                Poly r = substitute(Xp.eta(mu, {i, j}), on_shell) - apply_prolonged(Xp, sys.F(mu, i, j));
                out.set(mu, i, j, std::move(r));
            }
    return out;
}

} // namespace jetsym
