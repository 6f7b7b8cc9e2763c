#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetsym/jet_space.hpp"
#include "jetsym/linear.hpp"
#include "jetsym/prolongation.hpp"
#include "jetsym/series.hpp"

namespace jetsym {

/// Signs of the Levi form, e.g. "+-".
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<int> eps) : eps_(std::move(eps)) {
        if (eps_.empty()) throw Error("signature needs at least one sign");
        for (int e : eps_)
            if (e != 1 && e != -1) throw Error("signature entries must be +1 or -1");
    }
    static Signature parse(const std::string& s) {
        std::vector<int> eps;
        for (char c : s) {
            if (c == '+') eps.push_back(1);
            else if (c == '-') eps.push_back(-1);
            else throw Error("signature must consist of '+' and '-' characters");
        }
        return Signature(std::move(eps));
    }

    int n() const { return static_cast<int>(eps_.size()); }
    int operator[](int j) const { return eps_.at(static_cast<std::size_t>(j)); }
    const std::vector<int>& eps() const { return eps_; }
    std::string str() const {
        std::string s;
        for (int e : eps_) s += e > 0 ? '+' : '-';
        return s;
    }

private:
    std::vector<int> eps_;
};

/// Segre relation u + zeta_{n+1} + sum eps_j x_j zeta_j + R(x, u, zeta) = 0.
///
/// R lives on the table of `ctx()` (x1..xn, u1, jets, zeta1..zeta{n+1}); every
/// monomial has total degree >= 3 and involves only x, u and zeta.
class DefiningSeries {
public:
    explicit DefiningSeries(Signature sig) : DefiningSeries(sig, std::nullopt) {}
    DefiningSeries(Signature sig, std::optional<Poly> R) : sig_(std::move(sig)), ctx_(make_context(sig_.n())) {
        R_ = R ? rebase(*R, ctx_.table()) : ctx_.zero();
        if (!R_.is_exact()) throw Error("R must be a polynomial");
        const auto& t = *ctx_.table();
        for (auto& [e, c] : R_.terms()) {
            if (degree(e) < 3) throw Error("every monomial of R must have total degree >= 3");
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v] && t[v].kind == VarKind::Jet) throw Error("R may not involve jet variables");
        }
    }

    static JetContext make_context(int n) {
        std::vector<std::string> zeta;
        for (int j = 1; j <= n + 1; ++j) zeta.push_back("zeta" + std::to_string(j));
        return JetContext(n, 1, 3, std::move(zeta));
    }

    const Signature& signature() const { return sig_; }
    int n() const { return sig_.n(); }
    const JetContext& ctx() const { return ctx_; }
    const Poly& R() const { return R_; }
    std::size_t zeta(int j) const { return ctx_.table()->id("zeta" + std::to_string(j + 1)); }

    /// Left side of the Segre relation.
    Poly relation() const {
        Poly E = ctx_.u(0) + Poly::var(ctx_.table(), zeta(n())) + R_;
        for (int j = 0; j < n(); ++j) E += GaussScalar(sig_[j]) * ctx_.x(j) * Poly::var(ctx_.table(), zeta(j));
        return E;
    }

private:
    Signature sig_;
    JetContext ctx_;
    Poly R_;
};

/// Second-order system u_{ij} = F_{ij}(x, u, u_x) satisfied by the Segre family,
/// as series truncated at `order`, on the jet space `target` (n, 1).
inline PDESystem segre_system(const DefiningSeries& def, int order, const JetContext& target) {
    if (order < 2) throw Error("Segre elimination needs truncation order >= 2");
    const int n = def.n();
    if (target.n() != n || target.m() != 1) throw Error("target jet space must have n independent and 1 dependent variable");
    const auto& ctx = def.ctx();
    const auto& t = *ctx.table();
    const std::size_t u = t.u(0);

    Poly E0 = def.relation();
    std::vector<Poly> G{E0};
    std::vector<Poly> E;
    for (int k = 0; k < n; ++k) {
        E.push_back(differentiate(E0, t.x(k)) + ctx.p(0, k) * differentiate(E0, u));
        G.push_back(E.back());
    }
    std::vector<std::size_t> unknowns;
    for (int j = 0; j <= n; ++j) unknowns.push_back(def.zeta(j));
    std::map<std::size_t, Poly> zeta;
    try {
        zeta = implicit_series_solve(G, unknowns, {}, order);
    } catch (const Error& e) {
        throw Error(std::string("Segre relation cannot be solved for zeta: ") + e.what());
    }

    // 1 / (1 + R_u) as a geometric series; R_u has no terms below degree 2.
    Poly a = substitute(differentiate(def.R(), u), zeta, order);
    Poly inv = ctx.constant(1).truncated(order);
    Poly pw = ctx.constant(1);
    for (int k = 1; 2 * k <= order; ++k) {
        pw = multiply(pw, -a, order);
        inv += pw;
    }

    PDESystem out(target);
    for (int k = 0; k < n; ++k)
        for (int j = k; j < n; ++j) {
            // D_j E_k = A_kj + u_kj (1 + R_u), zeta held constant.
            Poly A = differentiate(E[k], t.x(j)) + ctx.p(0, j) * differentiate(E[k], u);
            Poly F = -multiply(substitute(A, zeta, order), inv, order);
            out.set(0, k, j, rebase(F, target.table()));
        }
    return out;
}

inline PDESystem segre_system(const DefiningSeries& def, int order) {
    return segre_system(def, order, JetContext(def.n(), 1, 3));
}

/// Real defining polynomial rho(w, wb, z, zb) of a hypersurface; zb_j, wb stand for conjugates.
class RealDefiningPolynomial {
public:
    /// Table w, wb, z1..zn, zb1..zbn: lex order on it puts w first.
    static TablePtr make_table(int n) {
        std::vector<std::string> names{"w", "wb"};
        for (int j = 1; j <= n; ++j) names.push_back("z" + std::to_string(j));
        for (int j = 1; j <= n; ++j) names.push_back("zb" + std::to_string(j));
        return VarTable::plain(names);
    }

    RealDefiningPolynomial(int n, const Poly& rho) : n_(n), rho_(rebase(rho, make_table(n))) {
        if (n < 1) throw Error("hypersurface needs n >= 1");
        if (!rho_.is_exact()) throw Error("defining function must be a polynomial");
        if (!(conjugate(rho_) == rho_)) throw Error("defining polynomial is not real");
    }

    static RealDefiningPolynomial hyperquadric(const Signature& sig) {
        TablePtr t = make_table(sig.n());
        Poly rho = Poly::var(t, 0) + Poly::var(t, 1);
        for (int j = 0; j < sig.n(); ++j)
            rho += GaussScalar(sig[j]) * Poly::var(t, z(sig.n(), j)) * Poly::var(t, zb(sig.n(), j));
        return RealDefiningPolynomial(sig.n(), rho);
    }

    int n() const { return n_; }
    const Poly& rho() const { return rho_; }
    const TablePtr& table() const { return rho_.table(); }

    static std::size_t w() { return 0; }
    static std::size_t wb() { return 1; }
    static std::size_t z(int, int j) { return static_cast<std::size_t>(2 + j); }
    static std::size_t zb(int n, int j) { return static_cast<std::size_t>(2 + n + j); }

    /// Swap every variable with its conjugate and conjugate the coefficients.
    static Poly conjugate(const Poly& f) {
        const auto& t = *f.table();
        const int n = static_cast<int>((t.size() - 2) / 2);
        std::vector<std::optional<std::size_t>> map(t.size());
        map[w()] = wb();
        map[wb()] = w();
        for (int j = 0; j < n; ++j) {
            map[z(n, j)] = zb(n, j);
            map[zb(n, j)] = z(n, j);
        }
        Poly swapped = remap(f, f.table(), map);
        Poly out(f.table(), f.bound());
        for (auto& [e, c] : swapped.terms()) out.add_term(e, c.conj());
        return out;
    }

private:
    int n_;
    Poly rho_;
};

namespace detail {

inline bool lex_greater(const Exponents& a, const Exponents& b) { return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()); }

inline const std::pair<const Exponents, GaussScalar>* lex_leading(const Poly& f) {
    const std::pair<const Exponents, GaussScalar>* best = nullptr;
    for (auto& t : f.terms())
        if (!best || lex_greater(t.first, best->first)) best = &t;
    return best;
}

inline bool divides(const Exponents& a, const Exponents& b) {
    for (std::size_t v = 0; v < a.size(); ++v)
        if (a[v] > b[v]) return false;
    return true;
}

} // namespace detail

/// Remainder of f under division by the single polynomial g (lex order).
inline Poly reduce_lex(Poly f, const Poly& g) {
    auto lead = detail::lex_leading(g);
    if (!lead) throw Error("cannot divide by the zero polynomial");
    const Exponents lm = lead->first;
    const GaussScalar lc = lead->second;
    Poly rem(f.table());
    while (!f.is_zero()) {
        auto lt = detail::lex_leading(f);
        Exponents e = lt->first;
        GaussScalar c = lt->second;
        if (detail::divides(lm, e)) {
            Exponents q = e;
            for (std::size_t v = 0; v < q.size(); ++v) q[v] = static_cast<std::uint16_t>(q[v] - lm[v]);
            f -= Poly::term(f.table(), q, c / lc) * g;
        } else {
            rem.add_term(e, c);
            f -= Poly::term(f.table(), e, c);
        }
    }
    return rem;
}

/// Holomorphic field X on (z, w) given as a VectorField on the (n, 1) jet space
/// with x_j = z_j and u = w; returns the components on rho's table.
inline std::vector<Poly> holomorphic_components(const VectorField& X, const RealDefiningPolynomial& rho) {
    const auto& ctx = X.ctx();
    const int n = rho.n();
    if (ctx.n() != n || ctx.m() != 1) throw Error("field does not live on C^{n+1} of the hypersurface");
    std::vector<std::optional<std::size_t>> map(ctx.table()->size());
    for (int j = 0; j < n; ++j) map[ctx.table()->x(j)] = RealDefiningPolynomial::z(n, j);
    map[ctx.table()->u(0)] = RealDefiningPolynomial::w();
    std::vector<Poly> out;
    for (std::size_t c = 0; c < X.components(); ++c) out.push_back(remap(X.component(c), rho.table(), map));
    return out;
}

/// Remainder of 2 Re(X rho) = X rho + conj(X rho) modulo rho.
inline Poly tangency_remainder(const VectorField& X, const RealDefiningPolynomial& rho) {
    const int n = rho.n();
    auto comps = holomorphic_components(X, rho);
    Poly Xr(rho.table());
    for (int j = 0; j < n; ++j) Xr += comps[static_cast<std::size_t>(j)] * differentiate(rho.rho(), RealDefiningPolynomial::z(n, j));
    Xr += comps[static_cast<std::size_t>(n)] * differentiate(rho.rho(), RealDefiningPolynomial::w());
    return reduce_lex(Xr + RealDefiningPolynomial::conjugate(Xr), rho.rho());
}

/// True iff Re X is tangent to {rho = 0}.
inline bool cr_tangency_check(const VectorField& X, const RealDefiningPolynomial& rho) {
    return tangency_remainder(X, rho).is_zero();
}

struct CRAutomorphismAlgebra {
    std::vector<VectorField> basis; ///< real basis; fields on the (n, 1) jet space with x = z, u = w
    std::size_t real_dimension = 0;
};

/// Holomorphic fields of degree <= 2 whose real part is tangent to the hyperquadric.
inline CRAutomorphismAlgebra cr_automorphism_algebra(const Signature& sig, const JetContext& ctx) {
    const int n = sig.n();
    if (ctx.n() != n || ctx.m() != 1) throw Error("context must be the (n, 1) jet space");
    auto rho = RealDefiningPolynomial::hyperquadric(sig);
    const auto& t = ctx.table();

    std::vector<VectorField> ansatz; // real basis of the complex coefficient space
    for (int d = 0; d <= 2; ++d)
        for (int c = 0; c <= n; ++c)
            for (auto& multi : VarTable::sorted_multi_indices(n + 1, d)) {
                Exponents e(t->size(), 0);
                for (int v : multi) ++e[static_cast<std::size_t>(v)];
                for (const GaussScalar& s : {GaussScalar(1), GaussScalar::i()}) {
                    VectorField X = VectorField::zero(ctx);
                    X.component(static_cast<std::size_t>(c)).add_term(e, s);
                    ansatz.push_back(std::move(X));
                }
            }

    std::map<Exponents, std::map<std::size_t, GaussScalar>, GradedLex> by_monomial;
    for (std::size_t k = 0; k < ansatz.size(); ++k) {
        Poly rem = tangency_remainder(ansatz[k], rho);
        for (auto& [e, c] : rem.terms()) by_monomial[e][k] += c;
    }
    Matrix rows;
    for (auto& [e, entries] : by_monomial) {
        Vector re(ansatz.size()), im(ansatz.size());
        for (auto& [k, c] : entries) {
            re[k] = GaussScalar(c.re());
            im[k] = GaussScalar(c.im());
        }
        rows.push_back(std::move(re));
        rows.push_back(std::move(im));
    }

    CRAutomorphismAlgebra out;
    for (auto& v : nullspace(rows, ansatz.size())) {
        VectorField X = VectorField::zero(ctx);
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!v[k].is_zero()) X += v[k] * ansatz[k];
        out.basis.push_back(std::move(X));
    }
    out.real_dimension = out.basis.size();
    return out;
}

inline CRAutomorphismAlgebra cr_automorphism_algebra(const Signature& sig) {
    return cr_automorphism_algebra(sig, JetContext(sig.n(), 1, 3));
}

namespace detail {

/// Real coordinates (Re, Im per frame monomial) of fields over a shared frame.
inline Matrix real_coordinates(const std::vector<VectorField>& fields) {
    std::map<std::pair<std::size_t, Exponents>, std::size_t> frame;
    for (auto& f : fields)
        for (std::size_t c = 0; c < f.components(); ++c)
            for (auto& [e, s] : f.component(c).terms()) frame.emplace(std::make_pair(c, e), 0);
    std::size_t k = 0;
    for (auto& [key, v] : frame) v = k++;
    Matrix out;
    for (auto& f : fields) {
        Vector row(2 * frame.size());
        for (std::size_t c = 0; c < f.components(); ++c)
            for (auto& [e, s] : f.component(c).terms()) {
                std::size_t at = frame.at({c, e});
                row[2 * at] = GaussScalar(s.re());
                row[2 * at + 1] = GaussScalar(s.im());
            }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace detail

/// True iff the real span A of the fields satisfies A cap iA = {0}.
inline bool totally_real_check(const std::vector<VectorField>& basis) {
    if (basis.empty()) return true;
    std::vector<VectorField> both = basis;
    for (auto& f : basis) both.push_back(GaussScalar::i() * f);
    return rank(detail::real_coordinates(both)) == 2 * rank(detail::real_coordinates(basis));
}

} // namespace jetsym
