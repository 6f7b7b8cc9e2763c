#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/scalar.hpp"
#include "jetsym/var_table.hpp"

namespace jetsym {

using Exponents = std::vector<std::uint16_t>;

inline int degree(const Exponents& e) {
    int d = 0;
    for (auto v : e) d += v;
    return d;
}

/// Graded-lexicographic order: lower total degree first, then the larger
/// exponent of the earliest variable first (x1^2 < x1*x2 < x2^2).
struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int da = degree(a), db = degree(b);
        if (da != db) return da < db;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k] != b[k]) return a[k] > b[k];
        return false;
    }
};

/// Sparse multivariate polynomial over GaussScalar, optionally a power series
/// truncated at a total degree `bound` (terms above the bound are unknown, not zero).
class Poly {
public:
    using Terms = std::map<Exponents, GaussScalar, GradedLex>;

    Poly() = default;
    explicit Poly(TablePtr table, std::optional<int> bound = std::nullopt)
        : table_(std::move(table)), bound_(bound) {
        if (!table_) throw Error("polynomial without variable table");
        if (bound_ && *bound_ < -1) bound_ = -1;
    }

    static Poly constant(TablePtr table, const GaussScalar& c) {
        Poly p(std::move(table));
        p.add_term(Exponents(p.table_->size(), 0), c);
        return p;
    }
    static Poly var(TablePtr table, std::size_t id) {
        Poly p(std::move(table));
        p.check_var(id);
        Exponents e(p.table_->size(), 0);
        e[id] = 1;
        p.add_term(e, 1);
        return p;
    }
    static Poly term(TablePtr table, Exponents e, const GaussScalar& c) {
        Poly p(std::move(table));
        if (e.size() != p.table_->size()) throw Error("exponent vector length mismatch");
        p.add_term(e, c);
        return p;
    }

    const TablePtr& table() const { return table_; }
    const Terms& terms() const { return terms_; }
    std::optional<int> bound() const { return bound_; }
    bool is_exact() const { return !bound_.has_value(); }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Highest degree among known terms, -1 for zero.
    int total_degree() const { return terms_.empty() ? -1 : degree(terms_.rbegin()->first); }

    /// Lowest degree that may be nonzero, counting the unknown tail of a truncated series.
    int order() const {
        int o = INT_MAX;
        if (!terms_.empty()) o = degree(terms_.begin()->first);
        if (bound_) o = std::min(o, *bound_ + 1);
        return o;
    }

    GaussScalar coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? GaussScalar() : it->second;
    }
    GaussScalar constant_term() const { return coefficient(Exponents(table_->size(), 0)); }

    bool depends_on(std::size_t id) const {
        for (auto& [e, c] : terms_)
            if (e[id] != 0) return true;
        return false;
    }
    int degree_in(std::size_t id) const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max<int>(d, e[id]);
        return d;
    }

    Poly truncated(int b) const {
        Poly out(table_, bound_ ? std::min(*bound_, b) : b);
        for (auto& [e, c] : terms_)
            if (degree(e) <= *out.bound_) out.terms_.emplace(e, c);
        return out;
    }

    /// Adds c * x^e; silently drops terms above the truncation bound.
    void add_term(const Exponents& e, const GaussScalar& c) {
        if (c.is_zero()) return;
        if (bound_ && degree(e) > *bound_) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        check_table(o);
        merge_bound(o.bound_);
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_table(o);
        merge_bound(o.bound_);
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Poly& operator*=(const GaussScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    Poly operator-() const {
        Poly out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const GaussScalar& s) { return a *= s; }
    friend Poly operator*(const GaussScalar& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b);

    /// Equality of known terms; the truncation bound is not compared.
    friend bool operator==(const Poly& a, const Poly& b) {
        return a.table_ == b.table_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    void check_var(std::size_t id) const {
        if (id >= table_->size()) throw Error("unknown variable id " + std::to_string(id));
    }
    void check_table(const Poly& o) const {
        if (table_ != o.table_) throw Error("polynomials over different variable tables");
    }

    /// Canonical expression-language text, terms in graded-lex order.
    std::string str() const;

private:
    void merge_bound(std::optional<int> other) {
        if (!other) return;
        if (bound_ && *bound_ <= *other) return;
        bound_ = other;
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (degree(it->first) > *bound_)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    friend Poly multiply(const Poly& a, const Poly& b, std::optional<int> cap);

    TablePtr table_;
    Terms terms_;
    std::optional<int> bound_;
};

namespace detail {
inline int sat_add(int a, int b) {
    if (a == INT_MAX || b == INT_MAX) return INT_MAX;
    return a + b;
}
} // namespace detail

/// Product with an optional extra degree cap. The result bound accounts for
/// the unknown tails of both factors (unknown tail of a times lowest degree of b).
inline Poly multiply(const Poly& a, const Poly& b, std::optional<int> cap = std::nullopt) {
    a.check_table(b);
    int bound = INT_MAX;
    if (a.bound_) bound = std::min(bound, detail::sat_add(*a.bound_ + 1, b.order()) - 1);
    if (b.bound_) bound = std::min(bound, detail::sat_add(*b.bound_ + 1, a.order()) - 1);
    if (cap) bound = std::min(bound, *cap);
    Poly out(a.table_, bound == INT_MAX ? std::nullopt : std::optional<int>(bound));
    if (a.is_zero() || b.is_zero()) return out;
    const std::size_t nv = a.table_->size();
    Exponents e(nv);
    for (auto& [ea, ca] : a.terms_) {
        int da = degree(ea);
        for (auto& [eb, cb] : b.terms_) {
            if (out.bound_ && da + degree(eb) > *out.bound_) break; // b's terms ascend in degree
            for (std::size_t k = 0; k < nv; ++k) e[k] = static_cast<std::uint16_t>(ea[k] + eb[k]);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

inline Poly operator*(const Poly& a, const Poly& b) { return multiply(a, b); }

inline Poly power(const Poly& p, unsigned k, std::optional<int> cap = std::nullopt) {
    Poly result = Poly::constant(p.table(), 1);
    if (cap) result = result.truncated(*cap);
    Poly base = p;
    while (k) {
        if (k & 1u) result = multiply(result, base, cap);
        k >>= 1u;
        if (k) base = multiply(base, base, cap);
    }
    return result;
}

/// Exact partial derivative; a truncation bound drops by one.
inline Poly differentiate(const Poly& f, std::size_t var) {
    f.check_var(var);
    std::optional<int> b = f.bound();
    if (b) b = *b - 1;
    Poly out(f.table(), b);
    for (auto& [e, c] : f.terms()) {
        if (e[var] == 0) continue;
        Exponents d = e;
        --d[var];
        out.add_term(d, c * GaussScalar(static_cast<long>(e[var])));
    }
    return out;
}

/// Simultaneous substitution v <- bindings[v]; `cap` optionally truncates the result.
///
/// Substituting a series with a nonzero constant term into a truncated series
/// is rejected: the unknown tail would contaminate every degree.
inline Poly substitute(const Poly& f, const std::map<std::size_t, Poly>& bindings,
                       std::optional<int> cap = std::nullopt) {
    const auto& table = f.table();
    for (auto& [v, g] : bindings) {
        f.check_var(v);
        f.check_table(g);
    }
    std::optional<int> bound = cap;
    if (f.bound()) {
        int min_ord = INT_MAX;
        for (std::size_t v = 0; v < table->size(); ++v) {
            auto it = bindings.find(v);
            int o = it == bindings.end() ? 1 : it->second.order();
            min_ord = std::min(min_ord, o);
        }
        if (min_ord == 0)
            throw Error("substitution of a series with nonzero constant term into a truncated series "
                        "needs an explicit expansion point");
        if (min_ord != INT_MAX) {
            long b = static_cast<long>(*f.bound() + 1) * min_ord - 1;
            int fb = b > INT_MAX / 2 ? INT_MAX / 2 : static_cast<int>(b);
            bound = bound ? std::min(*bound, fb) : fb;
        }
    }
    Poly out(table, bound);
    std::map<std::pair<std::size_t, unsigned>, Poly> powers;
    auto pw = [&](std::size_t v, unsigned k) -> const Poly& {
        auto key = std::make_pair(v, k);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        return powers.emplace(key, power(bindings.at(v), k, bound)).first->second;
    };
    for (auto& [e, c] : f.terms()) {
        Exponents rest = e;
        Poly t(table, bound);
        bool any = false;
        for (auto& [v, g] : bindings) {
            if (rest[v] == 0) continue;
            any = true;
            rest[v] = 0;
        }
        t.add_term(rest, c);
        if (any) {
            for (auto& [v, g] : bindings) {
                if (e[v] == 0) continue;
                t = multiply(t, pw(v, e[v]), bound);
                if (t.is_zero() && t.is_exact()) break;
            }
        }
        out += t;
    }
    return out;
}

/// Moves f onto another table; mapping[v] gives the new id of old variable v
/// (nullopt: the variable must not occur in f).
inline Poly remap(const Poly& f, TablePtr target, const std::vector<std::optional<std::size_t>>& mapping) {
    Poly out(target, f.bound());
    for (auto& [e, c] : f.terms()) {
        Exponents ne(target->size(), 0);
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (v >= mapping.size() || !mapping[v])
                throw Error("variable '" + (*f.table())[v].name + "' has no image in the target table");
            ne[*mapping[v]] = static_cast<std::uint16_t>(ne[*mapping[v]] + e[v]);
        }
        out.add_term(ne, c);
    }
    return out;
}

/// Moves f onto another table, matching variables by name.
inline Poly rebase(const Poly& f, TablePtr target) {
    if (f.table() == target) return f;
    std::vector<std::optional<std::size_t>> mapping;
    for (auto& v : f.table()->variables()) mapping.push_back(target->find(v.name));
    return remap(f, std::move(target), mapping);
}

inline std::string monomial_str(const VarTable& table, const Exponents& e) {
    std::string out;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        if (!out.empty()) out += "*";
        out += table[v].name;
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
    }
    return out.empty() ? "1" : out;
}

inline std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        bool unit_mono = degree(e) == 0;
        std::string mono = monomial_str(*table_, e);
        const bool imaginary = !c.is_real() && sgn(c.re()) == 0;
        if (c.is_real() || imaginary) {
            const mpq_class& part = imaginary ? c.im() : c.re();
            bool neg = sgn(part) < 0;
            mpq_class mag = abs(part);
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            std::string factor = mag.get_str();
            if (imaginary) factor = mag == 1 ? "i" : factor + "*i";
            if (unit_mono)
                os << factor;
            else if (mag == 1 && !imaginary)
                os << mono;
            else
                os << factor << "*" << mono;
        } else {
            if (!first) os << " + ";
            os << "(" << c.str() << ")";
            if (!unit_mono) os << "*" << mono;
        }
        first = false;
    }
    return os.str();
}

} // namespace jetsym
