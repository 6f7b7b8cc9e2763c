#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetsym/linear.hpp"
#include "jetsym/prolongation.hpp"

namespace jetsym {

/// [X, Y] with coefficients X(Y_c) - Y(X_c).
inline VectorField bracket(const VectorField& X, const VectorField& Y) {
    if (!(X.ctx() == Y.ctx())) throw Error("bracket of fields on different spaces");
    VectorField out = VectorField::zero(X.ctx());
    for (std::size_t c = 0; c < X.components(); ++c)
        out.component(c) = X.apply(Y.component(c)) - Y.apply(X.component(c));
    return out;
}

namespace detail {

struct FrameLess {
    bool operator()(const std::pair<std::size_t, Exponents>& a, const std::pair<std::size_t, Exponents>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return GradedLex{}(a.second, b.second);
    }
};

/// Shared (component, monomial) frame, ordered by component then graded-lex.
class MonomialFrame {
public:
    void add(const VectorField& X) {
        for (std::size_t c = 0; c < X.components(); ++c)
            for (auto& [e, s] : X.component(c).terms()) index_.emplace(std::make_pair(c, e), 0);
        std::size_t k = 0;
        for (auto& [key, v] : index_) v = k++;
    }
    std::size_t size() const { return index_.size(); }

    std::optional<Vector> coordinates(const VectorField& X) const {
        Vector v(size());
        for (std::size_t c = 0; c < X.components(); ++c)
            for (auto& [e, s] : X.component(c).terms()) {
                auto it = index_.find({c, e});
                if (it == index_.end()) return std::nullopt;
                v[it->second] = s;
            }
        return v;
    }

    VectorField field(const JetContext& ctx, const Vector& v) const {
        VectorField out = VectorField::zero(ctx);
        for (auto& [key, k] : index_)
            if (!v[k].is_zero()) out.component(key.first).add_term(key.second, v[k]);
        return out;
    }

private:
    std::map<std::pair<std::size_t, Exponents>, std::size_t, FrameLess> index_;
};

inline Matrix coordinate_matrix(const std::vector<VectorField>& fields, MonomialFrame& frame) {
    for (auto& f : fields) frame.add(f);
    Matrix m;
    for (auto& f : fields) m.push_back(*frame.coordinates(f));
    return m;
}

} // namespace detail

/// Exact rank of the fields' coefficient vectors.
inline std::size_t span_dimension(const std::vector<VectorField>& fields) {
    detail::MonomialFrame frame;
    return rank(detail::coordinate_matrix(fields, frame));
}

/// True when both families span the same subspace.
inline bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
    std::vector<VectorField> all = a;
    all.insert(all.end(), b.begin(), b.end());
    const std::size_t r = span_dimension(all);
    return span_dimension(a) == r && span_dimension(b) == r;
}

/// Linearly independent polynomial fields with optional display names.
class FieldBasis {
public:
    FieldBasis() = default;
    FieldBasis(std::vector<VectorField> fields, std::vector<std::string> names = {})
        : fields_(std::move(fields)), names_(std::move(names)) {
        if (names_.empty())
            for (std::size_t k = 0; k < fields_.size(); ++k) names_.push_back("X" + std::to_string(k + 1));
        if (names_.size() != fields_.size()) throw Error("one name per field required");
        for (auto& f : fields_)
            if (!(f.ctx() == fields_.front().ctx())) throw Error("basis fields live on different spaces");
        coords_ = detail::coordinate_matrix(fields_, frame_);
        if (rank(coords_) != fields_.size()) throw Error("basis fields are linearly dependent");
    }

    std::size_t size() const { return fields_.size(); }
    const std::vector<VectorField>& fields() const { return fields_; }
    const VectorField& operator[](std::size_t k) const { return fields_.at(k); }
    const std::vector<std::string>& names() const { return names_; }
    const Matrix& coordinates() const { return coords_; }

    /// Coefficients c with Y = sum c_k X_k, or nullopt when Y is outside the span.
    std::optional<Vector> express(const VectorField& Y) const {
        if (fields_.empty()) return Y.is_zero() ? std::optional<Vector>(Vector{}) : std::nullopt;
        auto y = frame_.coordinates(Y);
        if (!y) return std::nullopt;
        LinearSystemExact sys;
        sys.matrix.assign(frame_.size(), Vector(size()));
        for (std::size_t k = 0; k < size(); ++k)
            for (std::size_t r = 0; r < frame_.size(); ++r) sys.matrix[r][k] = coords_[k][r];
        sys.rhs = *y;
        auto sol = solve_linear_exact(sys);
        if (!sol.consistent) return std::nullopt;
        return sol.particular;
    }

    /// Y reduced modulo the span; zero iff Y lies in the span.
    VectorField residual(const VectorField& Y) const {
        if (fields_.empty()) return Y;
        detail::MonomialFrame frame = frame_;
        frame.add(Y);
        Matrix basis;
        for (auto& f : fields_) basis.push_back(*frame.coordinates(f));
        auto piv = detail::rref(basis, frame.size());
        Vector y = *frame.coordinates(Y);
        for (auto [c, r] : piv) {
            if (y[c].is_zero()) continue;
            GaussScalar f = y[c];
            for (std::size_t k = 0; k < y.size(); ++k)
                if (!basis[r][k].is_zero()) y[k] -= f * basis[r][k];
        }
        return frame.field(fields_.front().ctx(), y);
    }

private:
    std::vector<VectorField> fields_;
    std::vector<std::string> names_;
    detail::MonomialFrame frame_;
    Matrix coords_;
};

/// Point symmetries of u_xx = 0 in the order U, V, W, A, B, C, X, Y.
inline FieldBasis flat_generators(const JetContext& ctx) {
    const int n = ctx.n(), m = ctx.m();
    std::vector<VectorField> fields;
    std::vector<std::string> names;
    auto idx = [](int a) { return std::to_string(a + 1); };
    auto push = [&](std::string name, int comp, Poly coeff) {
        VectorField f = VectorField::zero(ctx);
        f.component(static_cast<std::size_t>(comp)) = std::move(coeff);
        fields.push_back(std::move(f));
        names.push_back(std::move(name));
    };
    for (int k = 0; k < n; ++k) push("U" + idx(k), k, ctx.constant(1));
    for (int mu = 0; mu < m; ++mu) push("V" + idx(mu), n + mu, ctx.constant(1));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) push("W" + idx(j) + "_" + idx(k), k, ctx.x(j));
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < n; ++k) push("A" + idx(j) + "_" + idx(k), k, ctx.u(j));
    for (int k = 0; k < n; ++k)
        for (int mu = 0; mu < m; ++mu) push("B" + idx(k) + "_" + idx(mu), n + mu, ctx.x(k));
    for (int k = 0; k < m; ++k)
        for (int mu = 0; mu < m; ++mu) push("C" + idx(k) + "_" + idx(mu), n + mu, ctx.u(k));
    for (int j = 0; j < n; ++j) {
        VectorField f = VectorField::zero(ctx);
        for (int k = 0; k < n; ++k) f.component(static_cast<std::size_t>(k)) = ctx.x(j) * ctx.x(k);
        for (int mu = 0; mu < m; ++mu) f.component(static_cast<std::size_t>(n + mu)) = ctx.x(j) * ctx.u(mu);
        fields.push_back(std::move(f));
        names.push_back("X" + idx(j));
    }
    for (int nu = 0; nu < m; ++nu) {
        VectorField f = VectorField::zero(ctx);
        for (int k = 0; k < n; ++k) f.component(static_cast<std::size_t>(k)) = ctx.x(k) * ctx.u(nu);
        for (int mu = 0; mu < m; ++mu) f.component(static_cast<std::size_t>(n + mu)) = ctx.u(nu) * ctx.u(mu);
        fields.push_back(std::move(f));
        names.push_back("Y" + idx(nu));
    }
    return FieldBasis(std::move(fields), std::move(names));
}

inline FieldBasis flat_generators(int n, int m) { return flat_generators(JetContext(n, m, 2)); }

struct ClosureFailure {
    std::size_t a, b;
    VectorField bracket;
    VectorField residual;
};

struct ClosureReport {
    bool closes = false;
    /// constants[a][b][c]: [X_a, X_b] = sum_c constants[a][b][c] X_c
    std::vector<std::vector<Vector>> constants;
    std::optional<ClosureFailure> failure;
};

/// Structure constants of the span, or the first pair (a < b) whose bracket leaves it.
inline ClosureReport closure_check(const FieldBasis& basis) {
    const std::size_t d = basis.size();
    ClosureReport out;
    out.constants.assign(d, std::vector<Vector>(d, Vector(d)));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            VectorField br = bracket(basis[a], basis[b]);
            auto c = basis.express(br);
            if (!c) {
                out.constants.clear();
                out.failure = ClosureFailure{a, b, br, basis.residual(br)};
                return out;
            }
            out.constants[a][b] = *c;
            for (std::size_t k = 0; k < d; ++k) out.constants[b][a][k] = -(*c)[k];
        }
    out.closes = true;
    return out;
}

} // namespace jetsym
