#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "jetsym/linear.hpp"
#include "jetsym/prolongation.hpp"

namespace jetsym {

/// Generic polynomial ansatz for (theta, eta): every Taylor coefficient of
/// total degree <= order in (x, u) is one unknown.
///
/// Columns are ordered by (degree, component, monomial); component c < n is
/// theta_{c+1}, component n + mu is eta^{mu+1}.
class UnknownCoefficientField {
public:
    UnknownCoefficientField(JetContext ctx, int order) : ctx_(std::move(ctx)), order_(order) {
        if (order < 0) throw Error("negative ansatz order");
        const auto& t = *ctx_.table();
        const int w = ctx_.n() + ctx_.m();
        for (int d = 0; d <= order; ++d) {
            for (int c = 0; c < w; ++c)
                for (auto& multi : VarTable::sorted_multi_indices(w, d)) {
                    Exponents e(t.size(), 0);
                    for (int v : multi) ++e[static_cast<std::size_t>(v)]; // base vars occupy ids 0..n+m-1
                    index_.emplace(std::make_pair(c, e), cols_.size());
                    cols_.push_back({c, std::move(e), d});
                }
        }
    }

    const JetContext& ctx() const { return ctx_; }
    int order() const { return order_; }
    std::size_t size() const { return cols_.size(); }
    std::size_t components() const { return static_cast<std::size_t>(ctx_.n() + ctx_.m()); }

    int component(std::size_t col) const { return cols_.at(col).component; }
    const Exponents& exponents(std::size_t col) const { return cols_.at(col).exps; }
    int degree(std::size_t col) const { return cols_.at(col).degree; }

    std::optional<std::size_t> find(int component, const Exponents& e) const {
        auto it = index_.find({component, e});
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t column(int component, const Exponents& e) const {
        auto c = find(component, e);
        if (!c) throw Error("monomial outside the ansatz");
        return *c;
    }

    std::string label(std::size_t col) const {
        const auto& c = cols_.at(col);
        std::string name = c.component < ctx_.n() ? "theta" + std::to_string(c.component + 1)
                                                  : "eta" + std::to_string(c.component - ctx_.n() + 1);
        return name + "[" + monomial_str(*ctx_.table(), c.exps) + "]";
    }

    /// Partial derivative at the origin = scale * Taylor coefficient (product of factorials).
    GaussScalar derivative_scale(std::size_t col) const {
        long s = 1;
        for (auto e : cols_.at(col).exps)
            for (long k = 2; k <= e; ++k) s *= k;
        return GaussScalar(s);
    }

    VectorField field(const Vector& values) const {
        if (values.size() != size()) throw Error("coefficient vector has the wrong length");
        std::vector<Poly> comps(components(), ctx_.zero());
        for (std::size_t col = 0; col < size(); ++col)
            comps[static_cast<std::size_t>(cols_[col].component)].add_term(cols_[col].exps, values[col]);
        std::vector<Poly> theta(comps.begin(), comps.begin() + ctx_.n());
        std::vector<Poly> eta(comps.begin() + ctx_.n(), comps.end());
        return VectorField(ctx_, std::move(theta), std::move(eta));
    }

    VectorField basis_field(std::size_t col) const {
        Vector v(size());
        v.at(col) = 1;
        return field(v);
    }

    /// Coefficients of X in the ansatz; throws if X has terms beyond the ansatz degree.
    Vector coefficients(const VectorField& X) const {
        Vector v(size());
        for (std::size_t c = 0; c < components(); ++c)
            for (auto& [e, s] : X.component(c).terms()) v[column(static_cast<int>(c), e)] = s;
        return v;
    }

private:
    struct Col {
        int component;
        Exponents exps;
        int degree;
    };
    JetContext ctx_;
    int order_;
    std::vector<Col> cols_;
    std::map<std::pair<int, Exponents>, std::size_t> index_;
};

/// omega = (alpha, beta, gamma, delta, epsilon) of length (n+m+2)(n+m):
/// alpha_j = d theta_j / dw, beta^k = d eta^k / dw, gamma = d^2 theta_1 / dx_1 dw,
/// delta = eta, epsilon = theta, all at the base point, with w = (x, u).
class InitialData {
public:
    InitialData(int n, int m, Vector values) : n_(n), m_(m), values_(std::move(values)) {
        if (values_.size() != length(n, m))
            throw Error("initial data must have length (n+m+2)(n+m) = " + std::to_string(length(n, m)));
    }
    static InitialData zero(int n, int m) { return InitialData(n, m, Vector(length(n, m))); }
    static std::size_t length(int n, int m) { return static_cast<std::size_t>((n + m + 2) * (n + m)); }

    int n() const { return n_; }
    int m() const { return m_; }
    const Vector& values() const { return values_; }

    std::size_t alpha_index(int j, int l) const { return static_cast<std::size_t>(j * w() + l); }
    std::size_t beta_index(int k, int l) const { return static_cast<std::size_t>((n_ + k) * w() + l); }
    std::size_t gamma_index(int l) const { return static_cast<std::size_t>(w() * w() + l); }
    std::size_t delta_index(int mu) const { return static_cast<std::size_t>(w() * w() + w() + mu); }
    std::size_t epsilon_index(int j) const { return static_cast<std::size_t>(w() * w() + w() + m_ + j); }

    const GaussScalar& alpha(int j, int l) const { return values_.at(alpha_index(j, l)); }
    const GaussScalar& beta(int k, int l) const { return values_.at(beta_index(k, l)); }
    const GaussScalar& gamma(int l) const { return values_.at(gamma_index(l)); }
    const GaussScalar& delta(int mu) const { return values_.at(delta_index(mu)); }
    const GaussScalar& epsilon(int j) const { return values_.at(epsilon_index(j)); }

    friend bool operator==(const InitialData& a, const InitialData& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.values_ == b.values_;
    }

private:
    int w() const { return n_ + m_; }
    int n_, m_;
    Vector values_;
};

namespace detail {
inline Exponents unit(const TablePtr& t, std::initializer_list<std::size_t> vars) {
    Exponents e(t->size(), 0);
    for (auto v : vars) ++e[v];
    return e;
}
} // namespace detail

/// Initial data of X at the origin of its coordinates.
inline InitialData initial_data_of(const VectorField& X) {
    const auto& ctx = X.ctx();
    const auto& t = ctx.table();
    const int n = ctx.n(), m = ctx.m(), w = n + m;
    InitialData out = InitialData::zero(n, m);
    Vector v = out.values();
    for (int j = 0; j < n; ++j) {
        v[out.epsilon_index(j)] = X.theta(j).constant_term();
        for (int l = 0; l < w; ++l) v[out.alpha_index(j, l)] = X.theta(j).coefficient(detail::unit(t, {std::size_t(l)}));
    }
    for (int k = 0; k < m; ++k) {
        v[out.delta_index(k)] = X.eta(k).constant_term();
        for (int l = 0; l < w; ++l) v[out.beta_index(k, l)] = X.eta(k).coefficient(detail::unit(t, {std::size_t(l)}));
    }
    for (int l = 0; l < w; ++l) {
        GaussScalar c = X.theta(0).coefficient(detail::unit(t, {0, std::size_t(l)}));
        v[out.gamma_index(l)] = l == 0 ? c * GaussScalar(2) : c;
    }
    return InitialData(n, m, std::move(v));
}

/// Where a determining equation came from: the coefficient of `monomial` in residual^mu_{ij}.
struct RowProvenance {
    int mu, i, j;
    Exponents monomial;
    int base_degree; ///< degree in (x, u)
    int jet_degree;  ///< degree in first-order jets
};

struct DeterminingSystem {
    UnknownCoefficientField field;
    LinearSystemExact sys; ///< homogeneous: rhs is zero
    std::vector<RowProvenance> provenance;

    std::size_t equations() const { return sys.rows(); }
    std::size_t unknowns() const { return field.size(); }

    std::string row_label(std::size_t r) const {
        const auto& p = provenance.at(r);
        return "residual" + std::to_string(p.mu + 1) + "_" + std::to_string(p.i + 1) + std::to_string(p.j + 1) + "[" +
               monomial_str(*field.ctx().table(), p.monomial) + "]";
    }
};

namespace detail {

struct RowKey {
    int base_degree, mu, i, j;
    Exponents jet_part, base_part;
};

struct RowKeyLess {
    bool operator()(const RowKey& a, const RowKey& b) const {
        if (std::tie(a.base_degree, a.mu, a.i, a.j) != std::tie(b.base_degree, b.mu, b.i, b.j))
            return std::tie(a.base_degree, a.mu, a.i, a.j) < std::tie(b.base_degree, b.mu, b.i, b.j);
        GradedLex lt;
        if (a.jet_part != b.jet_part) return lt(a.jet_part, b.jet_part);
        return lt(a.base_part, b.base_part);
    }
};

} // namespace detail

/// Determining equations of the ansatz: for every residual^mu_{ij} of the Lie
/// criterion, one linear equation per jet monomial coefficient.
///
/// Only coefficients the truncated ansatz determines exactly are kept: the
/// (x, u)-degree is at most order - 2, and for a system given by truncated
/// series of order T the total degree is at most T - 1.
inline DeterminingSystem generate_determining(const PDESystem& sys, const UnknownCoefficientField& field) {
    const auto& ctx = sys.ctx();
    if (!(field.ctx() == ctx)) throw Error("ansatz and system live on different jet spaces");
    const int N = field.order();
    if (N < 2) throw Error("determining equations need ansatz order >= 2");
    std::optional<int> total_limit;
    if (auto T = sys.truncation()) {
        total_limit = *T - 1;
        if (*total_limit < (N - 2) + 3)
            throw Error("system truncation order " + std::to_string(*T) + " is too small for ansatz order " +
                        std::to_string(N) + " (need at least " + std::to_string(N + 2) + ")");
    }
    const auto& table = *ctx.table();
    const std::size_t nbase = static_cast<std::size_t>(ctx.n() + ctx.m());

    std::map<detail::RowKey, std::map<std::size_t, GaussScalar>, detail::RowKeyLess> rows;
    for (std::size_t col = 0; col < field.size(); ++col) {
        auto res = lie_criterion_check(field.basis_field(col), sys);
        for (auto& [idx, poly] : res.entries()) {
            auto [mu, i, j] = idx;
            if (total_limit && poly.bound() && *poly.bound() < *total_limit)
                throw Error("internal: residual known only to degree " + std::to_string(*poly.bound()));
            for (auto& [e, c] : poly.terms()) {
                detail::RowKey key{0, mu, i, j, Exponents(table.size(), 0), Exponents(table.size(), 0)};
                int total = 0;
                for (std::size_t v = 0; v < e.size(); ++v) {
                    if (!e[v]) continue;
                    total += e[v];
                    if (v < nbase) {
                        key.base_degree += e[v];
                        key.base_part[v] = e[v];
                    } else {
                        key.jet_part[v] = e[v];
                    }
                }
                if (key.base_degree > N - 2) continue;
                if (total_limit && total > *total_limit) continue;
                rows[key][col] += c;
            }
        }
    }

    DeterminingSystem det{field, {}, {}};
    for (std::size_t col = 0; col < field.size(); ++col) det.sys.column_labels.push_back(field.label(col));
    for (auto& [key, entries] : rows) {
        Vector row(field.size());
        bool nonzero = false;
        for (auto& [col, c] : entries) {
            row[col] = c;
            nonzero = nonzero || !c.is_zero();
        }
        if (!nonzero) continue;
        Exponents mono = key.base_part;
        for (std::size_t v = 0; v < mono.size(); ++v) mono[v] = static_cast<std::uint16_t>(mono[v] + key.jet_part[v]);
        det.sys.matrix.push_back(std::move(row));
        det.sys.rhs.emplace_back();
        det.provenance.push_back({key.mu, key.i, key.j, std::move(mono), key.base_degree, degree(key.jet_part)});
    }
    return det;
}

/// A second-order derivative of the ansatz at the origin as an affine form
/// sum_l gamma[l] * gamma_l + sum_r omega[r] * Omega_r.
struct AffineForm {
    Vector gamma;
    std::map<std::size_t, GaussScalar> omega; ///< keyed by determining-system row
};

struct SecondOrderSolution {
    std::vector<std::size_t> selected_rows;      ///< rows of the invertible square subsystem, in provenance order
    std::vector<std::size_t> gamma_columns;      ///< column of d^2 theta_1 / dx_1 dw_l for each l
    std::map<std::size_t, AffineForm> derivatives; ///< every degree-2 column, in derivative units

    /// Omega_r = -(row r restricted to columns of degree <= 1) . coefficients
    static GaussScalar omega_value(const DeterminingSystem& det, std::size_t r, const Vector& coeffs) {
        GaussScalar s;
        for (std::size_t col = 0; col < det.field.size(); ++col)
            if (det.field.degree(col) <= 1 && !det.sys.matrix[r][col].is_zero())
                s -= det.sys.matrix[r][col] * coeffs[col];
        return s;
    }

    /// Value of the derivative for column `col` given gamma and the lower-order coefficients.
    GaussScalar evaluate(const DeterminingSystem& det, std::size_t col, const Vector& gamma,
                         const Vector& coeffs) const {
        const auto& form = derivatives.at(col);
        GaussScalar s;
        for (std::size_t l = 0; l < gamma.size(); ++l) s += form.gamma[l] * gamma[l];
        for (auto& [r, c] : form.omega) s += c * omega_value(det, r, coeffs);
        return s;
    }
};

/// Expresses every second derivative at the origin through gamma and Omega by
/// inverting a square subsystem M' chosen greedily from the (x, u)-degree-0 rows.
inline SecondOrderSolution solve_second_order(const DeterminingSystem& det) {
    const auto& f = det.field;
    if (f.order() < 2) throw Error("second-order solve needs ansatz order >= 2");
    const auto& t = f.ctx().table();
    const int w = f.ctx().n() + f.ctx().m();

    SecondOrderSolution out;
    std::vector<GaussScalar> gamma_scale;
    for (int l = 0; l < w; ++l) {
        out.gamma_columns.push_back(f.column(0, detail::unit(t, {0, std::size_t(l)})));
        gamma_scale.push_back(l == 0 ? GaussScalar(2) : GaussScalar(1));
    }
    std::vector<std::size_t> targets; // v'
    for (std::size_t col = 0; col < f.size(); ++col)
        if (f.degree(col) == 2 &&
            std::find(out.gamma_columns.begin(), out.gamma_columns.end(), col) == out.gamma_columns.end())
            targets.push_back(col);
    const std::size_t k = targets.size();

    // Greedy independent-row selection in provenance order.
    std::vector<Vector> echelon;
    std::vector<std::size_t> echelon_pivot;
    for (std::size_t r = 0; r < det.sys.rows() && out.selected_rows.size() < k; ++r) {
        if (det.provenance[r].base_degree != 0) continue;
        Vector v(k);
        bool any = false;
        for (std::size_t a = 0; a < k; ++a) {
            v[a] = det.sys.matrix[r][targets[a]];
            any = any || !v[a].is_zero();
        }
        if (!any) continue;
        for (std::size_t e = 0; e < echelon.size(); ++e) {
            const auto& piv = echelon[e][echelon_pivot[e]];
            if (v[echelon_pivot[e]].is_zero()) continue;
            GaussScalar fac = v[echelon_pivot[e]] / piv;
            for (std::size_t a = 0; a < k; ++a)
                if (!echelon[e][a].is_zero()) v[a] -= fac * echelon[e][a];
        }
        auto nz = std::find_if(v.begin(), v.end(), [](const GaussScalar& s) { return !s.is_zero(); });
        if (nz == v.end()) continue;
        echelon_pivot.push_back(static_cast<std::size_t>(nz - v.begin()));
        echelon.push_back(std::move(v));
        out.selected_rows.push_back(r);
    }
    if (out.selected_rows.size() < k) {
        std::vector<bool> covered(k, false);
        for (auto p : echelon_pivot) covered[p] = true;
        std::size_t miss = static_cast<std::size_t>(std::find(covered.begin(), covered.end(), false) - covered.begin());
        throw Error("second-order subsystem is singular: " + f.label(targets[miss]) +
                    " is not determined by the degree-0 determining equations (rank " +
                    std::to_string(out.selected_rows.size()) + " of " + std::to_string(k) + ")");
    }

    Matrix square(k, Vector(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) square[a][b] = det.sys.matrix[out.selected_rows[a]][targets[b]];
    Matrix inv = invert(square);

    for (std::size_t l = 0; l < static_cast<std::size_t>(w); ++l) {
        AffineForm form{Vector(static_cast<std::size_t>(w)), {}};
        form.gamma[l] = 1;
        out.derivatives.emplace(out.gamma_columns[l], std::move(form));
    }
    for (std::size_t a = 0; a < k; ++a) {
        const GaussScalar scale = f.derivative_scale(targets[a]);
        AffineForm form{Vector(static_cast<std::size_t>(w)), {}};
        for (std::size_t r = 0; r < k; ++r) {
            if (inv[a][r].is_zero()) continue;
            const std::size_t row = out.selected_rows[r];
            form.omega[row] = scale * inv[a][r];
            for (std::size_t l = 0; l < static_cast<std::size_t>(w); ++l) {
                const auto& m = det.sys.matrix[row][out.gamma_columns[l]];
                if (!m.is_zero()) form.gamma[l] -= scale * inv[a][r] * m / gamma_scale[l];
            }
        }
        out.derivatives.emplace(targets[a], std::move(form));
    }
    return out;
}

/// Re-centres the system at `point` = (x_0, u_0) via x <- x + x_0, u <- u + u_0.
inline PDESystem translate(const PDESystem& sys, const Vector& point) {
    const auto& ctx = sys.ctx();
    if (point.empty()) return sys;
    const std::size_t w = static_cast<std::size_t>(ctx.n() + ctx.m());
    if (point.size() != w) throw Error("base point needs n + m = " + std::to_string(w) + " coordinates");
    std::map<std::size_t, Poly> shift;
    for (std::size_t v = 0; v < w; ++v)
        if (!point[v].is_zero()) shift.emplace(v, Poly::var(ctx.table(), v) + ctx.constant(point[v]));
    if (shift.empty()) return sys;
    PDESystem out(ctx);
    for (int k = 0; k < ctx.m(); ++k)
        for (int i = 0; i < ctx.n(); ++i)
            for (int j = i; j < ctx.n(); ++j) out.set(k, i, j, substitute(sys.F(k, i, j), shift));
    return out;
}

/// Taylor coefficients (degree <= order) of the symmetry with initial data
/// omega at `point`, computed layer by layer; coefficients are in coordinates
/// centred at the point.
inline VectorField taylor_from_initial_data(const PDESystem& system, const Vector& point, const InitialData& omega,
                                            int order) {
    if (order < 2) throw Error("Taylor recursion needs order >= 2");
    const auto& ctx = system.ctx();
    const int n = ctx.n(), m = ctx.m(), w = n + m;
    if (omega.n() != n || omega.m() != m) throw Error("initial data dimensions do not match the system");
    PDESystem sys = translate(system, point);
    UnknownCoefficientField field(ctx, order);
    DeterminingSystem det = generate_determining(sys, field);
    SecondOrderSolution second = solve_second_order(det);
    const auto& t = ctx.table();

    Vector coeffs(field.size());
    for (int j = 0; j < n; ++j) {
        coeffs[field.column(j, Exponents(t->size(), 0))] = omega.epsilon(j);
        for (int l = 0; l < w; ++l) coeffs[field.column(j, detail::unit(t, {std::size_t(l)}))] = omega.alpha(j, l);
    }
    for (int k = 0; k < m; ++k) {
        coeffs[field.column(n + k, Exponents(t->size(), 0))] = omega.delta(k);
        for (int l = 0; l < w; ++l) coeffs[field.column(n + k, detail::unit(t, {std::size_t(l)}))] = omega.beta(k, l);
    }
    Vector gamma(static_cast<std::size_t>(w));
    for (int l = 0; l < w; ++l) gamma[static_cast<std::size_t>(l)] = omega.gamma(l);
    for (auto& [col, form] : second.derivatives)
        coeffs[col] = second.evaluate(det, col, gamma, coeffs) / field.derivative_scale(col);

    auto check_layer = [&](int base_degree, int layer) {
        for (std::size_t r = 0; r < det.sys.rows(); ++r) {
            if (det.provenance[r].base_degree != base_degree) continue;
            GaussScalar s;
            for (std::size_t col = 0; col < field.size(); ++col)
                if (!det.sys.matrix[r][col].is_zero()) s += det.sys.matrix[r][col] * coeffs[col];
            if (!s.is_zero())
                throw Error("Taylor recursion inconsistent at layer " + std::to_string(layer) + ": equation " +
                            det.row_label(r) + " fails (non-involutive system or inadmissible initial data)");
        }
    };
    check_layer(0, 2);

    for (int layer = 3; layer <= order; ++layer) {
        std::vector<std::size_t> cols;
        for (std::size_t col = 0; col < field.size(); ++col)
            if (field.degree(col) == layer) cols.push_back(col);
        LinearSystemExact step;
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < det.sys.rows(); ++r) {
            if (det.provenance[r].base_degree != layer - 2) continue;
            Vector row;
            for (auto col : cols) row.push_back(det.sys.matrix[r][col]);
            GaussScalar rhs;
            for (std::size_t col = 0; col < field.size(); ++col)
                if (field.degree(col) < layer && !det.sys.matrix[r][col].is_zero())
                    rhs -= det.sys.matrix[r][col] * coeffs[col];
            step.matrix.push_back(std::move(row));
            step.rhs.push_back(std::move(rhs));
            rows.push_back(r);
        }
        for (auto col : cols) step.column_labels.push_back(field.label(col));
        auto sol = solve_linear_exact(step);
        if (!sol.consistent)
            throw Error("Taylor recursion inconsistent at layer " + std::to_string(layer) + ": equation " +
                        det.row_label(rows[*sol.inconsistent_row]) +
                        " fails (non-involutive system or inadmissible initial data)");
        if (!sol.nullspace.empty())
            throw Error("Taylor recursion underdetermined at layer " + std::to_string(layer));
        for (std::size_t a = 0; a < cols.size(); ++a) coeffs[cols[a]] = sol.particular[a];
    }
    return field.field(coeffs);
}

struct SymmetryAlgebra {
    std::vector<VectorField> basis; ///< degree <= order truncations, coordinates centred at the point
    std::size_t dimension = 0;
    std::size_t bound = 0; ///< (n+m+2)(n+m)
};

/// Nullspace of the full determining system of the degree-<=order ansatz.
inline SymmetryAlgebra symmetry_algebra(const PDESystem& system, int order = 3, const Vector& point = {}) {
    PDESystem sys = translate(system, point);
    UnknownCoefficientField field(sys.ctx(), order);
    DeterminingSystem det = generate_determining(sys, field);
    SymmetryAlgebra out;
    for (auto& v : nullspace(det.sys.matrix, field.size())) out.basis.push_back(field.field(v));
    out.dimension = out.basis.size();
    out.bound = InitialData::length(sys.ctx().n(), sys.ctx().m());
    return out;
}

} // namespace jetsym
