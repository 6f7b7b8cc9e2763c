#include <gtest/gtest.h>

#include <random>

#include "jetsym/jetsym.hpp"
#include "test_support.hpp"

using namespace jetsym;
using jetsym::testing::random_poly;

namespace {

GaussScalar q(long a, long b = 1) { return GaussScalar::rational(a, b); }

struct Ctx11 {
    JetContext ctx{1, 1, 3};
    TablePtr t = ctx.table();
    Poly x = ctx.x(0), u = ctx.u(0), p = ctx.p(0, 0);
};

} // namespace

TEST(GaussScalar, CanonicalForm) {
    GaussScalar a(mpq_class(6, 4));
    EXPECT_EQ(a.str(), "3/2");
    EXPECT_EQ(GaussScalar(mpq_class(-2, -4)).str(), "1/2");
    GaussScalar z = q(1, 2) + GaussScalar::i() * q(-3, 4);
    EXPECT_EQ(z.str(), "1/2-3/4*i");
    EXPECT_EQ((GaussScalar::i() * GaussScalar::i()).str(), "-1");
    EXPECT_EQ(GaussScalar::i().str(), "i");
}

TEST(GaussScalar, FieldAxioms) {
    std::mt19937 rng(7);
    for (int k = 0; k < 200; ++k) {
        auto a = jetsym::testing::random_scalar(rng), b = jetsym::testing::random_scalar(rng),
             c = jetsym::testing::random_scalar(rng);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    }
    EXPECT_THROW(q(1) / GaussScalar(), Error);
}

TEST(Differentiate, Examples) {
    Ctx11 c;
    auto id_x = c.t->x(0), id_u = c.t->u(0);
    // d/dx1 (x1^2 u1) = 2 x1 u1
    EXPECT_EQ(differentiate(c.x * c.x * c.u, id_x), GaussScalar(2) * c.x * c.u);
    EXPECT_EQ(differentiate(c.x * c.x * c.u, id_u), c.x * c.x);

    JetContext ctx21(2, 1, 3);
    Poly p1_2 = ctx21.p(0, 1);
    auto f = p1_2 * p1_2 + ctx21.x(0);
    EXPECT_EQ(differentiate(f, ctx21.table()->jet(0, {1})), GaussScalar(2) * p1_2);

    EXPECT_THROW(differentiate(c.x, 999), Error);
}

TEST(Differentiate, TruncationDropsByOne) {
    Ctx11 c;
    Poly f = (c.x * c.x * c.x + c.x).truncated(3);
    EXPECT_EQ(*differentiate(f, c.t->x(0)).bound(), 2);
}

TEST(Substitute, Examples) {
    Ctx11 c;
    auto id_x = c.t->x(0), id_p = c.t->jet(0, {0});
    EXPECT_EQ(substitute(c.x + c.u, {{id_x, Poly(c.t)}}), c.u);
    EXPECT_EQ(substitute(c.p * c.p, {{id_p, c.u}}), c.u * c.u);
    EXPECT_EQ(substitute(c.x * c.x, {{id_x, c.x + c.ctx.constant(1)}}),
              c.x * c.x + GaussScalar(2) * c.x + c.ctx.constant(1));
    EXPECT_THROW(substitute(c.x, {{12345, c.u}}), Error);
}

TEST(Substitute, TruncatedSeriesRejectsConstantShift) {
    Ctx11 c;
    Poly s = (c.x + c.x * c.x).truncated(2);
    EXPECT_THROW(substitute(s, {{c.t->x(0), c.x + c.ctx.constant(1)}}), Error);
    // Zero-constant replacement keeps the bound.
    Poly r = substitute(s, {{c.t->x(0), c.u + c.x * c.u}});
    ASSERT_TRUE(r.bound().has_value());
    EXPECT_EQ(*r.bound(), 2);
    EXPECT_EQ(r, (c.u + c.x * c.u + c.u * c.u).truncated(2));
}

TEST(Truncation, MultiplicationKeepsLowTerms) {
    Ctx11 c;
    Poly a = (c.ctx.constant(1) + c.x + c.x * c.x).truncated(2);
    Poly b = c.ctx.constant(1) - c.x;
    Poly prod = a * b; // (1 + x + x^2 + O(x^3))(1 - x) = 1 + O(x^3)
    EXPECT_EQ(*prod.bound(), 2);
    EXPECT_EQ(prod, c.ctx.constant(1));
    // A factor of order 1 raises the reliable degree.
    EXPECT_EQ(*(a * c.x).bound(), 3);
}

TEST(ImplicitSeries, IdentityCase) {
    JetContext ctx(1, 1, 2, {"zeta"});
    auto zeta = ctx.table()->id("zeta");
    Poly G = Poly::var(ctx.table(), zeta) - ctx.x(0);
    auto sol = implicit_series_solve({G}, {zeta}, {}, 4);
    EXPECT_EQ(sol.at(zeta), ctx.x(0));
}

TEST(ImplicitSeries, HyperquadricFirstJet) {
    JetContext ctx(1, 1, 2, {"zeta1"});
    auto zeta = ctx.table()->id("zeta1");
    Poly G = ctx.p(0, 0) + Poly::var(ctx.table(), zeta);
    auto sol = implicit_series_solve({G}, {zeta}, {}, 4);
    EXPECT_EQ(sol.at(zeta), -ctx.p(0, 0));
}

TEST(ImplicitSeries, QuadraticAgainstFixedPointOracle) {
    JetContext ctx(1, 1, 2, {"zeta"});
    const auto& t = ctx.table();
    auto zid = t->id("zeta");
    Poly zeta = Poly::var(t, zid), x = ctx.x(0);
    Poly G = zeta - x - zeta * zeta;

    // Oracle: z <- x + z^2, truncated, iterated to a fixed point.
    Poly z(t);
    for (int k = 0; k < 6; ++k) z = (x + z * z).truncated(4);
    Poly expected = x + x * x + GaussScalar(2) * x * x * x + GaussScalar(5) * x * x * x * x;
    ASSERT_EQ(z, expected);

    auto sol = implicit_series_solve({G}, {zid}, {}, 4);
    EXPECT_EQ(sol.at(zid), expected);
    EXPECT_TRUE(substitute(G, sol, 4).is_zero());
}

TEST(ImplicitSeries, Errors) {
    JetContext ctx(1, 1, 2, {"zeta"});
    const auto& t = ctx.table();
    auto zid = t->id("zeta");
    Poly zeta = Poly::var(t, zid), x = ctx.x(0);
    EXPECT_THROW(implicit_series_solve({zeta * zeta - x}, {zid}, {}, 3), Error);          // singular
    EXPECT_THROW(implicit_series_solve({zeta - x + ctx.constant(1)}, {zid}, {}, 3), Error); // G(base) != 0
}

TEST(ImplicitSeries, NonOriginBase) {
    // zeta^2 = 1 + x near (zeta, x) = (1, 0): zeta = 1 + d, d = x/2 - x^2/8 + ...
    JetContext ctx(1, 1, 2, {"zeta"});
    const auto& t = ctx.table();
    auto zid = t->id("zeta");
    Poly zeta = Poly::var(t, zid), x = ctx.x(0);
    auto sol = implicit_series_solve({zeta * zeta - x - ctx.constant(1)}, {zid}, {{zid, GaussScalar(1)}}, 3);
    Poly expected = q(1, 2) * x - q(1, 8) * x * x + q(1, 16) * x * x * x;
    EXPECT_EQ(sol.at(zid), expected);
}

TEST(ImplicitSeries, BackSubstitutionProperty) {
    std::mt19937 rng(11);
    JetContext ctx(2, 1, 2, {"a", "b"});
    const auto& t = ctx.table();
    auto a = t->id("a"), b = t->id("b");
    std::vector<std::size_t> rest = {t->x(0), t->x(1), t->u(0)};
    std::vector<std::size_t> all = {t->x(0), t->x(1), t->u(0), a, b};
    for (int trial = 0; trial < 100; ++trial) {
        // Invertible linear part plus random nonlinear terms of degree >= 2.
        auto nl = [&] {
            Poly p = random_poly(rng, t, all, 3, 4);
            Poly out(t);
            for (auto& [e, c] : p.terms())
                if (degree(e) >= 2) out.add_term(e, c);
            return out;
        };
        Poly G1 = Poly::var(t, a) + Poly::var(t, b) + random_poly(rng, t, rest, 1, 2) + nl();
        Poly G2 = Poly::var(t, a) - Poly::var(t, b) + random_poly(rng, t, rest, 1, 2) + nl();
        G1.add_term(Exponents(t->size(), 0), -G1.constant_term());
        G2.add_term(Exponents(t->size(), 0), -G2.constant_term());
        auto sol = implicit_series_solve({G1, G2}, {a, b}, {}, 4);
        EXPECT_TRUE(substitute(G1, sol, 4).is_zero());
        EXPECT_TRUE(substitute(G2, sol, 4).is_zero());
    }
}

TEST(PolyProperties, RingAxioms) {
    std::mt19937 rng(1);
    JetContext ctx(2, 1, 2);
    auto vars = jetsym::testing::first_jet_vars(ctx);
    for (int k = 0; k < 150; ++k) {
        Poly a = random_poly(rng, ctx.table(), vars, 3, 4);
        Poly b = random_poly(rng, ctx.table(), vars, 3, 4);
        Poly c = random_poly(rng, ctx.table(), vars, 3, 4);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(PolyProperties, LeibnizRule) {
    std::mt19937 rng(2);
    JetContext ctx(2, 2, 2);
    auto vars = jetsym::testing::first_jet_vars(ctx);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    for (int k = 0; k < 150; ++k) {
        Poly f = random_poly(rng, ctx.table(), vars, 3, 4);
        Poly g = random_poly(rng, ctx.table(), vars, 3, 4);
        auto v = vars[pick(rng)];
        EXPECT_EQ(differentiate(f * g, v), differentiate(f, v) * g + f * differentiate(g, v));
    }
}

TEST(LinearSolve, Identity) {
    LinearSystemExact sys{{{q(1), q(0)}, {q(0), q(1)}}, {q(1), GaussScalar::i()}, {"a", "b"}};
    auto sol = solve_linear_exact(sys);
    ASSERT_TRUE(sol.consistent);
    EXPECT_EQ(sol.particular, (Vector{q(1), GaussScalar::i()}));
    EXPECT_TRUE(sol.nullspace.empty());
}

TEST(LinearSolve, RankDeficient) {
    LinearSystemExact sys{{{q(1), q(1)}, {q(2), q(2)}}, {q(3), q(6)}, {"a", "b"}};
    auto sol = solve_linear_exact(sys);
    ASSERT_TRUE(sol.consistent);
    EXPECT_EQ(sol.particular, (Vector{q(3), q(0)}));
    ASSERT_EQ(sol.nullspace.size(), 1u);
    EXPECT_EQ(sol.nullspace[0], (Vector{q(-1), q(1)}));
    EXPECT_EQ(sol.rank, 1u);
}

TEST(LinearSolve, InconsistentReportsRow) {
    LinearSystemExact sys{{{q(1), q(1)}, {q(2), q(2)}}, {q(3), q(5)}, {"a", "b"}};
    auto sol = solve_linear_exact(sys);
    EXPECT_FALSE(sol.consistent);
    ASSERT_TRUE(sol.inconsistent_row.has_value());
    EXPECT_EQ(*sol.inconsistent_row, 1u); // the second row
}

TEST(LinearSolve, RandomSolutionsSatisfySystem) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dim(1, 6), sparse(0, 2);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t r = dim(rng), c = dim(rng);
        Matrix A(r, Vector(c));
        for (auto& row : A)
            for (auto& x : row)
                if (sparse(rng) == 0) x = jetsym::testing::random_scalar(rng);
        // Consistent right-hand side A * x0.
        Vector x0(c);
        for (auto& x : x0) x = jetsym::testing::random_scalar(rng);
        Vector rhs(r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) rhs[i] += A[i][j] * x0[j];
        LinearSystemExact sys{A, rhs, std::vector<std::string>(c)};
        auto sol = solve_linear_exact(sys);
        ASSERT_TRUE(sol.consistent);
        EXPECT_EQ(sol.rank + sol.nullspace.size(), c);
        for (std::size_t i = 0; i < r; ++i) {
            GaussScalar s;
            for (std::size_t j = 0; j < c; ++j) s += A[i][j] * sol.particular[j];
            EXPECT_EQ(s, rhs[i]);
            for (auto& nv : sol.nullspace) {
                GaussScalar z;
                for (std::size_t j = 0; j < c; ++j) z += A[i][j] * nv[j];
                EXPECT_TRUE(z.is_zero());
            }
        }
    }
}

TEST(LinearSolve, Invert) {
    Matrix m{{q(2), q(1)}, {q(1), q(1)}};
    Matrix inv = invert(m);
    EXPECT_EQ(inv, (Matrix{{q(1), q(-1)}, {q(-1), q(2)}}));
    EXPECT_THROW(invert(Matrix{{q(1), q(2)}, {q(2), q(4)}}), Error);
}
