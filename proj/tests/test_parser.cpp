#include <gtest/gtest.h>

#include <random>

#include "jetsym/jetsym.hpp"
#include "test_support.hpp"

using namespace jetsym;

namespace {

std::size_t error_offset(const std::string& text, const TablePtr& table) {
    try {
        parse_expression(text, table);
    } catch (const ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "no parse error for '" << text << "'";
    return SIZE_MAX;
}

} // namespace

TEST(Parser, SumOfVariableAndScaledVariable) {
    JetContext ctx(1, 1, 3);
    auto ast = parse_expression("x1 + 3/2*u1", ctx.table());
    ASSERT_EQ(ast->kind, Expr::Kind::Add);
    EXPECT_EQ(ast->args[0]->kind, Expr::Kind::Variable);
    EXPECT_EQ(ast->args[0]->var, ctx.table()->x(0));
    ASSERT_EQ(ast->args[1]->kind, Expr::Kind::Mul);
    EXPECT_EQ(ast->args[1]->args[0]->value, GaussScalar::rational(3, 2));
    EXPECT_EQ(lower(ast, ctx.table()), ctx.x(0) + GaussScalar::rational(3, 2) * ctx.u(0));
}

TEST(Parser, JetVariablesAndImaginaryUnit) {
    JetContext ctx(2, 2, 3);
    EXPECT_EQ(parse_poly("p1_2^2 - i*x1*u2", ctx.table()),
              ctx.p(0, 1) * ctx.p(0, 1) - GaussScalar::i() * ctx.x(0) * ctx.u(1));
    EXPECT_EQ(parse_poly("p2_1_2", ctx.table()), ctx.jet(1, {0, 1}));
}

TEST(Parser, Lowering) {
    JetContext ctx(1, 1, 3);
    EXPECT_TRUE(parse_poly("0", ctx.table()).is_zero());
    Poly x = ctx.x(0), u = ctx.u(0);
    EXPECT_EQ(parse_poly("(x1+u1)^2", ctx.table()), x * x + GaussScalar(2) * x * u + u * u);
    EXPECT_EQ(parse_poly("i^2", ctx.table()), ctx.constant(-1));
    EXPECT_EQ(parse_poly("-x1^2", ctx.table()), -(x * x));
    EXPECT_EQ(parse_poly("2 - -x1", ctx.table()), ctx.constant(2) + x);
    EXPECT_EQ(parse_poly("1 - x1 - u1", ctx.table()), ctx.constant(1) - x - u);
    EXPECT_EQ(parse_poly("4/6", ctx.table()), ctx.constant(GaussScalar::rational(2, 3)));
    EXPECT_EQ(parse_scalar("3/2-1/4*i"), GaussScalar(mpq_class(3, 2), mpq_class(-1, 4)));
}

TEST(Parser, ErrorOffsets) {
    JetContext ctx(1, 1, 3);
    const auto& t = ctx.table();
    EXPECT_EQ(error_offset("x1 + ", t), 5u);
    EXPECT_EQ(error_offset("x1 + y7", t), 5u);
    EXPECT_EQ(error_offset("3/x1", t), 2u);
    EXPECT_EQ(error_offset("3/0", t), 2u);
    EXPECT_EQ(error_offset("(x1 + u1", t), 0u);
    EXPECT_EQ(error_offset("x1)", t), 2u);
    EXPECT_EQ(error_offset("x1 $ 2", t), 3u);
    EXPECT_EQ(error_offset("x1^-1", t), 3u);
    EXPECT_EQ(error_offset("x1 u1", t), 3u);
    try {
        parse_expression("x1 + ", t);
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("offset 5"), std::string::npos);
    }
}

TEST(ParserProperties, RoundTrip) {
    std::mt19937 rng(71);
    JetContext ctx(2, 2, 3, {"zeta1"});
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < ctx.table()->size(); ++v) vars.push_back(v);
    for (int trial = 0; trial < 150; ++trial) {
        Poly f = jetsym::testing::random_poly(rng, ctx.table(), vars, 4, 6);
        EXPECT_EQ(parse_poly(f.str(), ctx.table()), f) << f.str();
    }
}

TEST(ParserProperties, RoundTripLargeCoefficients) {
    JetContext ctx(1, 1, 3);
    Poly f = ctx.x(0);
    for (int k = 0; k < 6; ++k) f = f * (GaussScalar::rational(1234567, 89) * ctx.x(0) + GaussScalar::i() * ctx.u(0));
    EXPECT_EQ(parse_poly(f.str(), ctx.table()), f);
}
