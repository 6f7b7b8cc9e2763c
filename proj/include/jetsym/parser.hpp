#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/poly.hpp"
#include "jetsym/scalar.hpp"
#include "jetsym/var_table.hpp"

namespace jetsym {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Parsed expression; variables are already resolved against a table.
struct Expr {
    enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Pow };
    Kind kind;
    std::size_t offset = 0;
    GaussScalar value;     // Constant
    std::size_t var = 0;   // Variable
    unsigned exponent = 0; // Pow
    std::vector<ExprPtr> args;
};

namespace detail {

class Parser {
public:
    Parser(std::string_view text, const TablePtr& table) : s_(text), table_(table) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip();
        if (pos_ < s_.size()) {
            if (s_[pos_] == ')') fail("unbalanced ')'");
            fail(std::string("unexpected character '") + s_[pos_] + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    static std::shared_ptr<Expr> node(Expr::Kind k, std::size_t at, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->offset = at;
        e->args = std::move(args);
        return e;
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (peek('+') || peek('-')) {
            std::size_t at = pos_;
            auto k = s_[pos_++] == '+' ? Expr::Kind::Add : Expr::Kind::Sub;
            lhs = node(k, at, {lhs, term()});
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (peek('*')) {
            std::size_t at = pos_++;
            lhs = node(Expr::Kind::Mul, at, {lhs, factor()});
        }
        return lhs;
    }

    ExprPtr factor() {
        if (peek('-')) {
            std::size_t at = pos_++;
            return node(Expr::Kind::Neg, at, {factor()});
        }
        ExprPtr base;
        if (peek('(')) {
            std::size_t open = pos_++;
            base = expr();
            if (!peek(')')) {
                if (pos_ >= s_.size()) throw ParseError(open, "unbalanced '('");
                fail("expected ')'");
            }
            ++pos_;
        } else {
            base = atom();
        }
        if (peek('^')) {
            std::size_t at = pos_++;
            skip();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("exponent must be a nonnegative integer");
            auto e = node(Expr::Kind::Pow, at, {base});
            std::size_t dpos = pos_;
            std::string d = digits();
            if (d.size() > 4 || std::stoul(d) > 1000) throw ParseError(dpos, "exponent too large");
            e->exponent = static_cast<unsigned>(std::stoul(d));
            return e;
        }
        return base;
    }

    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    ExprPtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("expected an operand");
        const std::size_t at = pos_;
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = digits();
            std::string den = "1";
            skip();
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                skip();
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    fail("malformed rational: denominator must be an unsigned integer");
                std::size_t dpos = pos_;
                den = digits();
                if (mpz_class(den) == 0) throw ParseError(dpos, "malformed rational: zero denominator");
            }
            auto e = node(Expr::Kind::Constant, at, {});
            mpq_class q{mpz_class(num), mpz_class(den)};
            q.canonicalize();
            e->value = GaussScalar(q);
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(at, pos_ - at));
            if (name == "i") {
                auto e = node(Expr::Kind::Constant, at, {});
                e->value = GaussScalar::i();
                return e;
            }
            auto id = table_ ? table_->find(name) : std::nullopt;
            if (!id) throw ParseError(at, "unknown variable '" + name + "'");
            auto e = node(Expr::Kind::Variable, at, {});
            e->var = *id;
            return e;
        }
        if (c == ')') fail("unbalanced ')'");
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    const TablePtr& table_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
/// factor := '-' factor | (atom | '(' expr ')') ('^' uint)?;
/// atom := int ('/' uint)? | 'i' | variable.
inline ExprPtr parse_expression(std::string_view text, const TablePtr& table) {
    return detail::Parser(text, table).parse();
}

inline Poly lower(const ExprPtr& e, const TablePtr& table) {
    switch (e->kind) {
    case Expr::Kind::Constant: return Poly::constant(table, e->value);
    case Expr::Kind::Variable: return Poly::var(table, e->var);
    case Expr::Kind::Neg: return -lower(e->args[0], table);
    case Expr::Kind::Add: return lower(e->args[0], table) + lower(e->args[1], table);
    case Expr::Kind::Sub: return lower(e->args[0], table) - lower(e->args[1], table);
    case Expr::Kind::Mul: return lower(e->args[0], table) * lower(e->args[1], table);
    case Expr::Kind::Pow: return power(lower(e->args[0], table), e->exponent);
    }
    throw Error("corrupt expression tree");
}

inline Poly parse_poly(std::string_view text, const TablePtr& table) {
    return lower(parse_expression(text, table), table);
}

/// A constant expression such as "3/2-1/4*i".
inline GaussScalar parse_scalar(std::string_view text) {
    static const TablePtr empty = VarTable::plain({});
    Poly p = parse_poly(text, empty);
    return p.constant_term();
}

} // namespace jetsym
