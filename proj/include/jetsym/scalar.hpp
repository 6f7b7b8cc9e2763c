#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <utility>

#include "jetsym/error.hpp"

namespace jetsym {

/// Exact Gaussian rational a + b*i with a, b in Q.
///
/// Both parts are GMP rationals kept in canonical form (lowest terms,
/// positive denominator), so equality is structural.
class GaussScalar {
public:
    GaussScalar() = default;
    GaussScalar(long value) : re_(value) {}
    GaussScalar(int value) : re_(value) {}
    GaussScalar(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussScalar rational(long num, long den) {
        if (den == 0) throw Error("zero denominator");
        return GaussScalar(mpq_class(num, den));
    }
    static GaussScalar i() { return GaussScalar(mpq_class(0), mpq_class(1)); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return sgn(im_) == 0 && re_ == 1; }

    GaussScalar conj() const { return GaussScalar(re_, -im_); }

    GaussScalar inverse() const {
        if (is_zero()) throw Error("division by zero");
        mpq_class norm = re_ * re_ + im_ * im_;
        return GaussScalar(re_ / norm, -im_ / norm);
    }

    GaussScalar operator-() const { return GaussScalar(-re_, -im_); }

    GaussScalar& operator+=(const GaussScalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussScalar& operator-=(const GaussScalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussScalar& operator*=(const GaussScalar& o) {
        if (sgn(im_) == 0 && sgn(o.im_) == 0) {
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    GaussScalar& operator/=(const GaussScalar& o) {
        if (o.is_zero()) throw Error("division by zero");
        if (sgn(o.im_) == 0) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        return *this *= o.inverse();
    }

    friend GaussScalar operator+(GaussScalar a, const GaussScalar& b) { return a += b; }
    friend GaussScalar operator-(GaussScalar a, const GaussScalar& b) { return a -= b; }
    friend GaussScalar operator*(GaussScalar a, const GaussScalar& b) { return a *= b; }
    friend GaussScalar operator/(GaussScalar a, const GaussScalar& b) { return a /= b; }

    friend bool operator==(const GaussScalar& a, const GaussScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussScalar& a, const GaussScalar& b) { return !(a == b); }

    /// Canonical text: "a/b", "c/d*i" or "a/b+c/d*i" (integers print without "/1").
    std::string str() const {
        if (sgn(im_) == 0) return re_.get_str();
        mpq_class mag = abs(im_);
        std::string imag = mag == 1 ? "i" : mag.get_str() + "*i";
        if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
        return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + imag;
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussScalar& s) { return os << s.str(); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

} // namespace jetsym
