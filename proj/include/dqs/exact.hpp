#ifndef DQS_EXACT_HPP
#define DQS_EXACT_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "dqs/bigfloat.hpp"

namespace dqs {

/// Square root of a rational, exact or nothing.
inline std::optional<mpq_class> exactSqrt(const mpq_class& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(rn, rd);
}

/// Gaussian rational: exact complex number with rational real and imaginary
/// parts. The coefficient field for all symbolic work.
struct ExactComplex {
    mpq_class re, im;

    ExactComplex() : re(0), im(0) {}
    ExactComplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }
    ExactComplex(long r, long i = 0) : re(r), im(i) {}
    explicit ExactComplex(const mpq_class& r) : re(r), im(0) {}

    bool isZero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool isReal() const { return sgn(im) == 0; }
    bool isOne() const { return re == 1 && sgn(im) == 0; }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
        mpq_class n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    ExactComplex operator-() const { return {-re, -im}; }
    ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
    ExactComplex& operator-=(const ExactComplex& o) { return *this = *this - o; }
    ExactComplex& operator*=(const ExactComplex& o) { return *this = *this * o; }
    ExactComplex& operator/=(const ExactComplex& o) { return *this = *this / o; }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }

    friend ExactComplex conj(const ExactComplex& a) { return {a.re, -a.im}; }
    /// |a|^2, exact.
    friend mpq_class normSq(const ExactComplex& a) { return a.re * a.re + a.im * a.im; }

    friend ExactComplex pow(const ExactComplex& a, long e) {
        ExactComplex r(1), base = e < 0 ? ExactComplex(1) / a : a;
        unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
        while (k) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    /// Exact square root when one exists in Q(i).
    friend std::optional<ExactComplex> exactSqrt(const ExactComplex& a) {
        if (sgn(a.im) == 0) {
            if (auto s = exactSqrt(a.re)) return ExactComplex(*s, 0);
            if (auto s = exactSqrt(mpq_class(-a.re))) return ExactComplex(0, *s);
            return std::nullopt;
        }
        auto n = exactSqrt(normSq(a));
        if (!n) return std::nullopt;
        auto x2 = exactSqrt(mpq_class((a.re + *n) / 2));
        if (!x2 || sgn(*x2) == 0) return std::nullopt;
        mpq_class y = a.im / (2 * *x2);
        return ExactComplex(*x2, y);
    }

    BigComplex toBig(mpfr_prec_t prec) const {
        return {BigFloat(re, prec), BigFloat(im, prec)};
    }

    std::string str() const { return re.get_str() + (sgn(im) >= 0 ? "+" : "") + im.get_str() + "i"; }
};

// ---- scalar traits used by the generic polynomial/matrix layer ----

template <class T>
struct ScalarOps;

template <>
struct ScalarOps<ExactComplex> {
    static ExactComplex zero() { return {}; }
    static ExactComplex one() { return ExactComplex(1); }
    static bool isZero(const ExactComplex& x) { return x.isZero(); }
    static ExactComplex fromLong(long v) { return ExactComplex(v); }
    static ExactComplex fromQ(const mpq_class& q, mpfr_prec_t) { return ExactComplex(q); }
};

template <>
struct ScalarOps<BigComplex> {
    static BigComplex zero() { return {}; }
    static BigComplex one() { return BigComplex::one(BigFloat::kMinPrec); }
    static bool isZero(const BigComplex& x) { return x.isZero(); }
    static BigComplex fromLong(long v) { return {double(v), 0.0, BigFloat::kMinPrec}; }
    static BigComplex fromQ(const mpq_class& q, mpfr_prec_t p) {
        return {BigFloat(q, p), BigFloat(p)};
    }
};

}  // namespace dqs

#endif
