#ifndef DQS_RATFUNC_HPP
#define DQS_RATFUNC_HPP

#include <utility>

#include "dqs/laurent.hpp"

namespace dqs {

/// Quotient and remainder of ordinary polynomial division (exact field).
inline std::pair<ExactPoly, ExactPoly> polyDivMod(const ExactPoly& a, const ExactPoly& b) {
    if (b.isZero()) throw std::domain_error("polyDivMod: division by zero");
    if (!a.isPolynomial() || !b.isPolynomial())
        throw std::invalid_argument("polyDivMod: ordinary polynomials only");
    ExactPoly rem = a, quot;
    while (!rem.isZero() && rem.high() >= b.high()) {
        ExactComplex c = rem.leading() / b.leading();
        int e = rem.high() - b.high();
        ExactPoly term(c, e);
        quot += term;
        rem -= term * b;
    }
    return {quot, rem};
}

/// Monic gcd over Q(i)[z].
inline ExactPoly polyGCD(ExactPoly a, ExactPoly b) {
    while (!b.isZero()) {
        ExactPoly r = polyDivMod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.isZero()) return a;
    return (ExactComplex(1) / a.leading()) * a;
}

inline ExactPoly polyLCM(const ExactPoly& a, const ExactPoly& b) {
    if (a.isZero() || b.isZero()) return {};
    ExactPoly g = polyGCD(a, b);
    ExactPoly l = polyDivMod(a * b, g).first;
    return (ExactComplex(1) / l.leading()) * l;
}

/// Rational function over Q(i), stored reduced with a monic denominator.
struct RatFunc {
    ExactPoly num, den;

    RatFunc() : den(ExactPoly::one()) {}
    explicit RatFunc(ExactPoly n) : num(std::move(n)), den(ExactPoly::one()) {}
    RatFunc(ExactPoly n, ExactPoly d) : num(std::move(n)), den(std::move(d)) { reduce(); }

    bool isZero() const { return num.isZero(); }
    bool isPolynomial() const { return den == ExactPoly::one(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return {a.num * b.num, a.den * b.den};
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        return {a.num * b.den, a.den * b.num};
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num = -r.num;
        return r;
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a - b).isZero(); }

  private:
    void reduce() {
        if (den.isZero()) throw std::domain_error("RatFunc: zero denominator");
        if (num.isZero()) {
            den = ExactPoly::one();
            return;
        }
        // a Laurent denominator moves its z-power to the numerator side
        int dshift = std::min(den.low(), 0);
        if (dshift < 0) {
            den = den.shifted(-dshift);
            num = num.shifted(-dshift);
        }
        // pull z^k out of a Laurent numerator before the gcd
        int shift = std::min(num.low(), 0);
        ExactPoly n = num.shifted(-shift);
        ExactPoly g = polyGCD(n, den);
        n = polyDivMod(n, g).first;
        den = polyDivMod(den, g).first;
        ExactComplex lead = den.leading();
        den = (ExactComplex(1) / lead) * den;
        num = ((ExactComplex(1) / lead) * n).shifted(shift);
    }
};

template <>
struct ScalarOps<RatFunc> {
    static RatFunc zero() { return {}; }
    static RatFunc one() { return RatFunc(ExactPoly::one()); }
    static bool isZero(const RatFunc& x) { return x.isZero(); }
    static RatFunc fromLong(long v) { return RatFunc(ExactPoly(ExactComplex(v))); }
};

}  // namespace dqs

#endif
