#ifndef DQS_BIGFLOAT_HPP
#define DQS_BIGFLOAT_HPP

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace dqs {

/// Arbitrary-precision real number backed by MPFR.
///
/// Every value carries its own precision; binary operations compute at the
/// larger of the two operand precisions, so precision never silently drops.
class BigFloat {
  public:
    static constexpr mpfr_prec_t kMinPrec = 64;

    BigFloat() { mpfr_init2(v_, kMinPrec); mpfr_set_zero(v_, 1); }
    explicit BigFloat(mpfr_prec_t prec) {
        mpfr_init2(v_, std::max(prec, kMinPrec));
        mpfr_set_zero(v_, 1);
    }
    BigFloat(double x, mpfr_prec_t prec) {
        mpfr_init2(v_, std::max(prec, kMinPrec));
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    BigFloat(long x, mpfr_prec_t prec) {
        mpfr_init2(v_, std::max(prec, kMinPrec));
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    BigFloat(const mpq_class& q, mpfr_prec_t prec) {
        mpfr_init2(v_, std::max(prec, kMinPrec));
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const std::string& s, mpfr_prec_t prec) {
        mpfr_init2(v_, std::max(prec, kMinPrec));
        if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("BigFloat: bad decimal string: " + s);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, kMinPrec);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(BigFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    const mpfr_t& raw() const { return v_; }

    double toDouble() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long toLong() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool isZero() const { return mpfr_zero_p(v_) != 0; }
    bool isFinite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    std::string str(size_t digits = 0) const {
        if (digits == 0) digits = size_t(double(prec()) * 0.30103) + 2;
        char fmt[32], *out = nullptr;
        snprintf(fmt, sizeof fmt, "%%.%zuRe", digits);
        if (mpfr_asprintf(&out, fmt, v_) < 0) return "nan";
        std::string s(out);
        mpfr_free_str(out);
        return s;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return bin(mpfr_add, a, b); }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return bin(mpfr_sub, a, b); }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return bin(mpfr_mul, a, b); }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) { return bin(mpfr_div, a, b); }
    BigFloat operator-() const {
        BigFloat r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
    BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
    BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
    BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

    friend BigFloat abs(const BigFloat& a) { return un(mpfr_abs, a); }
    friend BigFloat sqrt(const BigFloat& a) { return un(mpfr_sqrt, a); }
    friend BigFloat exp(const BigFloat& a) { return un(mpfr_exp, a); }
    friend BigFloat log(const BigFloat& a) { return un(mpfr_log, a); }
    friend BigFloat sin(const BigFloat& a) { return un(mpfr_sin, a); }
    friend BigFloat cos(const BigFloat& a) { return un(mpfr_cos, a); }
    friend BigFloat floor(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_floor(r.v_, a.v_);
        return r;
    }
    friend BigFloat round(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_round(r.v_, a.v_);
        return r;
    }
    friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
        BigFloat r(std::max(y.prec(), x.prec()));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat hypot(const BigFloat& x, const BigFloat& y) {
        BigFloat r(std::max(y.prec(), x.prec()));
        mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat pow(const BigFloat& a, long e) {
        BigFloat r(a.prec());
        mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }

    static BigFloat pi(mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    /// 2^e at the given precision (e may be negative); used for tolerances.
    static BigFloat pow2(long e, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    /// Exact conversion to a rational (value is always binary-rational).
    mpq_class toRational() const {
        mpq_t q;
        mpq_init(q);
        mpfr_get_q(q, v_);
        mpq_class out(q);
        mpq_clear(q);
        return out;
    }

  private:
    using MpfrBin = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    using MpfrUn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
    static BigFloat bin(MpfrBin f, const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        f(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    static BigFloat un(MpfrUn f, const BigFloat& a) {
        BigFloat r(a.prec());
        f(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

/// Arbitrary-precision complex number; precision rules inherited from BigFloat.
class BigComplex {
  public:
    BigFloat re, im;

    BigComplex() = default;
    explicit BigComplex(mpfr_prec_t prec) : re(prec), im(prec) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    BigComplex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}
    explicit BigComplex(const BigFloat& r) : re(r), im(r.prec()) {}

    mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }
    bool isZero() const { return re.isZero() && im.isZero(); }
    bool isFinite() const { return re.isFinite() && im.isFinite(); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigFloat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    BigComplex operator-() const { return {-re, -im}; }
    BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
    BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }
    BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }
    BigComplex& operator/=(const BigComplex& o) { return *this = *this / o; }
    friend bool operator==(const BigComplex& a, const BigComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const BigComplex& a, const BigComplex& b) { return !(a == b); }

    friend BigComplex conj(const BigComplex& a) { return {a.re, -a.im}; }
    friend BigFloat abs(const BigComplex& a) { return hypot(a.re, a.im); }
    friend BigFloat arg(const BigComplex& a) { return atan2(a.im, a.re); }

    friend BigComplex exp(const BigComplex& a) {
        BigFloat m = exp(a.re);
        return {m * cos(a.im), m * sin(a.im)};
    }
    /// Principal branch: Im(log z) in (-pi, pi].
    friend BigComplex log(const BigComplex& a) { return {log(abs(a)), arg(a)}; }
    friend BigComplex sqrt(const BigComplex& a) {
        if (a.isZero()) return a;
        BigFloat m = abs(a);
        BigFloat half(0.5, a.prec());
        BigFloat x = sqrt((m + a.re) * half);
        if (x.isZero()) {
            BigFloat y = sqrt((m - a.re) * half);
            return {x, a.im.sign() >= 0 ? y : -y};
        }
        return {x, a.im / (x + x)};
    }
    friend BigComplex pow(const BigComplex& a, long e) {
        BigComplex r(1.0, 0.0, a.prec());
        BigComplex base = e < 0 ? BigComplex(1.0, 0.0, a.prec()) / a : a;
        unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
        while (k) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }
    /// Principal power a^b = exp(b log a).
    friend BigComplex pow(const BigComplex& a, const BigComplex& b) { return exp(b * log(a)); }

    std::string str(size_t digits = 0) const {
        return "(" + re.str(digits) + ", " + im.str(digits) + ")";
    }

    static BigComplex i(mpfr_prec_t prec) { return {0.0, 1.0, prec}; }
    static BigComplex one(mpfr_prec_t prec) { return {1.0, 0.0, prec}; }
    static BigComplex pi2i(mpfr_prec_t prec) {
        BigFloat p = BigFloat::pi(prec);
        return {BigFloat(prec), p + p};
    }
};

}  // namespace dqs

#endif
