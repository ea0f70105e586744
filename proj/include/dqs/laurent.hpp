#ifndef DQS_LAURENT_HPP
#define DQS_LAURENT_HPP

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dqs/exact.hpp"

namespace dqs {

/// Dense-enough univariate Laurent polynomial: exponent -> coefficient.
/// No zero coefficients are stored; the zero polynomial has an empty map.
/// Exponents are bounded machine ints; overflow in this domain means a bug.
template <class T>
class LaurentPoly {
  public:
    using Coeffs = std::map<int, T>;

    LaurentPoly() = default;
    explicit LaurentPoly(const T& c, int exponent = 0) {
        if (!ScalarOps<T>::isZero(c)) coeffs_[exponent] = c;
    }
    explicit LaurentPoly(Coeffs c) : coeffs_(std::move(c)) { strip(); }

    static LaurentPoly z() { return LaurentPoly(ScalarOps<T>::one(), 1); }
    static LaurentPoly one() { return LaurentPoly(ScalarOps<T>::one(), 0); }

    const Coeffs& coeffs() const { return coeffs_; }
    bool isZero() const { return coeffs_.empty(); }
    int low() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int high() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
    bool isPolynomial() const { return coeffs_.empty() || low() >= 0; }
    bool isConstant() const { return coeffs_.empty() || (low() == 0 && high() == 0); }

    T coeff(int e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? ScalarOps<T>::zero() : it->second;
    }
    void setCoeff(int e, const T& c) {
        if (ScalarOps<T>::isZero(c))
            coeffs_.erase(e);
        else
            coeffs_[e] = c;
    }
    T leading() const {
        if (coeffs_.empty()) return ScalarOps<T>::zero();
        return coeffs_.rbegin()->second;
    }
    T trailing() const {
        if (coeffs_.empty()) return ScalarOps<T>::zero();
        return coeffs_.begin()->second;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.coeffs_) r.setCoeff(e, r.coeff(e) + c);
        return r;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.coeffs_) r.setCoeff(e, r.coeff(e) - c);
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) r.setCoeff(ea + eb, r.coeff(ea + eb) + ca * cb);
        return r;
    }
    LaurentPoly operator-() const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
        return r;
    }
    friend LaurentPoly operator*(const T& s, const LaurentPoly& a) {
        LaurentPoly r;
        if (ScalarOps<T>::isZero(s)) return r;
        for (const auto& [e, c] : a.coeffs_) r.setCoeff(e, s * c);
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return (a - b).isZero();
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Multiply by z^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
        return r;
    }

    template <class S>
    S eval(const S& x) const {
        S r{};
        bool first = true;
        S acc{};
        // Horner over the stored exponents, highest to lowest.
        int prevExp = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            if (first) {
                acc = promote(it->second, x);
                first = false;
            } else {
                acc = acc * powS(x, prevExp - it->first) + promote(it->second, x);
            }
            prevExp = it->first;
        }
        if (first) return zeroLike(x);
        if (prevExp != 0) acc = acc * powS(x, prevExp);
        return acc;
    }

    /// Substitute z -> a*z (a nonzero scalar).
    LaurentPoly scaleArg(const T& a) const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.setCoeff(e, c * pow(a, long(e)));
        return r;
    }

    /// Substitute z -> z + a; requires an ordinary polynomial (low >= 0).
    LaurentPoly shiftArg(const T& a) const {
        if (!isPolynomial()) throw std::logic_error("shiftArg on Laurent polynomial with poles");
        LaurentPoly r;
        // Horner: p(z+a) built from the top coefficient down.
        LaurentPoly zpa = LaurentPoly::z() + LaurentPoly(a);
        for (int e = high(); e >= 0; --e) {
            r = r * zpa;
            r += LaurentPoly(coeff(e));
        }
        return r;
    }

    /// Exact division by (z - a); throws if the remainder is nonzero.
    LaurentPoly divByLinear(const T& a) const {
        if (isZero()) return {};
        int lo = low(), hi = high();
        std::vector<T> dense(size_t(hi - lo + 1), ScalarOps<T>::zero());
        for (const auto& [e, c] : coeffs_) dense[size_t(e - lo)] = c;
        // synthetic division of sum dense[i] z^{lo+i} by (z - a)
        T carry = ScalarOps<T>::zero();
        std::vector<T> out(dense.size(), ScalarOps<T>::zero());
        for (size_t i = dense.size(); i-- > 0;) {
            T cur = dense[i] + carry;
            if (i == 0) {
                if (!ScalarOps<T>::isZero(cur))
                    throw std::domain_error("divByLinear: nonzero remainder");
                break;
            }
            out[i - 1] = cur;
            carry = cur * a;
        }
        LaurentPoly r;
        for (size_t i = 0; i + 1 < dense.size(); ++i) r.setCoeff(lo + int(i), out[i]);
        return r;
    }

    LaurentPoly derivative() const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_)
            if (e != 0) r.setCoeff(e - 1, ScalarOps<T>::fromLong(e) * c);
        return r;
    }

    template <class F>
    auto mapCoeffs(F&& f) const {
        using U = decltype(f(std::declval<T>()));
        LaurentPoly<U> r;
        for (const auto& [e, c] : coeffs_) r.setCoeff(e, f(c));
        return r;
    }

  private:
    void strip() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = ScalarOps<T>::isZero(it->second) ? coeffs_.erase(it) : std::next(it);
    }
    template <class S>
    static S promote(const T& c, const S& like) {
        if constexpr (std::is_same_v<T, S>)
            return c;
        else
            return c.toBig(like.prec());
    }
    template <class S>
    static S zeroLike(const S& like) {
        if constexpr (std::is_same_v<S, BigComplex>)
            return BigComplex(like.prec());
        else
            return S{};
    }
    template <class S>
    static S powS(const S& x, int e) {
        return pow(x, long(e));
    }

    Coeffs coeffs_;
};

template <class T>
struct ScalarOps<LaurentPoly<T>> {
    static LaurentPoly<T> zero() { return {}; }
    static LaurentPoly<T> one() { return LaurentPoly<T>::one(); }
    static bool isZero(const LaurentPoly<T>& p) { return p.isZero(); }
    static LaurentPoly<T> fromLong(long v) { return LaurentPoly<T>(ScalarOps<T>::fromLong(v)); }
};

using ExactPoly = LaurentPoly<ExactComplex>;
using NumPoly = LaurentPoly<BigComplex>;

/// Promote an exact Laurent polynomial to numeric coefficients.
inline NumPoly promote(const ExactPoly& p, mpfr_prec_t prec) {
    return p.mapCoeffs([&](const ExactComplex& c) { return c.toBig(prec); });
}

}  // namespace dqs

#endif
