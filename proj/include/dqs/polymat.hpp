#ifndef DQS_POLYMAT_HPP
#define DQS_POLYMAT_HPP

#include "dqs/matrix.hpp"
#include "dqs/ratfunc.hpp"

namespace dqs {

template <class T>
int matLow(const Matrix<LaurentPoly<T>>& m) {
    int lo = 0;
    bool any = false;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            const auto& p = m(i, j);
            if (p.isZero()) continue;
            lo = any ? std::min(lo, p.low()) : p.low();
            any = true;
        }
    return any ? lo : 0;
}

template <class T>
int matHigh(const Matrix<LaurentPoly<T>>& m) {
    int hi = 0;
    bool any = false;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            const auto& p = m(i, j);
            if (p.isZero()) continue;
            hi = any ? std::max(hi, p.high()) : p.high();
            any = true;
        }
    return any ? hi : 0;
}

/// Coefficient matrix of z^e.
template <class T>
Matrix<T> coeffMat(const Matrix<LaurentPoly<T>>& m, int e) {
    Matrix<T> r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).coeff(e);
    return r;
}

/// Assemble sum_k coeffs[k] z^{low+k}.
template <class T>
Matrix<LaurentPoly<T>> fromCoeffMats(const std::vector<Matrix<T>>& coeffs, int low = 0) {
    if (coeffs.empty()) return {};
    Matrix<LaurentPoly<T>> r(coeffs[0].rows(), coeffs[0].cols());
    for (size_t k = 0; k < coeffs.size(); ++k)
        for (size_t i = 0; i < r.rows(); ++i)
            for (size_t j = 0; j < r.cols(); ++j)
                r(i, j).setCoeff(low + int(k), coeffs[k](i, j));
    return r;
}

/// Embed a constant matrix as a matrix of (Laurent) polynomials.
template <class T>
Matrix<LaurentPoly<T>> constMat(const Matrix<T>& m) {
    return m.map([](const T& c) { return LaurentPoly<T>(c); });
}

template <class T, class S>
Matrix<S> evalMat(const Matrix<LaurentPoly<T>>& m, const S& x) {
    return m.map([&](const LaurentPoly<T>& p) { return p.template eval<S>(x); });
}

template <class T>
Matrix<LaurentPoly<T>> scaleArgMat(const Matrix<LaurentPoly<T>>& m, const T& a) {
    return m.map([&](const LaurentPoly<T>& p) { return p.scaleArg(a); });
}

template <class T>
Matrix<LaurentPoly<T>> shiftArgMat(const Matrix<LaurentPoly<T>>& m, const T& a) {
    return m.map([&](const LaurentPoly<T>& p) { return p.shiftArg(a); });
}

template <class T>
Matrix<LaurentPoly<T>> shiftedMat(const Matrix<LaurentPoly<T>>& m, int k) {
    return m.map([&](const LaurentPoly<T>& p) { return p.shifted(k); });
}

/// Adjugate via cofactor determinants; any commutative ring.
template <class T>
Matrix<T> adjugate(const Matrix<T>& m) {
    size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("adjugate: not square");
    Matrix<T> r(n, n);
    if (n == 1) {
        r(0, 0) = ScalarOps<T>::one();
        return r;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Matrix<T> sub(n - 1, n - 1);
            size_t ii = 0;
            for (size_t a = 0; a < n; ++a) {
                if (a == i) continue;
                size_t jj = 0;
                for (size_t b = 0; b < n; ++b) {
                    if (b == j) continue;
                    sub(ii, jj++) = m(a, b);
                }
                ++ii;
            }
            T c = sub.det();
            r(j, i) = ((i + j) % 2 == 0) ? c : -c;
        }
    return r;
}

/// Inverse of a Laurent-polynomial matrix whose determinant is a monomial
/// c·z^k (the only case where the inverse stays Laurent-polynomial).
inline ExactPolyMatrix inverseMonomialDet(const ExactPolyMatrix& m) {
    ExactPoly d = m.det();
    if (d.isZero()) throw std::domain_error("inverseMonomialDet: singular");
    if (d.low() != d.high())
        throw std::domain_error("inverseMonomialDet: determinant is not a monomial");
    ExactPolyMatrix adj = adjugate(m);
    ExactComplex c = ExactComplex(1) / d.leading();
    int k = -d.high();
    return adj.map([&](const ExactPoly& p) { return (c * p).shifted(k); });
}

/// Inverse of a polynomial matrix as a matrix of rational functions.
inline Matrix<RatFunc> inverseRational(const ExactPolyMatrix& m) {
    ExactPoly d = m.det();
    if (d.isZero()) throw std::domain_error("inverseRational: singular");
    int shift = std::min(d.low(), 0);
    ExactPolyMatrix adj = adjugate(m);
    Matrix<RatFunc> r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            r(i, j) = RatFunc(adj(i, j).shifted(-shift), d.shifted(-shift));
    return r;
}

}  // namespace dqs

#endif
