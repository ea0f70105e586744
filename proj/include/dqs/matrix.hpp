#ifndef DQS_MATRIX_HPP
#define DQS_MATRIX_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dqs/laurent.hpp"

namespace dqs {

/// Row-major dense matrix over an arbitrary commutative ring T.
/// Division-using routines (inverse, kernel, solve) require T to be a field.
template <class T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t r, size_t c) : rows_(r), cols_(c), d_(r * c, ScalarOps<T>::zero()) {}
    Matrix(size_t r, size_t c, std::vector<T> d) : rows_(r), cols_(c), d_(std::move(d)) {
        if (d_.size() != r * c) throw std::invalid_argument("Matrix: size mismatch");
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = ScalarOps<T>::one();
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    T& operator()(size_t i, size_t j) { return d_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return d_[i * cols_ + j]; }
    const std::vector<T>& data() const { return d_; }

    bool isZero() const {
        for (const auto& x : d_)
            if (!ScalarOps<T>::isZero(x)) return false;
        return true;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        checkShape(a, b);
        Matrix r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = a.d_[i] + b.d_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        checkShape(a, b);
        Matrix r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = a.d_[i] - b.d_[i];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: product shape");
        Matrix r(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (ScalarOps<T>::isZero(aik)) continue;
                for (size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = s * a.d_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < d_.size(); ++i) r.d_[i] = -d_[i];
        return r;
    }
    Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
    Matrix& operator-=(const Matrix& o) { return *this = *this - o; }
    Matrix& operator*=(const Matrix& o) { return *this = *this * o; }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        return (a - b).isZero();
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(std::declval<T>()));
        Matrix<U> r(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

    /// Cofactor-expansion determinant; works over any commutative ring.
    T det() const {
        if (rows_ != cols_) throw std::invalid_argument("det: not square");
        return detRec(*this);
    }

    Matrix permuteRows(const std::vector<size_t>& p) const {
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(p[i], j);
        return r;
    }
    Matrix permuteCols(const std::vector<size_t>& p) const {
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, p[j]);
        return r;
    }

  private:
    static void checkShape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }
    static T detRec(const Matrix& m) {
        size_t n = m.rows_;
        if (n == 0) return ScalarOps<T>::one();
        if (n == 1) return m(0, 0);
        if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        T acc = ScalarOps<T>::zero();
        for (size_t k = 0; k < n; ++k) {
            if (ScalarOps<T>::isZero(m(0, k))) continue;
            Matrix sub(n - 1, n - 1);
            for (size_t i = 1; i < n; ++i) {
                size_t jj = 0;
                for (size_t j = 0; j < n; ++j) {
                    if (j == k) continue;
                    sub(i - 1, jj++) = m(i, j);
                }
            }
            T term = m(0, k) * detRec(sub);
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }

    size_t rows_, cols_;
    std::vector<T> d_;
};

using ExactMatrix = Matrix<ExactComplex>;
using NumMatrix = Matrix<BigComplex>;
using ExactPolyMatrix = Matrix<ExactPoly>;
using NumPolyMatrix = Matrix<NumPoly>;

// ---- field-only linear algebra ----

namespace detail {
template <class T>
double pivotSize(const T& x) {
    if constexpr (std::is_same_v<T, BigComplex>) {
        return abs(x).toDouble();
    } else {
        // exact fields only need a nonzero pivot
        return ScalarOps<T>::isZero(x) ? 0.0 : 1.0;
    }
}
}  // namespace detail

/// Gauss-Jordan inverse over a field; throws on a singular matrix.
template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
    size_t n = a.rows();
    Matrix<T> m = a, inv = Matrix<T>::identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        double best = detail::pivotSize(m(col, col));
        for (size_t i = col + 1; i < n; ++i) {
            double s = detail::pivotSize(m(i, col));
            if (s > best) {
                best = s;
                piv = i;
            }
        }
        if (best == 0.0) throw std::domain_error("inverse: singular matrix");
        if (piv != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        T p = m(col, col);
        for (size_t j = 0; j < n; ++j) {
            m(col, j) = m(col, j) / p;
            inv(col, j) = inv(col, j) / p;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col || ScalarOps<T>::isZero(m(i, col))) continue;
            T f = m(i, col);
            for (size_t j = 0; j < n; ++j) {
                m(i, j) = m(i, j) - f * m(col, j);
                inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Solve A x = b over a field (A square, nonsingular).
template <class T>
std::vector<T> solve(const Matrix<T>& a, const std::vector<T>& b) {
    if (a.rows() != a.cols() || b.size() != a.rows())
        throw std::invalid_argument("solve: shape");
    size_t n = a.rows();
    Matrix<T> m = a;
    std::vector<T> rhs = b;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        double best = detail::pivotSize(m(col, col));
        for (size_t i = col + 1; i < n; ++i) {
            double s = detail::pivotSize(m(i, col));
            if (s > best) {
                best = s;
                piv = i;
            }
        }
        if (best == 0.0) throw std::domain_error("solve: singular matrix");
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            std::swap(rhs[piv], rhs[col]);
        }
        for (size_t i = col + 1; i < n; ++i) {
            if (ScalarOps<T>::isZero(m(i, col))) continue;
            T f = m(i, col) / m(col, col);
            for (size_t j = col; j < n; ++j) m(i, j) = m(i, j) - f * m(col, j);
            rhs[i] = rhs[i] - f * rhs[col];
        }
    }
    std::vector<T> x(n, ScalarOps<T>::zero());
    for (size_t i = n; i-- > 0;) {
        T s = rhs[i];
        for (size_t j = i + 1; j < n; ++j) s = s - m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

/// One nonzero vector from the right kernel of a (exact field); empty if the
/// kernel is trivial. The returned vector has its last pivot-free entry set
/// to one.
template <class T>
std::vector<T> kernelVector(const Matrix<T>& a) {
    size_t rows = a.rows(), cols = a.cols();
    Matrix<T> m = a;
    std::vector<long> pivotOfCol(cols, -1);
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        double best = 0.0;
        for (size_t i = rank; i < rows; ++i) {
            double s = detail::pivotSize(m(i, col));
            if (s > best) {
                best = s;
                piv = i;
            }
        }
        if (best == 0.0) continue;
        if (piv != rank)
            for (size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(rank, j));
        T p = m(rank, col);
        for (size_t j = 0; j < cols; ++j) m(rank, j) = m(rank, j) / p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || ScalarOps<T>::isZero(m(i, col))) continue;
            T f = m(i, col);
            for (size_t j = 0; j < cols; ++j) m(i, j) = m(i, j) - f * m(rank, j);
        }
        pivotOfCol[col] = long(rank);
        ++rank;
    }
    long freeCol = -1;
    for (size_t col = 0; col < cols; ++col)
        if (pivotOfCol[col] < 0) freeCol = long(col);
    if (freeCol < 0) return {};
    std::vector<T> v(cols, ScalarOps<T>::zero());
    v[size_t(freeCol)] = ScalarOps<T>::one();
    for (size_t col = 0; col < cols; ++col)
        if (pivotOfCol[col] >= 0) v[col] = -m(size_t(pivotOfCol[col]), size_t(freeCol));
    return v;
}

/// Left kernel vector: v with v^T a = 0.
template <class T>
std::vector<T> leftKernelVector(const Matrix<T>& a) {
    return kernelVector(a.transpose());
}

inline NumMatrix conjTranspose(const NumMatrix& a) {
    NumMatrix r(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(j, i) = conj(a(i, j));
    return r;
}

/// Least squares via normal equations with the conjugate transpose,
/// A^H A x = A^H b. Fine for the small well-conditioned fits used here.
inline std::vector<BigComplex> leastSquares(const NumMatrix& a, const std::vector<BigComplex>& b) {
    NumMatrix ah = conjTranspose(a);
    NumMatrix g = ah * a;
    std::vector<BigComplex> rhs(a.cols());
    for (size_t i = 0; i < a.cols(); ++i) {
        BigComplex s(a(0, 0).prec());
        for (size_t k = 0; k < a.rows(); ++k) s += ah(i, k) * b[k];
        rhs[i] = s;
    }
    return solve(g, rhs);
}

template <class T>
std::vector<T> matVec(const Matrix<T>& a, const std::vector<T>& x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matVec: shape");
    std::vector<T> r(a.rows(), ScalarOps<T>::zero());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r[i] = r[i] + a(i, j) * x[j];
    return r;
}

inline BigFloat maxAbs(const NumMatrix& a) {
    BigFloat m(BigFloat::kMinPrec);
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            BigFloat v = abs(a(i, j));
            if (v > m) m = v;
        }
    return m;
}

/// Promote entrywise to numeric.
inline NumMatrix promote(const ExactMatrix& a, mpfr_prec_t prec) {
    return a.map([&](const ExactComplex& c) { return c.toBig(prec); });
}

}  // namespace dqs

#endif
