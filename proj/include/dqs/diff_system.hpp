#ifndef DQS_DIFF_SYSTEM_HPP
#define DQS_DIFF_SYSTEM_HPP

#include <memory>

#include "dqs/polymat.hpp"
#include "dqs/roots.hpp"

namespace dqs {

/// Y(z+1) = A(z) Y(z), A polynomial of degree r with A_r = diag(rho),
/// every ratio rho_i/rho_j (i != j) having nonzero imaginary part.
struct DifferenceSystem {
    size_t n = 0;
    int r = 0;
    ExactPolyMatrix A;
    std::vector<ExactComplex> rho;
};

/// Validates the Theorem hypotheses and caches rho.
DifferenceSystem makeDifferenceSystem(const ExactPolyMatrix& A);

struct RationalizedDifference {
    ExactPolyMatrix A;                    // polynomial, ready for makeDifferenceSystem
    std::vector<ExactComplex> denRoots;   // x_i with denominator (z-x_1)...(z-x_s)
};

/// Clears denominators: multiplies by the common denominator, recording its
/// roots (the scalar gauge is the corresponding product of Gamma factors).
RationalizedDifference rationalizeDifference(const Matrix<RatFunc>& araw);

struct DiffFormalSolution {
    int order = 0;                    // N
    std::vector<ExactMatrix> yhat;    // Yhat_0 .. Yhat_N
    std::vector<ExactComplex> d;      // d_k = (A_{r-1})_kk / rho_k
};

/// Characteristic exponents d_k.
std::vector<ExactComplex> diffExponents(const DifferenceSystem& s);

/// Truncated formal solution. The series actually attached to the prefactor
/// z^{rz} e^{-rz} carries z^{d_k - r/2} in place of z^{d_k}: expanding
/// (z+1)^{r(z+1)} e^{-r(z+1)} / (z^{rz} e^{-rz}) = z^r exp((rz+r)ln(1+1/z) - r)
/// contributes r/2 at order 1/z, which must be absorbed by the exponent for
/// the recurrence to close. d_k itself is reported unshifted.
DiffFormalSolution formalSolutionDifference(const DifferenceSystem& s, int order);

/// Sum of the d_k plus the root sum of det A (Vieta); zero for valid systems.
ExactComplex verifyFuchs(const DifferenceSystem& s);

struct GenuineSolutionSample {
    char side = 'l';  // 'l' or 'r'
    std::vector<std::pair<BigComplex, NumMatrix>> grid;
    int truncationOrder = 0;
    BigFloat errorEstimate;
};

/// Canonical solutions of Theorem I evaluated numerically: optimal truncation
/// of the formal series at a far anchor, then exact propagation by the system.
class DiffSolver {
  public:
    DiffSolver(const DifferenceSystem& s, mpfr_prec_t prec, int maxOrder = 96);

    /// Value of Y^l or Y^r at z; anchorShift perturbs the anchor distance so
    /// that independent evaluations do not share an anchor.
    NumMatrix eval(char side, const BigComplex& z, double anchorShift = 0.0) const;

    int truncationOrder() const { return usedOrder_; }
    BigFloat errorEstimate() const { return errEst_; }
    mpfr_prec_t workPrec() const { return wp_; }
    const std::vector<BigComplex>& deltaNum() const { return delta_; }

  private:
    NumMatrix evalAnchor(const BigComplex& a) const;
    NumMatrix prefactor(const BigComplex& z) const;

    const DifferenceSystem s_;
    mpfr_prec_t prec_, wp_;
    double z0_;
    NumPolyMatrix nA_;
    std::vector<NumMatrix> coeffs_;
    std::vector<BigComplex> rhoNum_, delta_;
    mutable int usedOrder_ = 0;
    mutable BigFloat errEst_;
};

GenuineSolutionSample genuineSolution(const DifferenceSystem& s, char side,
                                      const std::vector<BigComplex>& targets,
                                      mpfr_prec_t prec);

struct DiffMonodromyReport {
    std::vector<std::pair<BigComplex, NumMatrix>> samples;  // (z, P(z))
    // fitted[k][l]: c-coefficients of entry (k,l), lowest frequency first
    std::vector<std::vector<std::vector<BigComplex>>> fitted;
    std::vector<std::vector<long>> lambda;  // off-diagonal lambda_kl (diagonal unused)
    BigFloat fitResidual;
    BigFloat periodicityResidual;
    mpfr_prec_t prec = 0;
};

/// Samples P(z) = (Y^r)^{-1} Y^l on a horizontal segment, checks periodicity
/// against an independently anchored evaluation, and fits the
/// exponential-polynomial structure entrywise. Diagonal entries use the
/// frequencies 0..r; off-diagonal (k,l) use lambda_kl..lambda_kl+r-1 with the
/// imaginary unit in the exponent.
DiffMonodromyReport monodromyDifference(const DifferenceSystem& s, int sampleCount,
                                        mpfr_prec_t prec);

// ---- generic series recurrence (exact or numeric coefficients) ----

namespace diffdetail {

template <class T>
T binomGeneric(const T& x, int m, mpfr_prec_t prec) {
    T v = ScalarOps<T>::one();
    for (int i = 0; i < m; ++i)
        v = v * (x - ScalarOps<T>::fromLong(i)) / ScalarOps<T>::fromLong(i + 1);
    (void)prec;
    return v;
}

}  // namespace diffdetail

/// Solves the substitution identity order by order. topCoeffs[m] = A_{r-m}
/// for m = 0..size-1 (topCoeffs[0] diagonal = rho); coefficients beyond the
/// list are taken as zero, so rational systems pass their expansion at
/// infinity to whatever depth the order needs. Returns Yhat_0..Yhat_N.
/// The order-m equation only determines the off-diagonal of Yhat_m; its
/// diagonal closes at order m+1, so internally the loop runs to N+1.
template <class T>
std::vector<Matrix<T>> diffSeriesCoeffs(const std::vector<Matrix<T>>& topCoeffs,
                                        const std::vector<T>& rho, const std::vector<T>& delta,
                                        int r, int N, mpfr_prec_t prec) {
    size_t n = rho.size();
    int M = N + 1;
    auto fromQ = [&](const mpq_class& q) { return ScalarOps<T>::fromQ(q, prec); };

    // E(w) = r((1/w+1)ln(1+w) - 1); G = exp(E); all coefficients rational
    std::vector<mpq_class> L(size_t(M) + 2, 0);
    for (int m = 1; m <= M + 1; ++m) L[size_t(m)] = mpq_class((m % 2) ? 1 : -1, m);
    std::vector<mpq_class> E(size_t(M) + 1, 0);
    for (int m = 1; m <= M; ++m) E[size_t(m)] = mpq_class(r) * (L[size_t(m) + 1] + L[size_t(m)]);
    std::vector<mpq_class> Gq(size_t(M) + 1, 0);
    Gq[0] = 1;
    for (int m = 1; m <= M; ++m) {
        mpq_class s = 0;
        for (int k = 1; k <= m; ++k) s += mpq_class(k) * E[size_t(k)] * Gq[size_t(m - k)];
        Gq[size_t(m)] = s / m;
    }
    std::vector<T> G;
    for (int m = 0; m <= M; ++m) G.push_back(fromQ(Gq[size_t(m)]));

    // column scalings R^{(k)}[e] = rho_k * binom(delta_k, e)
    std::vector<std::vector<T>> R(n);
    for (size_t k = 0; k < n; ++k)
        for (int e = 0; e <= M; ++e)
            R[k].push_back(rho[k] * diffdetail::binomGeneric(delta[k], e, prec));

    // binom(-j, t) for Ftilde
    std::vector<std::vector<mpq_class>> bneg(size_t(M) + 1);
    for (int j = 0; j <= M; ++j) {
        bneg[size_t(j)].assign(size_t(M) + 1, 0);
        for (int t = 0; t <= M; ++t) {
            mpq_class v = 1;
            for (int i = 0; i < t; ++i) v = v * mpq_class(-j - i) / mpq_class(i + 1);
            bneg[size_t(j)][size_t(t)] = v;
        }
    }

    auto topC = [&](int s) -> const Matrix<T>* {
        if (s < 0 || s >= int(topCoeffs.size())) return nullptr;
        return &topCoeffs[size_t(s)];
    };

    std::vector<Matrix<T>> Y;
    Matrix<T> id = Matrix<T>::identity(n);
    Y.push_back(id);

    // RHS - LHS at order m with the current Y values
    auto residual = [&](int m) {
        Matrix<T> res(n, n);
        for (int j = 0; j <= m && j < int(Y.size()); ++j)
            if (const Matrix<T>* t = topC(m - j)) res += (*t) * Y[size_t(j)];
        std::vector<Matrix<T>> ft;
        for (int b = 0; b <= m; ++b) {
            Matrix<T> f(n, n);
            for (int j = 0; j <= b && j < int(Y.size()); ++j) {
                mpq_class c = bneg[size_t(j)][size_t(b - j)];
                if (sgn(c) != 0) f += fromQ(c) * Y[size_t(j)];
            }
            ft.push_back(std::move(f));
        }
        for (int a = 0; a <= m; ++a) {
            if (ScalarOps<T>::isZero(G[size_t(a)])) continue;
            for (int b = 0; b + a <= m; ++b) {
                int e = m - a - b;
                const Matrix<T>& f = ft[size_t(b)];
                if (f.isZero()) continue;
                // column k scaled by G[a]*R[k][e]
                for (size_t i = 0; i < n; ++i)
                    for (size_t k = 0; k < n; ++k)
                        res(i, k) = res(i, k) - G[size_t(a)] * f(i, k) * R[k][size_t(e)];
            }
        }
        return res;
    };

    for (int m = 1; m <= M; ++m) {
        if (m >= 2) {
            // diagonal of order-m equation fixes diag(Y_{m-1});
            // unknown enters RHS-LHS as +(m-1) rho_k x_k
            Matrix<T> res = residual(m);
            for (size_t k = 0; k < n; ++k)
                Y[size_t(m - 1)](k, k) =
                    -(res(k, k) / (ScalarOps<T>::fromLong(m - 1) * rho[k]));
        }
        if (m <= N) {
            Y.push_back(Matrix<T>(n, n));
            Matrix<T> res = residual(m);
            // commutator: (RHS-LHS) gains (rho_k - rho_l) Y_m,kl
            for (size_t k = 0; k < n; ++k)
                for (size_t l = 0; l < n; ++l) {
                    if (k == l) continue;
                    Y[size_t(m)](k, l) = -(res(k, l) / (rho[k] - rho[l]));
                }
        }
    }
    return Y;
}

}  // namespace dqs

#endif
