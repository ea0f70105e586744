#ifndef DQS_Q_SYSTEM_HPP
#define DQS_Q_SYSTEM_HPP

#include <functional>

#include "dqs/elliptic.hpp"
#include "dqs/polymat.hpp"
#include "dqs/ratfunc.hpp"
#include "dqs/roots.hpp"

namespace dqs {

/// Y(qz) = Q(z) Y(z) with |q| > 1, Q a matrix of Laurent polynomials.
struct QDifferenceSystem {
    size_t n = 0;
    ExactComplex q;
    int mu = 0;   // top exponent
    int low = 0;  // bottom exponent (negative for genuinely Laurent Q)
    ExactPolyMatrix Q;
};

QDifferenceSystem makeQSystem(const ExactPolyMatrix& q, const ExactComplex& base);

struct RationalizedQ {
    ExactPolyMatrix Q;
    std::vector<ExactComplex> denRoots;  // the a_i of the scalar gauges g_i
};

/// Clears denominators; the scalar gauge is the product of the g_i solving
/// g(qz) = (z - a_i) g(z).
RationalizedQ rationalizeQ(const Matrix<RatFunc>& qraw, const ExactComplex& base);

/// Eigen decomposition over Q(i) with distinct eigenvalues.
struct ExactEigen {
    std::vector<ExactComplex> values;
    ExactMatrix vectors;  // columns
};
ExactEigen exactEigenDistinct(const ExactMatrix& m);

/// Local series solution at 0 or infinity.
///  site '0':  Y_0(z)   = A(z) z^{diag rho},  A(z) = sum A_k z^k,
///             lam_i = q^{rho_i} the eigenvalues of Q(0), A_0 its eigenbasis.
///  site 'i':  Y_inf(z) = q^{(mu/2)(t^2-t)} B(z) z^{-diag sigma},
///             B(z) = sum B_k z^{-k}, lam_i = q^{-sigma_i} the eigenvalues of
///             Q_mu, B_0 its eigenbasis (the identity when Q_mu is diagonal).
struct QLocalSolution {
    char site = '0';
    size_t n = 0;
    ExactComplex q;
    int mu = 0;
    std::vector<ExactMatrix> coeffs;
    std::vector<ExactComplex> lam;
    ExactPolyMatrix Q;  // kept for extension by the functional equation
};

QLocalSolution localSeriesQ(const QDifferenceSystem& s, char site, int order);

/// z = q^t.
BigComplex zFromT(const BigComplex& t, const BigComplex& lnq);

/// Evaluates the local solution at the point z = q^t; the t parameter fixes
/// every branch (z^rho := e^{rho t ln q}). Extends by the functional equation
/// toward the series' own singular site.
NumMatrix evaluateLocal(const QLocalSolution& sol, const BigComplex& t, mpfr_prec_t prec);

/// Same, but with extraSteps additional extension steps, so two evaluations
/// of the same point do not share an anchor (used by consistency checks).
NumMatrix evaluateLocalBiased(const QLocalSolution& sol, const BigComplex& t, mpfr_prec_t prec,
                              int extraSteps);

struct QMonodromyReport {
    std::vector<std::pair<BigComplex, NumMatrix>> samples;  // (t, P(t)) on the parallelogram
    std::vector<BigComplex> rho, sigma;  // numeric exponents actually used
    BigFloat periodicityResidual;        // P(t+1) vs P(t)
    BigFloat circuitResidual;            // the (rel_p) multiplier relation
    mpfr_prec_t prec = 0;
    PeriodLattice lattice;
};

/// P with Y_0(z) = Y_inf(z) P(z), sampled in the t plane over the fundamental
/// parallelogram spanned by 1 and omega' = 2 pi i / ln q.
QMonodromyReport monodromyQ(const QDifferenceSystem& s, int gridCount, mpfr_prec_t prec);

/// A single monodromy entry as a function of t (for fitting).
std::function<BigComplex(const BigComplex&)> monodromyEntry(const QDifferenceSystem& s,
                                                            size_t i, size_t j, int order,
                                                            mpfr_prec_t prec);

struct SigmaFormFit {
    std::vector<BigComplex> zeros;  // the a_k inside the parallelogram
    BigComplex c;
    BigComplex b;  // exponent slope; b = eta(sigma_i+rho_j+v) - eta'(mu/2+u)
    long v = 0, u = 0;
    BigFloat integerResidual;  // distance of (v,u) solve from integers
    BigFloat latticeResidual;  // condition on sum a_k mod lattice
    BigFloat fitResidual;      // max relative deviation of the model
    int windingCount = 0;      // argument-principle count over the boundary
};

/// Fits c e^{-(eta mu/2) t^2 + b t} prod_k sigma(t - a_k) to one entry.
/// sigmaPlusRho is the construction value sigma_i + rho_j for that entry.
SigmaFormFit fitSigmaForm(const std::function<BigComplex(const BigComplex&)>& entry, int mu,
                          const PeriodLattice& lat, const BigComplex& sigmaPlusRho,
                          const BigComplex& t0, mpfr_prec_t prec);

// ---- scalar building blocks ----

/// f(t) = q^{(t^2-t)/2}, the solution of g(qz) = z g(z).
BigComplex qScalarF(const BigComplex& t, const BigComplex& q, mpfr_prec_t prec);

/// y_0(z) = prod_{k>=1} (1 - z q^{-k}), solution of y(qz) = (1-z) y(z) at 0.
BigComplex qScalarY0(const BigComplex& z, const BigComplex& q, mpfr_prec_t prec);

/// y_inf(z) = q^{(t^2-t)/2} e^{-pi i t} prod_{k>=0} (1 - z^{-1} q^{-k})^{-1},
/// t = ln z / ln q; the infinity-side solution of the same scalar equation.
BigComplex qScalarYinf(const BigComplex& t, const BigComplex& q, mpfr_prec_t prec);

/// Solutions of g(qz) = (z - m) g(z), m != 0, via the substitution z = m zbar
/// and the prefactor e^{pi i log_q zbar} m^{log_q zbar}. side '0' or 'i'.
BigComplex qScalarShifted(char side, const BigComplex& t, const BigComplex& m,
                          const BigComplex& q, mpfr_prec_t prec);

}  // namespace dqs

#endif
