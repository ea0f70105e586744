#ifndef DQS_GAUGE_HPP
#define DQS_GAUGE_HPP

#include <string>

#include "dqs/diff_system.hpp"
#include "dqs/q_system.hpp"

namespace dqs {

struct SingularGauge : std::domain_error {
    using std::domain_error::domain_error;
};
struct NonDiagonalizable : std::domain_error {
    using std::domain_error::domain_error;
};
struct NormalizationLost : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotUnitOffOrigin : std::domain_error {
    using std::domain_error::domain_error;
};
struct ProgressImpossible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PipelineDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SystemKind { difference, qdifference };

/// One elementary gauge factor; the new unknown is M Y. Entries are exact
/// rational functions so every pipeline step (constants, z-powers, the
/// (z-a)-divisions of the reduction) fits the same record.
struct GaugeStep {
    std::string tag;
    Matrix<RatFunc> M;
};

struct GaugeLog {
    std::vector<GaugeStep> steps;  // chronological

    /// steps[last] * ... * steps[0].
    Matrix<RatFunc> total(size_t n) const;
    void push(std::string tag, Matrix<RatFunc> m);
};

// ---- conversions ----

Matrix<RatFunc> ratMat(const ExactPolyMatrix& m);
/// Requires every denominator trivial; entries may stay Laurent.
ExactPolyMatrix polyMat(const Matrix<RatFunc>& m);

/// Laurent expansion at infinity: coefficients of z^top, z^{top-1}, ...,
/// z^{top-count+1}. Throws if f grows faster than z^top.
std::vector<ExactComplex> expandAtInf(const RatFunc& f, int top, int count);

/// p(qz) resp. p(z+1) entrywise.
Matrix<RatFunc> shiftArgRat(SystemKind kind, const ExactComplex& q, const Matrix<RatFunc>& m);

// ---- gauge application ----

/// M(z+1) A(z) M(z)^{-1} resp. M(qz) Q(z) M(z)^{-1}; asserts the determinant
/// transforms by the shifted quotient of det M.
Matrix<RatFunc> applyGauge(SystemKind kind, const ExactComplex& q, const Matrix<RatFunc>& M,
                           const Matrix<RatFunc>& A);

/// Folds applyGauge over the log, oldest step first.
Matrix<RatFunc> replayGauge(SystemKind kind, const ExactComplex& q, const GaugeLog& log,
                            const Matrix<RatFunc>& system);

// ---- difference systems under integer shifts ----

/// Difference system with rational entries, the shape integer shifts of the
/// d_k produce. The top of the expansion at infinity stays diag(rho).
struct RationalDiffSystem {
    size_t n = 0;
    int r = 0;
    Matrix<RatFunc> A;
    std::vector<ExactComplex> rho;
};

RationalDiffSystem toRational(const DifferenceSystem& s);
/// A_{r-m} of the expansion at infinity, m = 0..count-1.
std::vector<ExactMatrix> infCoeffs(const RationalDiffSystem& s, int count);
std::vector<ExactComplex> diffExponents(const RationalDiffSystem& s);
/// Yhat_0..Yhat_order of the formal solution.
std::vector<ExactMatrix> formalSeriesRational(const RationalDiffSystem& s, int order);

// ---- the constructive steps ----

/// Constant conjugation by the eigenbasis of the leading coefficient, making
/// the leading series coefficient of the infinity-side solution the identity
/// (q-case: Q_mu becomes q^{-diag sigma}; difference case: A_r = diag rho).
QDifferenceSystem normalizeLeading(const QDifferenceSystem& s, GaugeLog* log = nullptr);
RationalDiffSystem normalizeLeading(const RationalDiffSystem& s, GaugeLog* log = nullptr);

/// One integer shift of a characteristic constant: sigma_k += delta resp.
/// d_k += delta, delta = +-1. Composes z^{D_k^{+-}} with the constant
/// renormalization carried out of the local series. Requires a normalized
/// system (diagonal leading coefficient).
QDifferenceSystem shiftConstant(const QDifferenceSystem& s, size_t k, int delta,
                                GaugeLog* log = nullptr);
RationalDiffSystem shiftConstant(const RationalDiffSystem& s, size_t k, int delta,
                                 GaugeLog* log = nullptr);

struct SauvageFactorization {
    ExactPolyMatrix U;   // holomorphically invertible on the plane
    ExactPolyMatrix W;   // holomorphically invertible off the origin
    std::vector<int> K;  // descending
};

/// U(z) M(z) = z^K W(z) for M with monomial determinant c z^m; then
/// det U and det W are nonzero constants and sum K = m.
SauvageFactorization sauvageFactorize(const ExactPolyMatrix& M);

/// Zero-side system of a paired reduction, connected to the (implicit)
/// infinity side by Y'(z) = z^D Y(z).
struct ReductionState {
    SystemKind kind = SystemKind::qdifference;
    ExactComplex q;
    int topDeg = 0;
    ExactPolyMatrix Q;                // polynomial; deg Q_ij <= topDeg + D_j - D_i
    std::vector<int> D;               // descending
    std::vector<ExactComplex> roots;  // of det Q, pairwise non-congruent
    int normD() const;
};

/// Throws if two catalog roots are congruent (differ by an integer resp. by
/// an integer power of q).
void checkNonCongruent(SystemKind kind, const ExactComplex& q,
                       const std::vector<ExactComplex>& roots);

/// One step of the norm reduction: picks a root and a kernel combination
/// whose extreme index hits a negative (row case) or positive (column case)
/// entry of D, applies the (z-a)-gauge with the H-matrix, restores the
/// descending order. ||D||_1 drops by exactly one.
ReductionState reduceNormStep(const ReductionState& st, GaugeLog* log = nullptr);

struct NormalizeResult {
    ExactPolyMatrix Q;        // polynomial output, top degree preserved
    GaugeLog log;             // zero-side chain: replay over the input gives Q
    std::vector<int> normTrajectory;  // ||D||_1 through the reduction
};

/// The full pipeline: normalize the leading coefficient, remove target_shifts
/// from the exponents by elementary shifts, split the accumulated gauge by
/// Sauvage, reduce ||D||_1 to zero, renormalize. Output exponents equal the
/// input exponents minus targets (indexed in the normalized eigen order).
NormalizeResult normalizeSystem(const QDifferenceSystem& s, const std::vector<int>& targets);
NormalizeResult normalizeSystem(const DifferenceSystem& s, const std::vector<int>& targets);

}  // namespace dqs

#endif
