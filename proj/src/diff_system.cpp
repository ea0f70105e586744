#include "dqs/diff_system.hpp"

#include <cmath>

namespace dqs {

DifferenceSystem makeDifferenceSystem(const ExactPolyMatrix& a) {
    size_t n = a.rows();
    if (n == 0 || n != a.cols()) throw std::invalid_argument("difference system: square matrix");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!a(i, j).isPolynomial())
                throw std::invalid_argument("difference system: polynomial coefficients only");
    int r = matHigh(a);
    ExactMatrix top = coeffMat(a, r);
    std::vector<ExactComplex> rho(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j)
            if (i != j && !top(i, j).isZero())
                throw std::invalid_argument("difference system: leading matrix not diagonal");
        rho[i] = top(i, i);
        if (rho[i].isZero())
            throw std::invalid_argument("difference system: vanishing leading entry");
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (sgn((rho[i] / rho[j]).im) == 0)
                throw std::invalid_argument("difference system: rho_i/rho_j must be nonreal");
        }
    return DifferenceSystem{n, r, a, std::move(rho)};
}

RationalizedDifference rationalizeDifference(const Matrix<RatFunc>& araw) {
    size_t n = araw.rows();
    ExactPoly lcd = ExactPoly::one();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!araw(i, j).isZero()) lcd = polyLCM(lcd, araw(i, j).den);
    RationalizedDifference out;
    out.A = ExactPolyMatrix(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (araw(i, j).isZero()) continue;
            out.A(i, j) = araw(i, j).num * polyDivMod(lcd, araw(i, j).den).first;
        }
    if (out.A.det().isZero()) throw std::domain_error("rationalizeDifference: zero determinant");
    if (lcd.high() > 0) out.denRoots = exactRoots(lcd);
    return out;
}

std::vector<ExactComplex> diffExponents(const DifferenceSystem& s) {
    std::vector<ExactComplex> d(s.n);
    if (s.r == 0) return d;
    ExactMatrix sub = coeffMat(s.A, s.r - 1);
    for (size_t k = 0; k < s.n; ++k) d[k] = sub(k, k) / s.rho[k];
    return d;
}

DiffFormalSolution formalSolutionDifference(const DifferenceSystem& s, int order) {
    for (size_t k = 0; k < s.n; ++k)
        for (size_t l = 0; l < s.n; ++l)
            if (k != l && s.rho[k] == s.rho[l])
                throw std::domain_error("formalSolutionDifference: resonance");
    std::vector<ExactComplex> d = diffExponents(s);
    ExactComplex halfR(mpq_class(s.r, 2));
    std::vector<ExactComplex> delta(s.n);
    for (size_t k = 0; k < s.n; ++k) delta[k] = d[k] - halfR;
    std::vector<ExactMatrix> top;
    for (int m = 0; m <= s.r; ++m) top.push_back(coeffMat(s.A, s.r - m));
    DiffFormalSolution sol;
    sol.order = order;
    sol.d = std::move(d);
    sol.yhat = diffSeriesCoeffs<ExactComplex>(top, s.rho, delta, s.r, order, 0);
    return sol;
}

ExactComplex verifyFuchs(const DifferenceSystem& s) {
    ExactPoly det = s.A.det();
    if (det.isZero()) throw std::domain_error("verifyFuchs: zero determinant");
    ExactComplex sum;
    for (const auto& dk : diffExponents(s)) sum += dk;
    return sum + rootSum(det);
}

// ---- numeric canonical solutions ----

DiffSolver::DiffSolver(const DifferenceSystem& s, mpfr_prec_t prec, int maxOrder)
    : s_(s), prec_(prec), wp_(prec + 64), errEst_(wp_) {
    nA_ = s.A.map([&](const ExactPoly& p) { return promote(p, wp_); });
    std::vector<ExactComplex> d = diffExponents(s);
    std::vector<BigComplex> rho, delta;
    for (size_t k = 0; k < s.n; ++k) {
        rho.push_back(s.rho[k].toBig(wp_));
        ExactComplex dd = d[k] - ExactComplex(mpq_class(s.r, 2));
        delta.push_back(dd.toBig(wp_));
    }
    rhoNum_ = rho;
    delta_ = delta;
    std::vector<NumMatrix> top;
    for (int m = 0; m <= s.r; ++m) top.push_back(promote(coeffMat(s.A, s.r - m), wp_));
    coeffs_ = diffSeriesCoeffs<BigComplex>(top, rho, delta, s.r, maxOrder, wp_);
    // base anchor distance; eval() enlarges it until the smallest series term
    // meets the precision target
    z0_ = 16.0;
}

NumMatrix DiffSolver::prefactor(const BigComplex& z) const {
    BigComplex lz = log(z);
    BigComplex rr(double(s_.r), 0.0, wp_);
    BigComplex scalar = exp(rr * z * lz - rr * z);
    NumMatrix m(s_.n, s_.n);
    for (size_t k = 0; k < s_.n; ++k)
        m(k, k) = scalar * exp(z * log(rhoNum_[k]) + delta_[k] * lz);
    return m;
}

NumMatrix DiffSolver::evalAnchor(const BigComplex& a) const {
    size_t n = s_.n;
    NumMatrix f(n, n);
    BigComplex ainv = BigComplex::one(wp_) / a;
    BigComplex p = BigComplex::one(wp_);
    size_t best = 1;
    BigFloat bestMag(wp_);
    std::vector<NumMatrix> terms;
    for (size_t j = 0; j < coeffs_.size(); ++j) {
        terms.push_back(p * coeffs_[j]);
        p *= ainv;
        if (j >= 1) {
            BigFloat mag = maxAbs(terms.back());
            if (j == 1 || mag < bestMag) {
                bestMag = mag;
                best = j;
            }
        }
    }
    for (size_t j = 0; j < best; ++j) f += terms[j];
    usedOrder_ = int(best);
    errEst_ = bestMag;
    // the column scalings multiply from the right: Y = z^{rz}e^{-rz} F(z) diag(...)
    return f * prefactor(a);
}

NumMatrix DiffSolver::eval(char side, const BigComplex& z, double anchorShift) const {
    // the reachable accuracy is limited by the stored series order (min term
    // at the optimal anchor is roughly e^{-order}); don't chase beyond it
    long cap = long(double(coeffs_.size()) * 1.3);
    BigFloat tol = BigFloat::pow2(-std::min(long(prec_), cap), wp_);
    double dist = z0_ + anchorShift;
    NumMatrix best;
    for (int attempt = 0; attempt < 12; ++attempt) {
        long k;
        BigComplex a(wp_);
        if (side == 'r') {
            k = long(std::ceil(dist - z.re.toDouble()));
            if (k < 0) k = 0;
            a = z + BigComplex(double(k), 0.0, wp_);
        } else {
            k = long(std::ceil(dist + z.re.toDouble()));
            if (k < 0) k = 0;
            a = z - BigComplex(double(k), 0.0, wp_);
        }
        NumMatrix v = evalAnchor(a);
        if (errEst_ < tol || attempt == 11) {
            BigFloat tiny = BigFloat::pow2(-4 * long(wp_), wp_);
            if (side == 'r') {
                for (long j = 0; j < k; ++j) {
                    BigComplex t = a - BigComplex(double(j + 1), 0.0, wp_);
                    NumMatrix av = evalMat(nA_, t);
                    if (abs(av.det()) < tiny)
                        throw std::domain_error("DiffSolver: singular point on path");
                    v = inverse(av) * v;
                }
            } else {
                for (long j = 0; j < k; ++j) {
                    BigComplex t = a + BigComplex(double(j), 0.0, wp_);
                    v = evalMat(nA_, t) * v;
                }
            }
            return v;
        }
        dist += 12.0;
    }
    throw std::domain_error("DiffSolver: precision exhausted");
}

GenuineSolutionSample genuineSolution(const DifferenceSystem& s, char side,
                                      const std::vector<BigComplex>& targets,
                                      mpfr_prec_t prec) {
    DiffSolver solver(s, prec);
    GenuineSolutionSample out;
    out.side = side;
    out.errorEstimate = BigFloat(solver.workPrec());
    for (const auto& z : targets) {
        out.grid.emplace_back(z, solver.eval(side, z));
        out.truncationOrder = solver.truncationOrder();
        if (solver.errorEstimate() > out.errorEstimate) out.errorEstimate = solver.errorEstimate();
    }
    return out;
}

DiffMonodromyReport monodromyDifference(const DifferenceSystem& s, int sampleCount,
                                        mpfr_prec_t prec) {
    int m = std::max(sampleCount, 2 * s.r + 4);
    DiffSolver solver(s, prec);
    mpfr_prec_t wp = solver.workPrec();
    DiffMonodromyReport rep;
    rep.prec = prec;
    BigComplex z0(BigFloat(mpq_class(1, 3), wp), BigFloat(mpq_class(1, 2), wp));
    auto pAt = [&](const BigComplex& z, double shift) {
        NumMatrix yr = solver.eval('r', z, shift);
        NumMatrix yl = solver.eval('l', z, shift);
        return inverse(yr) * yl;
    };
    for (int j = 0; j < m; ++j) {
        BigComplex z = z0 + BigComplex(BigFloat(mpq_class(j, m), wp), BigFloat(wp));
        rep.samples.emplace_back(z, pAt(z, 0.0));
    }
    // periodicity against an independently anchored evaluation
    NumMatrix pShift = pAt(z0 + BigComplex::one(wp), 9.0);
    rep.periodicityResidual = maxAbs(pShift - rep.samples[0].second);

    // lambda_kl from principal logarithms
    size_t n = s.n;
    rep.lambda.assign(n, std::vector<long>(n, 0));
    std::vector<BigComplex> lnRho;
    for (size_t k = 0; k < n; ++k) lnRho.push_back(log(s.rho[k].toBig(wp)));
    BigFloat twoPi = BigFloat::pi(wp) + BigFloat::pi(wp);
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            if (k == l) continue;
            BigFloat x = (lnRho[l].im - lnRho[k].im) / twoPi;
            rep.lambda[k][l] = floor(x).toLong() + 1;
        }

    // entrywise least-squares fit of the exponential-polynomial structure
    rep.fitted.assign(n, std::vector<std::vector<BigComplex>>(n));
    rep.fitResidual = BigFloat(wp);
    BigComplex pi2i = BigComplex::pi2i(wp);
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            std::vector<long> freqs;
            if (k == l)
                for (int t = 0; t <= s.r; ++t) freqs.push_back(t);
            else
                for (int t = 0; t < s.r; ++t) freqs.push_back(rep.lambda[k][l] + t);
            NumMatrix design(size_t(m), freqs.size());
            std::vector<BigComplex> bvec;
            for (int j = 0; j < m; ++j) {
                const auto& [z, p] = rep.samples[size_t(j)];
                for (size_t f = 0; f < freqs.size(); ++f)
                    design(size_t(j), f) = exp(pi2i * BigComplex(double(freqs[f]), 0.0, wp) * z);
                bvec.push_back(p(k, l));
            }
            std::vector<BigComplex> c = leastSquares(design, bvec);
            for (int j = 0; j < m; ++j) {
                BigComplex fit(wp);
                for (size_t f = 0; f < freqs.size(); ++f) fit += design(size_t(j), f) * c[f];
                BigFloat resid = abs(fit - bvec[size_t(j)]);
                if (resid > rep.fitResidual) rep.fitResidual = resid;
            }
            rep.fitted[k][l] = std::move(c);
        }
    return rep;
}

}  // namespace dqs
