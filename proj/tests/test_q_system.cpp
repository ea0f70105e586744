#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqs/q_system.hpp"
#include "helpers.hpp"

using namespace dqs;

namespace {

/// 2x2 instance with mu = 1: Q(z) = [[1/3,1],[0,5]] + z diag(1, 1/3), q = 2.
ExactPolyMatrix workedQInstance() {
    ExactPolyMatrix m(2, 2);
    m(0, 0).setCoeff(0, ExactComplex(mpq_class(1, 3)));
    m(0, 1).setCoeff(0, ExactComplex(1));
    m(1, 1).setCoeff(0, ExactComplex(5));
    m(0, 0).setCoeff(1, ExactComplex(1));
    m(1, 1).setCoeff(1, ExactComplex(mpq_class(1, 3)));
    return m;
}

ExactMatrix diagOf(const std::vector<ExactComplex>& d) {
    ExactMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

}  // namespace

TEST_CASE("scalar q-solutions satisfy their functional equations") {
    mpfr_prec_t p = 128;
    BigFloat tol("1e-25", p);
    for (auto q : {BigComplex(2.0, 0.0, p), BigComplex(2.0, 0.5, p)}) {
        BigComplex lnq = log(q);
        for (auto t : {BigComplex(0.3, 0.1, p), BigComplex(-0.4, 0.7, p)}) {
            BigComplex z = exp(t * lnq);
            BigComplex one = BigComplex::one(p);
            // f(t+1) = q^t f(t)
            BigComplex lhs = qScalarF(t + one, q, p);
            BigComplex rhs = z * qScalarF(t, q, p);
            CHECK(abs(lhs - rhs) / (abs(lhs) + BigFloat(1.0, p)) < tol);
            // y0(qz) = (1-z) y0(z)
            lhs = qScalarY0(q * z, q, p);
            rhs = (one - z) * qScalarY0(z, q, p);
            CHECK(abs(lhs - rhs) / (abs(lhs) + BigFloat(1.0, p)) < tol);
            // same equation at infinity
            lhs = qScalarYinf(t + one, q, p);
            rhs = (one - z) * qScalarYinf(t, q, p);
            CHECK(abs(lhs - rhs) / (abs(lhs) + BigFloat(1.0, p)) < tol);
        }
    }
    // shifted root: g(qz) = (z-m) g(z)
    BigComplex q(2.0, 0.0, p);
    for (auto m : {BigComplex(1.5, 0.0, p), BigComplex(-1.0, 0.5, p)}) {
        BigComplex t(0.3, 0.0, p);
        BigComplex z = exp(t * log(q));
        for (char side : {'0', 'i'}) {
            BigComplex lhs = qScalarShifted(side, t + BigComplex::one(p), m, q, p);
            BigComplex rhs = (z - m) * qScalarShifted(side, t, m, q, p);
            CHECK(abs(lhs - rhs) / (abs(lhs) + BigFloat(1.0, p)) < tol);
        }
    }
}

TEST_CASE("exact eigen decomposition") {
    ExactMatrix m(2, 2);
    m(0, 0) = ExactComplex(2);
    m(0, 1) = ExactComplex(1);
    m(1, 0) = ExactComplex(1);
    m(1, 1) = ExactComplex(2);
    ExactEigen e = exactEigenDistinct(m);
    CHECK(m * e.vectors == e.vectors * diagOf(e.values));
    CHECK(!e.vectors.det().isZero());

    ExactMatrix tri(2, 2);
    tri(0, 0) = ExactComplex(mpq_class(1, 3));
    tri(0, 1) = ExactComplex(1);
    tri(1, 1) = ExactComplex(5);
    ExactEigen et = exactEigenDistinct(tri);
    CHECK(tri * et.vectors == et.vectors * diagOf(et.values));

    ExactMatrix jordan(2, 2);
    jordan(0, 0) = ExactComplex(1);
    jordan(0, 1) = ExactComplex(1);
    jordan(1, 1) = ExactComplex(1);
    CHECK_THROWS_AS(exactEigenDistinct(jordan), std::domain_error);
}

TEST_CASE("local series solve the system exactly, coefficient by coefficient") {
    QDifferenceSystem s = makeQSystem(workedQInstance(), ExactComplex(2));
    int order = 10;

    QLocalSolution s0 = localSeriesQ(s, '0', order);
    // q^k A_k diag(lam) = sum_j Q_j A_{k-j}
    ExactComplex qp(1);
    for (int k = 0; k <= order; ++k) {
        ExactMatrix lhs = qp * (s0.coeffs[size_t(k)] * diagOf(s0.lam));
        ExactMatrix rhs(s.n, s.n);
        for (int j = 0; j <= std::min(k, s.mu); ++j)
            rhs += coeffMat(s.Q, j) * s0.coeffs[size_t(k - j)];
        CHECK(lhs == rhs);
        qp *= s.q;
    }

    QLocalSolution si = localSeriesQ(s, 'i', order);
    // q^{-k} B_k diag(d) = sum_j Q_{mu-j} B_{k-j}
    ExactComplex qinv = ExactComplex(1) / s.q;
    qp = ExactComplex(1);
    for (int k = 0; k <= order; ++k) {
        ExactMatrix lhs = qp * (si.coeffs[size_t(k)] * diagOf(si.lam));
        ExactMatrix rhs(s.n, s.n);
        for (int j = 0; j <= k; ++j) {
            if (s.mu - j < s.low) break;
            rhs += coeffMat(s.Q, s.mu - j) * si.coeffs[size_t(k - j)];
        }
        CHECK(lhs == rhs);
        qp *= qinv;
    }
}

TEST_CASE("resonance and singular leading data are rejected") {
    // q^1 * 1 = 2 collides with the second eigenvalue when q = 2
    ExactPolyMatrix m(2, 2);
    m(0, 0).setCoeff(0, ExactComplex(1));
    m(1, 1).setCoeff(0, ExactComplex(2));
    m(0, 1).setCoeff(1, ExactComplex(1));
    QDifferenceSystem s = makeQSystem(m, ExactComplex(2));
    CHECK_THROWS_AS(localSeriesQ(s, '0', 8), std::domain_error);

    ExactPolyMatrix sing(1, 1);
    sing(0, 0).setCoeff(1, ExactComplex(1));  // Q = z, det Q(0) = 0
    QDifferenceSystem s2 = makeQSystem(sing, ExactComplex(2));
    CHECK_THROWS_AS(localSeriesQ(s2, '0', 4), std::domain_error);
}

TEST_CASE("evaluate_local on a constant diagonal system gives z^rho") {
    mpfr_prec_t p = 128;
    ExactPolyMatrix m(2, 2);
    m(0, 0).setCoeff(0, ExactComplex(2));
    m(1, 1).setCoeff(0, ExactComplex(3));
    QDifferenceSystem s = makeQSystem(m, ExactComplex(2));
    BigComplex lnq = log(BigComplex(2.0, 0.0, p + 32));
    for (char site : {'0', 'i'}) {
        QLocalSolution sol = localSeriesQ(s, site, 8);
        BigComplex t(0.4, 0.7, p);
        NumMatrix y = evaluateLocal(sol, t, p);
        for (size_t i = 0; i < 2; ++i) {
            BigComplex lam(double(2 + int(i)), 0.0, p + 32);
            BigComplex want = exp(t * log(lam));
            CHECK(abs(y(i, i) - want) / abs(want) < BigFloat("1e-30", p));
        }
        CHECK(abs(y(0, 1)) < BigFloat("1e-30", p));
        CHECK(abs(y(1, 0)) < BigFloat("1e-30", p));
    }
}

TEST_CASE("1x1 system against the scalar product formulas") {
    mpfr_prec_t p = 128;
    ExactPolyMatrix m(1, 1);
    m(0, 0).setCoeff(0, ExactComplex(1));
    m(0, 0).setCoeff(1, ExactComplex(-1));  // Q = 1 - z
    QDifferenceSystem s = makeQSystem(m, ExactComplex(2));
    BigComplex q(2.0, 0.0, p);
    BigComplex t(0.2, 0.1, p);
    BigComplex z = exp(t * log(q));
    BigFloat tol("1e-25", p);

    QLocalSolution s0 = localSeriesQ(s, '0', 48);
    BigComplex got = evaluateLocal(s0, t, p)(0, 0);
    BigComplex want = qScalarY0(z, q, p);
    CHECK(abs(got - want) / abs(want) < tol);

    // at infinity the exponent is only defined mod the lattice; the canonical
    // principal-log choice differs from the product formula by e^{2 pi i t}
    QLocalSolution si = localSeriesQ(s, 'i', 48);
    got = evaluateLocal(si, t, p)(0, 0);
    want = qScalarYinf(t, q, p) * exp(BigComplex::pi2i(p) * t);
    CHECK(abs(got - want) / abs(want) < tol);
}

TEST_CASE("constant system: both local solutions agree and P = I") {
    mpfr_prec_t p = 128;
    ExactPolyMatrix m(2, 2);
    m(0, 0).setCoeff(0, ExactComplex(2));
    m(0, 1).setCoeff(0, ExactComplex(1));
    m(1, 0).setCoeff(0, ExactComplex(1));
    m(1, 1).setCoeff(0, ExactComplex(2));
    QDifferenceSystem s = makeQSystem(m, ExactComplex(2));
    CHECK(s.mu == 0);
    QMonodromyReport rep = monodromyQ(s, 2, p);
    for (const auto& [t, pm] : rep.samples)
        CHECK(maxAbs(pm - NumMatrix::identity(2)) < BigFloat("1e-20", p));
    CHECK(rep.periodicityResidual < BigFloat("1e-20", p));
    CHECK(rep.circuitResidual < BigFloat("1e-20", p));
}

TEST_CASE("monodromy of the mu = 1 instance: periodicity and circuit relation") {
    mpfr_prec_t p = 128;
    QDifferenceSystem s = makeQSystem(workedQInstance(), ExactComplex(2));
    QMonodromyReport rep = monodromyQ(s, 2, p);
    CHECK(rep.periodicityResidual < BigFloat("1e-20", p));
    CHECK(rep.circuitResidual < BigFloat("1e-20", p));
    // exponents come from the exact eigenvalues 1/3, 5 and 1, 1/3
    mpfr_prec_t wp = rep.rho[0].prec();
    BigComplex ln2 = log(BigComplex(2.0, 0.0, wp));
    CHECK(abs(rep.rho[0] - log(ExactComplex(5).toBig(wp)) / ln2) < BigFloat("1e-30", wp));
    CHECK(abs(rep.rho[1] - log(ExactComplex(mpq_class(1, 3)).toBig(wp)) / ln2) <
          BigFloat("1e-30", wp));
    CHECK(abs(rep.sigma[0]) < BigFloat("1e-30", wp));
}

TEST_CASE("sigma-form fit recovers a planted model") {
    mpfr_prec_t p = 128;
    PeriodLattice lat = latticeConstants(BigComplex(2.0, 0.0, p), p);
    mpfr_prec_t wp = lat.lnq.prec();
    int mu = 1;
    long vPlant = -1, uPlant = 2;
    BigComplex s(0.3, 0.2, wp);
    BigComplex b = lat.eta * (s + BigComplex(double(vPlant), 0.0, wp)) -
                   lat.etaPrime * (BigComplex(0.5, 0.0, wp) + BigComplex(double(uPlant), 0.0, wp));
    BigComplex ipi(BigFloat(wp), BigFloat::pi(wp));
    BigComplex a = s - ipi / lat.lnq + BigComplex(double(vPlant), 0.0, wp) -
                   BigComplex(double(uPlant), 0.0, wp) * lat.omegaPrime;
    BigComplex t0 = a - BigComplex(0.5, 0.0, wp) - BigComplex(0.45, 0.0, wp) * lat.omegaPrime;
    BigComplex c(2.0, -1.0, wp);
    BigComplex half(0.5, 0.0, wp);
    auto entry = [&](const BigComplex& t) {
        return c * exp(-(lat.eta * half) * t * t + b * t) * sigmaEval(t - a, lat);
    };
    SigmaFormFit fit = fitSigmaForm(entry, mu, lat, s, t0, p);
    REQUIRE(fit.windingCount == 1);
    REQUIRE(fit.zeros.size() == 1);
    CHECK(abs(fit.zeros[0] - a) < BigFloat("1e-8", wp));
    CHECK(fit.v == vPlant);
    CHECK(fit.u == uPlant);
    CHECK(abs(fit.b - b) < BigFloat("1e-8", wp));
    CHECK(fit.integerResidual < BigFloat("1e-8", wp));
    CHECK(fit.latticeResidual < BigFloat("1e-8", wp));
    CHECK(fit.fitResidual < BigFloat("1e-10", wp));
}

TEST_CASE("sigma-form fit of an actual monodromy entry") {
    mpfr_prec_t p = 128;
    QDifferenceSystem s = makeQSystem(workedQInstance(), ExactComplex(2));
    QMonodromyReport rep = monodromyQ(s, 2, p);
    auto entry = monodromyEntry(s, 0, 0, 40, p);
    BigComplex t0(0.17, 0.09, rep.rho[0].prec());
    SigmaFormFit fit =
        fitSigmaForm(entry, s.mu, rep.lattice, rep.sigma[0] + rep.rho[0], t0, p);
    CHECK(fit.windingCount == s.mu);
    CHECK(int(fit.zeros.size()) == s.mu);
    CHECK(fit.fitResidual < BigFloat("1e-6", p));
    CHECK(fit.integerResidual < BigFloat("1e-4", p));
    CHECK(fit.latticeResidual < BigFloat("1e-4", p));
}

TEST_CASE("rationalizeQ clears denominators and reports their roots") {
    Matrix<RatFunc> m(2, 2);
    ExactPoly den;  // z - 2
    den.setCoeff(1, ExactComplex(1));
    den.setCoeff(0, ExactComplex(-2));
    m(0, 0) = RatFunc(ExactPoly(ExactComplex(1)), den);
    m(0, 1) = RatFunc(ExactPoly(ExactComplex(3)));
    m(1, 0) = RatFunc(ExactPoly::z());
    m(1, 1) = RatFunc(ExactPoly(ExactComplex(1)));
    RationalizedQ r = rationalizeQ(m, ExactComplex(2));
    REQUIRE(r.denRoots.size() == 1);
    CHECK(r.denRoots[0] == ExactComplex(2));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(m(i, j) * RatFunc(den) == RatFunc(r.Q(i, j)));
}
