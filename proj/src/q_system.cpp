#include "dqs/q_system.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace dqs {

QDifferenceSystem makeQSystem(const ExactPolyMatrix& q, const ExactComplex& base) {
    size_t n = q.rows();
    if (n == 0 || n != q.cols()) throw std::invalid_argument("q system: square matrix");
    if (!(normSq(base) > 1)) throw std::invalid_argument("q system: need |q| > 1");
    if (q.det().isZero()) throw std::domain_error("q system: zero determinant");
    return QDifferenceSystem{n, base, matHigh(q), matLow(q), q};
}

RationalizedQ rationalizeQ(const Matrix<RatFunc>& qraw, const ExactComplex& base) {
    size_t n = qraw.rows();
    ExactPoly lcd = ExactPoly::one();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!qraw(i, j).isZero()) lcd = polyLCM(lcd, qraw(i, j).den);
    RationalizedQ out;
    out.Q = ExactPolyMatrix(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (qraw(i, j).isZero()) continue;
            out.Q(i, j) = qraw(i, j).num * polyDivMod(lcd, qraw(i, j).den).first;
        }
    if (out.Q.det().isZero()) throw std::domain_error("rationalizeQ: zero determinant");
    (void)base;
    if (lcd.high() > 0) out.denRoots = exactRoots(lcd);
    return out;
}

ExactEigen exactEigenDistinct(const ExactMatrix& m) {
    size_t n = m.rows();
    ExactEigen out;
    bool diagonal = true;
    for (size_t i = 0; i < n && diagonal; ++i)
        for (size_t j = 0; j < n && diagonal; ++j)
            if (i != j && !m(i, j).isZero()) diagonal = false;
    if (diagonal) {
        for (size_t i = 0; i < n; ++i) out.values.push_back(m(i, i));
        out.vectors = ExactMatrix::identity(n);
    } else {
        ExactPolyMatrix p(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                p(i, j) = ExactPoly(m(i, j));
                if (i == j) p(i, j) -= ExactPoly::z();
            }
        out.values = exactRoots(p.det());
        out.vectors = ExactMatrix(n, n);
        for (size_t k = 0; k < n; ++k) {
            ExactMatrix shifted = m;
            for (size_t i = 0; i < n; ++i) shifted(i, i) -= out.values[k];
            auto v = kernelVector(shifted);
            if (v.empty()) throw std::domain_error("exactEigenDistinct: no eigenvector");
            for (size_t i = 0; i < n; ++i) out.vectors(i, k) = v[i];
        }
    }
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            if (out.values[a] == out.values[b])
                throw std::domain_error("exactEigenDistinct: repeated eigenvalue");
    return out;
}

QLocalSolution localSeriesQ(const QDifferenceSystem& s, char site, int order) {
    size_t n = s.n;
    QLocalSolution sol;
    sol.site = site;
    sol.n = n;
    sol.q = s.q;
    sol.mu = s.mu;
    sol.Q = s.Q;
    if (site == '0') {
        if (s.low < 0)
            throw std::invalid_argument("localSeriesQ: rationalize before expanding at 0");
        ExactMatrix q0 = coeffMat(s.Q, 0);
        if (q0.det().isZero()) throw std::domain_error("localSeriesQ: det Q(0) = 0");
        ExactEigen eig = exactEigenDistinct(q0);
        sol.lam = eig.values;
        // non-resonance: q^k lam_i never equals lam_j for k = 1..order
        ExactComplex qp(1);
        for (int k = 1; k <= order; ++k) {
            qp *= s.q;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (qp * sol.lam[i] == sol.lam[j])
                        throw std::domain_error("localSeriesQ: resonance at 0");
        }
        sol.coeffs.push_back(eig.vectors);
        qp = ExactComplex(1);
        for (int k = 1; k <= order; ++k) {
            qp *= s.q;
            ExactMatrix rhs(n, n);
            for (int j = 1; j <= std::min(k, s.mu); ++j)
                rhs += coeffMat(s.Q, j) * sol.coeffs[size_t(k - j)];
            ExactMatrix ak(n, n);
            for (size_t c = 0; c < n; ++c) {
                ExactMatrix lhs = -q0;
                for (size_t i = 0; i < n; ++i) lhs(i, i) += qp * sol.lam[c];
                std::vector<ExactComplex> col(n);
                for (size_t i = 0; i < n; ++i) col[i] = rhs(i, c);
                auto x = solve(lhs, col);
                for (size_t i = 0; i < n; ++i) ak(i, c) = x[i];
            }
            sol.coeffs.push_back(std::move(ak));
        }
    } else {
        ExactMatrix qmu = coeffMat(s.Q, s.mu);
        if (qmu.det().isZero())
            throw std::domain_error("localSeriesQ: leading coefficient singular");
        ExactEigen eig = exactEigenDistinct(qmu);
        sol.lam = eig.values;
        ExactComplex qinv = ExactComplex(1) / s.q;
        ExactComplex qp(1);
        for (int k = 1; k <= order; ++k) {
            qp *= qinv;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (qp * sol.lam[i] == sol.lam[j])
                        throw std::domain_error("localSeriesQ: resonance at infinity");
        }
        sol.coeffs.push_back(eig.vectors);
        qp = ExactComplex(1);
        for (int k = 1; k <= order; ++k) {
            qp *= qinv;
            ExactMatrix rhs(n, n);
            for (int j = 1; j <= k; ++j) {
                int e = s.mu - j;
                if (e < s.low) break;
                rhs += coeffMat(s.Q, e) * sol.coeffs[size_t(k - j)];
            }
            ExactMatrix bk(n, n);
            for (size_t c = 0; c < n; ++c) {
                ExactMatrix lhs = -qmu;
                for (size_t i = 0; i < n; ++i) lhs(i, i) += qp * sol.lam[c];
                std::vector<ExactComplex> col(n);
                for (size_t i = 0; i < n; ++i) col[i] = rhs(i, c);
                auto x = solve(lhs, col);
                for (size_t i = 0; i < n; ++i) bk(i, c) = x[i];
            }
            sol.coeffs.push_back(std::move(bk));
        }
    }
    return sol;
}

BigComplex zFromT(const BigComplex& t, const BigComplex& lnq) { return exp(t * lnq); }

namespace {

NumMatrix evaluateLocalImpl(const QLocalSolution& sol, const BigComplex& t, mpfr_prec_t prec,
                            int extraSteps) {
    mpfr_prec_t wp = prec + 32;
    size_t n = sol.n;
    BigComplex qn = sol.q.toBig(wp);
    BigComplex lnq = log(qn);
    BigComplex tw = BigComplex(BigFloat(wp) + t.re, BigFloat(wp) + t.im);
    NumPolyMatrix qmat = sol.Q.map([&](const ExactPoly& p) { return promote(p, wp); });
    std::vector<BigComplex> logLam;
    for (const auto& l : sol.lam) logLam.push_back(log(l.toBig(wp)));
    double lnAbsQ = lnq.re.toDouble();
    double lnAbsZ = (tw * lnq).re.toDouble();

    // sum the series at the anchor t -+ m, demanding that the last stored term
    // is negligible; enlarge m until it is (the convergence radius is unknown,
    // so the anchor is pushed adaptively toward the series' own site)
    int order = int(sol.coeffs.size()) - 1;
    BigFloat lastMag = maxAbs(promote(sol.coeffs.back(), wp));
    double logLast =
        lastMag.isZero() ? -1e9 : double(mpfr_get_exp(lastMag.raw())) * std::log(2.0);

    if (sol.site == '0') {
        double target = std::log(0.25);
        long m = long(std::ceil((lnAbsZ - target) / lnAbsQ));
        if (m < 0) m = 0;
        m += extraSteps;
        double logTol = std::log(2.0) * double(-long(prec) - 4);
        while (logLast + order * (lnAbsZ - double(m) * lnAbsQ) > logTol) ++m;
        BigComplex te = tw - BigComplex(double(m), 0.0, wp);
        BigComplex ze = exp(te * lnq);
        NumMatrix f(n, n);
        BigComplex p = BigComplex::one(wp);
        for (const auto& c : sol.coeffs) {
            f += p * promote(c, wp);
            p *= ze;
        }
        NumMatrix y(n, n);
        for (size_t c = 0; c < n; ++c)
            for (size_t i = 0; i < n; ++i) y(i, c) = f(i, c) * exp(te * logLam[c]);
        for (long j = 0; j < m; ++j) {
            BigComplex zc = exp((te + BigComplex(double(j), 0.0, wp)) * lnq);
            y = evalMat(qmat, zc) * y;
        }
        return y;
    }
    double target = std::log(4.0);
    long m = long(std::ceil((target - lnAbsZ) / lnAbsQ));
    if (m < 0) m = 0;
    m += extraSteps;
    double logTol = std::log(2.0) * double(-long(prec) - 4);
    while (logLast - order * (lnAbsZ + double(m) * lnAbsQ) > logTol) ++m;
    BigComplex te = tw + BigComplex(double(m), 0.0, wp);
    BigComplex ze = exp(te * lnq);
    BigComplex zinv = BigComplex::one(wp) / ze;
    NumMatrix f(n, n);
    BigComplex p = BigComplex::one(wp);
    for (const auto& c : sol.coeffs) {
        f += p * promote(c, wp);
        p *= zinv;
    }
    BigComplex half(0.5, 0.0, wp);
    BigComplex pref = exp(lnq * BigComplex(double(sol.mu), 0.0, wp) * half * (te * te - te));
    NumMatrix y(n, n);
    for (size_t c = 0; c < n; ++c)
        for (size_t i = 0; i < n; ++i) y(i, c) = pref * f(i, c) * exp(te * logLam[c]);
    BigFloat tiny = BigFloat::pow2(-4 * long(wp), wp);
    for (long j = 1; j <= m; ++j) {
        BigComplex zc = exp((te - BigComplex(double(j), 0.0, wp)) * lnq);
        NumMatrix qv = evalMat(qmat, zc);
        if (abs(qv.det()) < tiny)
            throw std::domain_error("evaluateLocal: singular point on path");
        y = inverse(qv) * y;
    }
    return y;
}

}  // namespace

NumMatrix evaluateLocal(const QLocalSolution& sol, const BigComplex& t, mpfr_prec_t prec) {
    return evaluateLocalImpl(sol, t, prec, 0);
}

NumMatrix evaluateLocalBiased(const QLocalSolution& sol, const BigComplex& t, mpfr_prec_t prec,
                              int extraSteps) {
    return evaluateLocalImpl(sol, t, prec, extraSteps);
}

QMonodromyReport monodromyQ(const QDifferenceSystem& s, int gridCount, mpfr_prec_t prec) {
    size_t n = s.n;
    int order = 40;
    QLocalSolution s0 = localSeriesQ(s, '0', order);
    QLocalSolution si = localSeriesQ(s, 'i', order);
    mpfr_prec_t wp = prec + 32;
    BigComplex qn = s.q.toBig(wp);
    BigComplex lnq = log(qn);
    QMonodromyReport rep;
    rep.prec = prec;
    rep.lattice = latticeConstants(qn, prec);
    for (const auto& l : s0.lam) rep.rho.push_back(log(l.toBig(wp)) / lnq);
    for (const auto& l : si.lam) rep.sigma.push_back(-(log(l.toBig(wp)) / lnq));
    BigComplex omegaPrime = BigComplex::pi2i(wp) / lnq;

    auto pAt = [&](const BigComplex& t, int bias) {
        NumMatrix y0 = evaluateLocalImpl(s0, t, prec, bias);
        NumMatrix yi = evaluateLocalImpl(si, t, prec, bias);
        return inverse(yi) * y0;
    };

    int g = std::max(2, gridCount);
    BigComplex t0(0.23, 0.11, wp);
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) {
            BigComplex t = t0 + BigComplex(BigFloat(mpq_class(a, g), wp), BigFloat(wp)) +
                           BigComplex(BigFloat(mpq_class(b, g), wp), BigFloat(wp)) * omegaPrime;
            rep.samples.emplace_back(t, pAt(t, 0));
        }

    // q-periodicity, with a biased extension so the check is independent
    {
        const auto& [t, p] = rep.samples.front();
        NumMatrix p1 = pAt(t + BigComplex::one(wp), 3);
        rep.periodicityResidual = maxAbs(p1 - p) / (maxAbs(p) + BigFloat(1.0, wp));
    }

    // circuit relation under t -> t + omega'
    {
        BigFloat worst(wp);
        BigComplex pi(BigFloat::pi(wp));
        BigComplex pi2i = BigComplex::pi2i(wp);
        for (int pick = 0; pick < 2; ++pick) {
            const auto& [t, p] = rep.samples[size_t(pick * (int(rep.samples.size()) - 1))];
            NumMatrix pw = pAt(t + omegaPrime, 0);
            BigComplex common = exp(-pi2i * BigComplex(double(s.mu), 0.0, wp) * t) *
                                exp(BigComplex(2.0 * s.mu, 0.0, wp) * pi * pi / lnq);
            if (s.mu % 2 != 0) common = -common;
            BigFloat scale = maxAbs(p) + BigFloat(1.0, wp);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    BigComplex mult =
                        common * exp(pi2i * (rep.sigma[i] + rep.rho[j]));
                    BigFloat resid = abs(pw(i, j) - mult * p(i, j)) / scale;
                    if (resid > worst) worst = resid;
                }
        }
        rep.circuitResidual = worst;
    }
    return rep;
}

std::function<BigComplex(const BigComplex&)> monodromyEntry(const QDifferenceSystem& s, size_t i,
                                                            size_t j, int order,
                                                            mpfr_prec_t prec) {
    auto s0 = std::make_shared<QLocalSolution>(localSeriesQ(s, '0', order));
    auto si = std::make_shared<QLocalSolution>(localSeriesQ(s, 'i', order));
    return [s0, si, i, j, prec](const BigComplex& t) {
        NumMatrix y0 = evaluateLocal(*s0, t, prec);
        NumMatrix yi = evaluateLocal(*si, t, prec);
        NumMatrix p = inverse(yi) * y0;
        return p(i, j);
    };
}

// ---- scalar solutions ----

BigComplex qScalarF(const BigComplex& t, const BigComplex& q, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    BigComplex tw = BigComplex(BigFloat(wp) + t.re, BigFloat(wp) + t.im);
    BigComplex lnq = log(BigComplex(BigFloat(wp) + q.re, BigFloat(wp) + q.im));
    BigComplex half(0.5, 0.0, wp);
    return exp(lnq * half * (tw * tw - tw));
}

BigComplex qScalarY0(const BigComplex& z, const BigComplex& q, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    BigComplex zw = BigComplex(BigFloat(wp) + z.re, BigFloat(wp) + z.im);
    BigComplex qw = BigComplex(BigFloat(wp) + q.re, BigFloat(wp) + q.im);
    BigComplex acc = BigComplex::one(wp);
    BigComplex fac = zw;
    BigFloat tol = BigFloat::pow2(-long(prec) - 8, wp);
    for (int k = 1; k < 64 * 1024; ++k) {
        fac = fac / qw;  // z q^{-k}
        acc *= (BigComplex::one(wp) - fac);
        if (abs(fac) < tol) break;
    }
    return acc;
}

BigComplex qScalarYinf(const BigComplex& t, const BigComplex& q, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    BigComplex tw = BigComplex(BigFloat(wp) + t.re, BigFloat(wp) + t.im);
    BigComplex qw = BigComplex(BigFloat(wp) + q.re, BigFloat(wp) + q.im);
    BigComplex lnq = log(qw);
    BigComplex z = exp(tw * lnq);
    BigComplex ipi = BigComplex(BigFloat(wp), BigFloat::pi(wp));
    BigComplex acc = qScalarF(tw, qw, wp) * exp(-ipi * tw);
    BigComplex fac = BigComplex::one(wp) / z;
    BigFloat tol = BigFloat::pow2(-long(prec) - 8, wp);
    for (int k = 0; k < 64 * 1024; ++k) {
        acc = acc / (BigComplex::one(wp) - fac);  // (1 - z^{-1} q^{-k})^{-1}
        if (abs(fac) < tol) break;
        fac = fac / qw;
    }
    return acc;
}

BigComplex qScalarShifted(char side, const BigComplex& t, const BigComplex& m,
                          const BigComplex& q, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    BigComplex tw = BigComplex(BigFloat(wp) + t.re, BigFloat(wp) + t.im);
    BigComplex mw = BigComplex(BigFloat(wp) + m.re, BigFloat(wp) + m.im);
    BigComplex qw = BigComplex(BigFloat(wp) + q.re, BigFloat(wp) + q.im);
    BigComplex lnq = log(qw);
    BigComplex z = exp(tw * lnq);
    BigComplex zbar = z / mw;
    BigComplex tbar = log(zbar) / lnq;
    BigComplex ipi = BigComplex(BigFloat(wp), BigFloat::pi(wp));
    BigComplex prefix = exp(ipi * tbar) * exp(tbar * log(mw));
    if (side == '0') return prefix * qScalarY0(zbar, qw, prec);
    return prefix * qScalarYinf(tbar, qw, prec);
}

// ---- sigma-form fitting ----

namespace {

BigComplex sigmaProduct(const BigComplex& t, const std::vector<BigComplex>& zeros, int mu,
                        const PeriodLattice& lat) {
    mpfr_prec_t wp = lat.lnq.prec();
    BigComplex half(0.5, 0.0, wp);
    BigComplex g = exp(-(lat.eta * BigComplex(double(mu), 0.0, wp) * half) * t * t);
    for (const auto& a : zeros) g *= sigmaEval(t - a, lat);
    return g;
}

}  // namespace

SigmaFormFit fitSigmaForm(const std::function<BigComplex(const BigComplex&)>& entry, int mu,
                          const PeriodLattice& lat, const BigComplex& sigmaPlusRho,
                          const BigComplex& t0in, mpfr_prec_t prec) {
    mpfr_prec_t wp = lat.lnq.prec();
    BigComplex omegaPrime = lat.omegaPrime;
    BigComplex t0 = BigComplex(BigFloat(wp) + t0in.re, BigFloat(wp) + t0in.im);
    SigmaFormFit out;

    // ---- zero location by argument-principle subdivision ----
    // The entry varies over the cell by huge exponential factors, so magnitude
    // grids are useless; the winding number is scale invariant.
    BigFloat pi = BigFloat::pi(wp);
    // phase increment along one side, refined until no step exceeds 1.2 rad
    auto phaseAlong = [&](const BigComplex& a, const BigComplex& b, int kSeg) {
        for (;; kSeg *= 2) {
            BigFloat total(wp);
            BigFloat prev = arg(entry(a));
            bool ok = true;
            for (int k = 1; k <= kSeg; ++k) {
                BigComplex t = a + BigComplex(double(k) / kSeg, 0.0, wp) * (b - a);
                BigFloat cur = arg(entry(t));
                BigFloat d = cur - prev;
                while (d > pi) d -= pi + pi;
                while (d < -pi) d += pi + pi;
                if (abs(d).toDouble() > 1.2 && kSeg < 4096) {
                    ok = false;
                    break;
                }
                total += d;
                prev = cur;
            }
            if (ok) return total;
        }
    };
    auto winding = [&](const BigComplex& corner, const BigComplex& va, const BigComplex& vb,
                       int kSeg) {
        std::vector<BigComplex> corners{corner, corner + va, corner + va + vb, corner + vb};
        BigFloat total(wp);
        for (int side = 0; side < 4; ++side)
            total += phaseAlong(corners[size_t(side)], corners[size_t((side + 1) % 4)], kSeg);
        return int(std::lround((total / (pi + pi)).toDouble()));
    };
    out.windingCount = winding(t0, BigComplex::one(wp), omegaPrime, 64);

    BigFloat h = BigFloat::pow2(-long(prec) / 3, wp);
    BigFloat conv = BigFloat::pow2(-(2 * long(prec)) / 3, wp);
    auto newton = [&](BigComplex t) {
        for (int it = 0; it < 60; ++it) {
            BigComplex f = entry(t);
            BigComplex df = (entry(t + BigComplex(h, BigFloat(wp))) -
                             entry(t - BigComplex(h, BigFloat(wp)))) /
                            BigComplex(h + h, BigFloat(wp));
            if (df.isZero()) break;
            BigComplex step = f / df;
            t -= step;
            if (abs(step) < conv) break;
        }
        return t;
    };
    struct Cell {
        BigComplex corner, va, vb;
        int count;
        int depth;
    };
    std::vector<Cell> work{{t0, BigComplex::one(wp), omegaPrime, out.windingCount, 0}};
    while (!work.empty()) {
        Cell c = work.back();
        work.pop_back();
        if (c.count <= 0) continue;
        double size = std::max(abs(c.va).toDouble(), abs(c.vb).toDouble());
        if (size < 0.08 || c.depth >= 10) {
            BigComplex half(0.5, 0.0, wp);
            BigComplex z = newton(c.corner + half * c.va + half * c.vb);
            // reduce into the fundamental cell
            BigComplex d = z - t0;
            BigFloat bcoef = d.im / omegaPrime.im;
            BigFloat acoef = d.re - bcoef * omegaPrime.re;
            z = z - BigComplex(floor(acoef)) - BigComplex(floor(bcoef)) * omegaPrime;
            bool dup = false;
            for (const auto& known : out.zeros)
                if (abs(known - z) < BigFloat(1e-4, wp)) dup = true;
            if (!dup) out.zeros.push_back(z);
            continue;
        }
        // split off-center so a zero is unlikely to land on a cut
        BigComplex fa(0.5003, 0.0, wp), fb(0.4997, 0.0, wp);
        BigComplex va1 = fa * c.va, va2 = c.va - va1;
        BigComplex vb1 = fb * c.vb, vb2 = c.vb - vb1;
        int kSeg = std::max(12, 48 >> c.depth);
        std::vector<Cell> kids{{c.corner, va1, vb1, 0, c.depth + 1},
                               {c.corner + va1, va2, vb1, 0, c.depth + 1},
                               {c.corner + vb1, va1, vb2, 0, c.depth + 1},
                               {c.corner + va1 + vb1, va2, vb2, 0, c.depth + 1}};
        int found = 0;
        for (auto& k : kids) {
            if (found >= c.count) break;
            k.count = winding(k.corner, k.va, k.vb, kSeg);
            found += std::max(k.count, 0);
            if (k.count > 0) work.push_back(k);
        }
    }

    // ---- slope b from the branch-continuous logarithm of entry/g ----
    int kFit = 24;
    NumMatrix design(size_t(kFit), 2);
    std::vector<BigComplex> rhs;
    BigComplex prevL(wp);
    BigFloat twoPi = BigFloat::pi(wp) + BigFloat::pi(wp);
    for (int k = 0; k < kFit; ++k) {
        BigComplex t = t0 + BigComplex(0.02 + 0.9 * double(k) / kFit, 0.013, wp);
        BigComplex hval = entry(t) / sigmaProduct(t, out.zeros, mu, lat);
        BigComplex L = log(hval);
        if (k > 0) {
            // keep the imaginary part continuous along the path
            BigFloat d = L.im - prevL.im;
            long shift = lround(((d / twoPi)).toDouble());
            L.im -= BigFloat(double(shift), wp) * twoPi;
        }
        prevL = L;
        design(size_t(k), 0) = BigComplex::one(wp);
        design(size_t(k), 1) = t;
        rhs.push_back(L);
    }
    auto coef = leastSquares(design, rhs);
    out.c = exp(coef[0]);
    out.b = coef[1];

    // ---- integers u, v from b = eta(sigma+rho+v) - eta'(mu/2+u) ----
    {
        BigComplex half(0.5, 0.0, wp);
        BigComplex target = out.b - lat.eta * sigmaPlusRho +
                            lat.etaPrime * BigComplex(double(mu), 0.0, wp) * half;
        // solve eta*v - eta'*u = target over the reals
        NumMatrix m2(2, 2);
        m2(0, 0) = BigComplex(lat.eta.re);
        m2(0, 1) = BigComplex(-lat.etaPrime.re);
        m2(1, 0) = BigComplex(lat.eta.im);
        m2(1, 1) = BigComplex(-lat.etaPrime.im);
        std::vector<BigComplex> r{BigComplex(target.re), BigComplex(target.im)};
        auto vu = solve(m2, r);
        BigFloat vReal = vu[0].re, uReal = vu[1].re;
        out.v = lround(vReal.toDouble());
        out.u = lround(uReal.toDouble());
        BigFloat dv = abs(vReal - BigFloat(double(out.v), wp));
        BigFloat du = abs(uReal - BigFloat(double(out.u), wp));
        out.integerResidual = dv > du ? dv : du;
    }

    // ---- lattice condition on the zero sum ----
    {
        BigComplex sumA(wp);
        for (const auto& a : out.zeros) sumA += a;
        BigComplex ipi = BigComplex(BigFloat(wp), BigFloat::pi(wp));
        BigComplex targetSum = sigmaPlusRho - BigComplex(double(mu), 0.0, wp) * ipi / lat.lnq +
                               BigComplex(double(out.v), 0.0, wp) -
                               BigComplex(double(out.u), 0.0, wp) * omegaPrime;
        BigComplex d = sumA - targetSum;
        BigFloat beta = d.im / omegaPrime.im;
        BigFloat alpha = d.re - beta * omegaPrime.re;
        BigFloat ra = abs(alpha - round(alpha)), rb = abs(beta - round(beta));
        out.latticeResidual = hypot(ra, rb);
    }

    // ---- residual of the fitted model on fresh samples ----
    {
        BigFloat worst(wp);
        for (int k = 0; k < 16; ++k) {
            BigComplex t = t0 + BigComplex(0.05 + 0.85 * double(k) / 16, 0.041, wp) +
                           BigComplex(0.23, 0.0, wp) * omegaPrime;
            BigComplex model = out.c * exp(out.b * t) * sigmaProduct(t, out.zeros, mu, lat);
            BigComplex val = entry(t);
            BigFloat resid = abs(model - val) / (abs(val) + BigFloat(1e-30, wp));
            if (resid > worst) worst = resid;
        }
        out.fitResidual = worst;
    }
    return out;
}

}  // namespace dqs
