#include "dqs/gauge.hpp"

#include <algorithm>
#include <numeric>

namespace dqs {

namespace {

bool isDiagonal(const ExactMatrix& m) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (i != j && !m(i, j).isZero()) return false;
    return true;
}

ExactMatrix diagMat(const std::vector<ExactComplex>& v) {
    ExactMatrix m(v.size(), v.size());
    for (size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
}

/// Inverse of a Laurent-polynomial matrix with constant determinant.
ExactPolyMatrix inverseConstDet(const ExactPolyMatrix& u) {
    ExactPoly d = u.det();
    if (d.isZero() || d.low() != 0 || d.high() != 0)
        throw std::logic_error("inverseConstDet: determinant is not a constant");
    ExactComplex c = ExactComplex(1) / d.coeff(0);
    return adjugate(u).map([&](const ExactPoly& p) { return c * p; });
}

Matrix<RatFunc> ratConst(const ExactMatrix& m) {
    return m.map([](const ExactComplex& c) { return RatFunc(ExactPoly(c)); });
}

RatFunc shiftRatScalar(SystemKind kind, const ExactComplex& q, const RatFunc& f) {
    if (f.isZero()) return f;
    if (kind == SystemKind::qdifference)
        return {f.num.scaleArg(q), f.den.scaleArg(q)};
    int lo = std::min(f.num.low(), 0);
    ExactPoly nn = f.num.shifted(-lo).shiftArg(ExactComplex(1));
    ExactPoly dd = f.den.shiftArg(ExactComplex(1));
    ExactPoly zp1 = ExactPoly::z() + ExactPoly::one();
    for (int i = 0; i < -lo; ++i) dd *= zp1;
    return {std::move(nn), std::move(dd)};
}

ExactEigen topEigen(const ExactMatrix& top, const char* who) {
    if (isDiagonal(top)) {
        ExactEigen eig;
        eig.vectors = ExactMatrix::identity(top.rows());
        for (size_t i = 0; i < top.rows(); ++i) eig.values.push_back(top(i, i));
        return eig;
    }
    try {
        return exactEigenDistinct(top);
    } catch (const std::exception& ex) {
        throw NonDiagonalizable(std::string(who) + ": " + ex.what());
    }
}

std::vector<size_t> identityPerm(size_t n) {
    std::vector<size_t> p(n);
    std::iota(p.begin(), p.end(), size_t(0));
    return p;
}

Matrix<RatFunc> permGauge(const std::vector<size_t>& p) {
    return ratConst(ExactMatrix::identity(p.size()).permuteRows(p));
}

/// Conjugates to diagonal and permutes so the leading diagonal equals
/// `expect` entry by entry.
ExactPolyMatrix finalizeTop(ExactPolyMatrix qf, int topDeg, const std::vector<ExactComplex>& expect,
                            GaugeLog& log, const char* who) {
    size_t n = qf.rows();
    if (matLow(qf) < 0 || matHigh(qf) != topDeg)
        throw NormalizationLost(std::string(who) + ": top degree not preserved");
    ExactEigen eig = topEigen(coeffMat(qf, topDeg), who);
    ExactMatrix ci = inverse(eig.vectors);
    qf = constMat(ci) * qf * constMat(eig.vectors);
    log.push("constant", ratConst(ci));
    std::vector<size_t> p(n);
    std::vector<bool> used(n, false);
    for (size_t i = 0; i < n; ++i) {
        bool found = false;
        for (size_t j = 0; j < n && !found; ++j)
            if (!used[j] && eig.values[j] == expect[i]) {
                p[i] = j;
                used[j] = true;
                found = true;
            }
        if (!found)
            throw NormalizationLost(std::string(who) + ": exponents do not match the targets");
    }
    if (p != identityPerm(n)) {
        qf = qf.permuteRows(p).permuteCols(p);
        log.push("permutation", permGauge(p));
    }
    return qf;
}

}  // namespace

// ---- log ----

void GaugeLog::push(std::string tag, Matrix<RatFunc> m) {
    steps.push_back(GaugeStep{std::move(tag), std::move(m)});
}

Matrix<RatFunc> GaugeLog::total(size_t n) const {
    Matrix<RatFunc> m = Matrix<RatFunc>::identity(n);
    for (const auto& st : steps) m = st.M * m;
    return m;
}

// ---- conversions ----

Matrix<RatFunc> ratMat(const ExactPolyMatrix& m) {
    return m.map([](const ExactPoly& p) { return RatFunc(p); });
}

ExactPolyMatrix polyMat(const Matrix<RatFunc>& m) {
    return m.map([](const RatFunc& f) {
        if (!f.isPolynomial()) throw std::invalid_argument("polyMat: nontrivial denominator");
        return f.num;
    });
}

std::vector<ExactComplex> expandAtInf(const RatFunc& f, int top, int count) {
    std::vector<ExactComplex> out{};
    out.resize(size_t(count));
    if (f.isZero()) return out;
    int dn = f.den.high();
    if (f.num.high() - dn > top) throw std::invalid_argument("expandAtInf: growth above z^top");
    int mMax = f.num.high() - dn - (top - count + 1);
    if (mMax < 0) return out;
    // 1/den = z^{-dn} sum_m inv[m] z^{-m}
    std::vector<ExactComplex> inv(size_t(mMax) + 1);
    ExactComplex lead = f.den.coeff(dn);
    inv[0] = ExactComplex(1) / lead;
    for (int m = 1; m <= mMax; ++m) {
        ExactComplex s;
        for (int i = 1; i <= m; ++i) s += f.den.coeff(dn - i) * inv[size_t(m - i)];
        inv[size_t(m)] = -(s / lead);
    }
    for (const auto& [e, a] : f.num.coeffs())
        for (int m = 0; m <= mMax; ++m) {
            int idx = top - (e - dn - m);
            if (idx >= 0 && idx < count) out[size_t(idx)] += a * inv[size_t(m)];
        }
    return out;
}

Matrix<RatFunc> shiftArgRat(SystemKind kind, const ExactComplex& q, const Matrix<RatFunc>& m) {
    return m.map([&](const RatFunc& f) { return shiftRatScalar(kind, q, f); });
}

// ---- gauge application ----

Matrix<RatFunc> applyGauge(SystemKind kind, const ExactComplex& q, const Matrix<RatFunc>& M,
                           const Matrix<RatFunc>& A) {
    if (M.rows() != M.cols() || A.rows() != A.cols() || M.rows() != A.rows())
        throw std::invalid_argument("applyGauge: shape mismatch");
    RatFunc dm = M.det();
    if (dm.isZero()) throw SingularGauge("applyGauge: singular gauge matrix");
    Matrix<RatFunc> out = shiftArgRat(kind, q, M) * A * inverse(M);
    RatFunc want = shiftRatScalar(kind, q, dm) * A.det() / dm;
    if (!(out.det() == want)) throw std::logic_error("applyGauge: determinant check failed");
    return out;
}

Matrix<RatFunc> replayGauge(SystemKind kind, const ExactComplex& q, const GaugeLog& log,
                            const Matrix<RatFunc>& system) {
    Matrix<RatFunc> cur = system;
    for (const auto& st : log.steps) cur = applyGauge(kind, q, st.M, cur);
    return cur;
}

// ---- rational difference systems ----

RationalDiffSystem toRational(const DifferenceSystem& s) {
    return {s.n, s.r, ratMat(s.A), s.rho};
}

std::vector<ExactMatrix> infCoeffs(const RationalDiffSystem& s, int count) {
    std::vector<ExactMatrix> out(size_t(count), ExactMatrix(s.n, s.n));
    for (size_t i = 0; i < s.n; ++i)
        for (size_t j = 0; j < s.n; ++j) {
            std::vector<ExactComplex> c = expandAtInf(s.A(i, j), s.r, count);
            for (int m = 0; m < count; ++m) out[size_t(m)](i, j) = c[size_t(m)];
        }
    return out;
}

std::vector<ExactComplex> diffExponents(const RationalDiffSystem& s) {
    std::vector<ExactMatrix> tops = infCoeffs(s, 2);
    std::vector<ExactComplex> d(s.n);
    for (size_t k = 0; k < s.n; ++k) d[k] = tops[1](k, k) / s.rho[k];
    return d;
}

std::vector<ExactMatrix> formalSeriesRational(const RationalDiffSystem& s, int order) {
    std::vector<ExactMatrix> tops = infCoeffs(s, order + 2);
    if (!(tops[0] == diagMat(s.rho)))
        throw NormalizationLost("formalSeriesRational: leading coefficient is not diag(rho)");
    ExactComplex halfR(mpq_class(s.r, 2));
    std::vector<ExactComplex> delta(s.n);
    for (size_t k = 0; k < s.n; ++k) delta[k] = tops[1](k, k) / s.rho[k] - halfR;
    return diffSeriesCoeffs<ExactComplex>(tops, s.rho, delta, s.r, order, 0);
}

// ---- normalize leading ----

QDifferenceSystem normalizeLeading(const QDifferenceSystem& s, GaugeLog* log) {
    ExactMatrix top = coeffMat(s.Q, s.mu);
    if (isDiagonal(top)) return s;
    ExactEigen eig = topEigen(top, "normalizeLeading");
    ExactMatrix ci = inverse(eig.vectors);
    ExactPolyMatrix out = constMat(ci) * s.Q * constMat(eig.vectors);
    if (!isDiagonal(coeffMat(out, s.mu)))
        throw NormalizationLost("normalizeLeading: conjugation left the top nondiagonal");
    if (log) log->push("constant", ratConst(ci));
    return makeQSystem(out, s.q);
}

RationalDiffSystem normalizeLeading(const RationalDiffSystem& s, GaugeLog* log) {
    ExactMatrix top = infCoeffs(s, 1)[0];
    if (isDiagonal(top)) {
        RationalDiffSystem out = s;
        for (size_t i = 0; i < s.n; ++i) out.rho[i] = top(i, i);
        return out;
    }
    ExactEigen eig = topEigen(top, "normalizeLeading");
    ExactMatrix ci = inverse(eig.vectors);
    RationalDiffSystem out{s.n, s.r, ratConst(ci) * s.A * ratConst(eig.vectors), eig.values};
    if (!isDiagonal(infCoeffs(out, 1)[0]))
        throw NormalizationLost("normalizeLeading: conjugation left the top nondiagonal");
    if (log) log->push("constant", ratConst(ci));
    return out;
}

// ---- integer shifts ----

QDifferenceSystem shiftConstant(const QDifferenceSystem& s, size_t k, int delta, GaugeLog* log) {
    if (k >= s.n || (delta != 1 && delta != -1))
        throw std::invalid_argument("shiftConstant: bad index or delta");
    ExactMatrix top = coeffMat(s.Q, s.mu);
    if (!isDiagonal(top)) throw NormalizationLost("shiftConstant: system is not normalized");
    // carry-through constant from the infinity-side series
    ExactMatrix b1 = localSeriesQ(s, 'i', 2).coeffs[1];
    size_t n = s.n;
    int e = -delta;  // z-power on row k; sigma sits in z^{-sigma}
    ExactMatrix b0 = ExactMatrix::identity(n);
    if (delta == 1) {
        for (size_t i = 0; i < n; ++i)
            if (i != k) b0(i, k) = b1(i, k);
    } else {
        for (size_t j = 0; j < n; ++j)
            if (j != k) b0(k, j) = b1(k, j);
    }
    ExactMatrix b0i = inverse(b0);
    ExactPolyMatrix t = s.Q;
    ExactComplex qe = pow(s.q, long(e));
    for (size_t j = 0; j < n; ++j) t(k, j) = (qe * t(k, j)).shifted(e);
    for (size_t i = 0; i < n; ++i) t(i, k) = t(i, k).shifted(-e);
    ExactPolyMatrix out = constMat(b0i) * t * constMat(b0);

    if (matHigh(out) != s.mu) throw NormalizationLost("shiftConstant: top degree changed");
    if (matLow(out) < s.low - 1)
        throw NormalizationLost("shiftConstant: more than one new negative power");
    ExactMatrix expect = top;
    expect(k, k) = expect(k, k) * pow(s.q, long(-delta));
    if (!(coeffMat(out, s.mu) == expect))
        throw NormalizationLost("shiftConstant: exponent shift failed");

    if (log) {
        Matrix<RatFunc> m(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!b0i(i, j).isZero())
                    m(i, j) = RatFunc(ExactPoly(b0i(i, j), j == k ? e : 0));
        log->push("shift", std::move(m));
    }
    return makeQSystem(out, s.q);
}

RationalDiffSystem shiftConstant(const RationalDiffSystem& s, size_t k, int delta, GaugeLog* log) {
    if (k >= s.n || (delta != 1 && delta != -1))
        throw std::invalid_argument("shiftConstant: bad index or delta");
    ExactMatrix f1 = formalSeriesRational(s, 2)[1];
    size_t n = s.n;
    int e = delta;  // z-power on row k; d sits in z^{d}
    ExactMatrix f0 = ExactMatrix::identity(n);
    if (delta == 1) {
        for (size_t j = 0; j < n; ++j)
            if (j != k) f0(k, j) = f1(k, j);
    } else {
        for (size_t i = 0; i < n; ++i)
            if (i != k) f0(i, k) = f1(i, k);
    }
    ExactMatrix f0i = inverse(f0);
    Matrix<RatFunc> t = s.A;
    RatFunc zp1(ExactPoly::z() + ExactPoly::one());
    RatFunc zz(ExactPoly::z());
    for (size_t j = 0; j < n; ++j) t(k, j) = (e == 1) ? t(k, j) * zp1 : t(k, j) / zp1;
    for (size_t i = 0; i < n; ++i) t(i, k) = (e == 1) ? t(i, k) / zz : t(i, k) * zz;
    RationalDiffSystem out{n, s.r, ratConst(f0i) * t * ratConst(f0), s.rho};

    std::vector<ExactMatrix> check = infCoeffs(out, 2);  // throws if the degree grew
    if (!(check[0] == diagMat(s.rho)))
        throw NormalizationLost("shiftConstant: leading coefficient spoiled");
    std::vector<ExactComplex> dOld = diffExponents(s);
    for (size_t i = 0; i < n; ++i) {
        ExactComplex want = dOld[i] + (i == k ? ExactComplex(delta) : ExactComplex(0));
        if (!(check[1](i, i) / s.rho[i] == want))
            throw NormalizationLost("shiftConstant: exponent shift failed");
    }

    if (log) {
        Matrix<RatFunc> m(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!f0i(i, j).isZero())
                    m(i, j) = RatFunc(ExactPoly(f0i(i, j), j == k ? e : 0));
        log->push("shift", std::move(m));
    }
    return out;
}

// ---- Sauvage factorization ----

SauvageFactorization sauvageFactorize(const ExactPolyMatrix& M) {
    size_t n = M.rows();
    if (n == 0 || n != M.cols()) throw std::invalid_argument("sauvageFactorize: square matrix");
    ExactPoly d = M.det();
    if (d.isZero() || d.low() != d.high())
        throw NotUnitOffOrigin("sauvageFactorize: determinant is not a nonzero monomial");
    int m = d.high();

    ExactPolyMatrix u = ExactPolyMatrix::identity(n);
    ExactPolyMatrix cur = M;
    auto rowHigh = [&](size_t i) {
        bool any = false;
        int h = 0;
        for (size_t j = 0; j < n; ++j)
            if (!cur(i, j).isZero()) {
                h = any ? std::max(h, cur(i, j).high()) : cur(i, j).high();
                any = true;
            }
        if (!any) throw std::logic_error("sauvageFactorize: zero row");
        return h;
    };
    std::vector<int> k(n);
    for (size_t i = 0; i < n; ++i) k[i] = rowHigh(i);

    for (int guard = 0;; ++guard) {
        if (guard > 100000) throw std::logic_error("sauvageFactorize: no convergence");
        ExactMatrix t(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) t(i, j) = cur(i, j).coeff(k[i]);
        std::vector<ExactComplex> v = leftKernelVector(t);
        if (v.empty()) break;
        size_t piv = n;
        for (size_t i = 0; i < n; ++i)
            if (!v[i].isZero() && (piv == n || k[i] > k[piv] || (k[i] == k[piv] && i > piv)))
                piv = i;
        std::vector<ExactPoly> nc(n), nu(n);
        for (size_t i = 0; i < n; ++i) {
            if (v[i].isZero()) continue;
            ExactPoly f(v[i], k[piv] - k[i]);
            for (size_t j = 0; j < n; ++j) {
                nc[j] += f * cur(i, j);
                nu[j] += f * u(i, j);
            }
        }
        for (size_t j = 0; j < n; ++j) {
            cur(piv, j) = nc[j];
            u(piv, j) = nu[j];
        }
        int nk = rowHigh(piv);
        if (nk >= k[piv]) throw std::logic_error("sauvageFactorize: leading term survived");
        k[piv] = nk;
    }

    std::vector<size_t> ord(n);
    std::iota(ord.begin(), ord.end(), size_t(0));
    std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return k[a] > k[b]; });
    SauvageFactorization out;
    out.U = u.permuteRows(ord);
    out.W = ExactPolyMatrix(n, n);
    out.K.resize(n);
    for (size_t i = 0; i < n; ++i) {
        out.K[i] = k[ord[i]];
        for (size_t j = 0; j < n; ++j) out.W(i, j) = cur(ord[i], j).shifted(-k[ord[i]]);
    }

    ExactPoly du = out.U.det(), dw = out.W.det();
    int ksum = 0;
    for (int ki : out.K) ksum += ki;
    if (du.isZero() || du.low() != 0 || du.high() != 0 || dw.isZero() || dw.low() != 0 ||
        dw.high() != 0 || ksum != m || matHigh(out.W) > 0)
        throw std::logic_error("sauvageFactorize: postcondition failed");
    ExactPolyMatrix um = out.U * M;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!(um(i, j) == out.W(i, j).shifted(out.K[i])))
                throw std::logic_error("sauvageFactorize: reconstruction failed");
    return out;
}

// ---- norm reduction ----

int ReductionState::normD() const {
    int s = 0;
    for (int d : D) s += std::abs(d);
    return s;
}

void checkNonCongruent(SystemKind kind, const ExactComplex& q,
                       const std::vector<ExactComplex>& roots) {
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (roots[i] == roots[j])
                throw ProgressImpossible("determinant roots are not distinct");
            if (kind == SystemKind::difference) {
                ExactComplex d = roots[i] - roots[j];
                if (sgn(d.im) == 0 && d.re.get_den() == 1)
                    throw ProgressImpossible("determinant roots differ by an integer");
            } else {
                if (roots[i].isZero() || roots[j].isZero()) continue;
                ExactComplex ratio = roots[i] / roots[j];
                ExactComplex p(1);
                for (int e = 1; e <= 64; ++e) {
                    p *= q;
                    if (ratio == p || ratio * p == ExactComplex(1))
                        throw ProgressImpossible(
                            "determinant roots differ by an integer power of q");
                }
            }
        }
}

namespace {

ReductionState reduceStepAt(const ReductionState& st, size_t ri,
                            const std::vector<ExactComplex>& v, size_t p, bool rowCase,
                            GaugeLog* log) {
    size_t n = st.Q.rows();
    bool qkind = st.kind == SystemKind::qdifference;
    const ExactComplex alpha = st.roots[ri];
    ExactMatrix h = ExactMatrix::identity(n);
    if (rowCase) {
        for (size_t j = 0; j < n; ++j)
            if (j != p && !v[j].isZero()) h(p, j) = v[j] / v[p];
    } else {
        for (size_t i = 0; i < n; ++i)
            if (i != p && !v[i].isZero()) h(i, p) = v[i] / v[p];
    }
    // h = I + N with N^2 = 0
    ExactMatrix hinv = ExactComplex(2) * ExactMatrix::identity(n) - h;

    ExactPolyMatrix x =
        rowCase ? constMat(h) * st.Q * constMat(hinv) : constMat(hinv) * st.Q * constMat(h);
    ExactComplex moved = qkind ? (rowCase ? st.q * alpha : alpha / st.q)
                               : (rowCase ? alpha + ExactComplex(1) : alpha - ExactComplex(1));
    if (rowCase) {
        ExactComplex invfac = qkind ? ExactComplex(1) / st.q : ExactComplex(1);
        for (size_t j = 0; j < n; ++j) x(p, j) = invfac * x(p, j).divByLinear(alpha);
        ExactPoly ell = ExactPoly::z() - ExactPoly(moved);
        for (size_t i = 0; i < n; ++i) x(i, p) = x(i, p) * ell;
    } else {
        for (size_t i = 0; i < n; ++i) x(i, p) = x(i, p).divByLinear(alpha);
        ExactPoly ell;  // the linear factor advanced by the shift
        if (qkind) {
            ell.setCoeff(1, st.q);
            ell.setCoeff(0, -alpha);
        } else {
            ell.setCoeff(1, ExactComplex(1));
            ell.setCoeff(0, ExactComplex(1) - alpha);
        }
        for (size_t j = 0; j < n; ++j) x(p, j) = x(p, j) * ell;
    }

    std::vector<int> dn = st.D;
    dn[p] += rowCase ? 1 : -1;
    std::vector<size_t> ord(n);
    std::iota(ord.begin(), ord.end(), size_t(0));
    std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return dn[a] > dn[b]; });
    std::vector<int> ds(n);
    for (size_t i = 0; i < n; ++i) ds[i] = dn[ord[i]];
    x = x.permuteRows(ord).permuteCols(ord);

    if (log) {
        Matrix<RatFunc> m(n, n);
        if (rowCase) {
            // (z - moved)^{D_p^-} H
            ExactPoly lin = ExactPoly::z() - ExactPoly(moved);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!h(i, j).isZero())
                        m(i, j) = (i == p) ? RatFunc(ExactPoly(h(i, j)), lin)
                                           : RatFunc(ExactPoly(h(i, j)));
        } else {
            // (z - alpha)^{D_p^+} H^{-1}
            ExactPoly lin = ExactPoly::z() - ExactPoly(alpha);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!hinv(i, j).isZero())
                        m(i, j) = (i == p) ? RatFunc(lin * ExactPoly(hinv(i, j)))
                                           : RatFunc(ExactPoly(hinv(i, j)));
        }
        log->push(rowCase ? "reduce-row" : "reduce-col", std::move(m));
        if (ord != identityPerm(n)) log->push("permutation", permGauge(ord));
    }

    ReductionState out = st;
    out.Q = std::move(x);
    out.D = std::move(ds);
    out.roots[ri] = moved;
    if (out.normD() != st.normD() - 1)
        throw std::logic_error("reduceNormStep: norm did not drop by one");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const ExactPoly& pij = out.Q(i, j);
            if (pij.isZero()) continue;
            if (pij.low() < 0 || pij.high() > out.topDeg + out.D[j] - out.D[i])
                throw std::logic_error("reduceNormStep: degree bound violated");
        }
    return out;
}

}  // namespace

ReductionState reduceNormStep(const ReductionState& st, GaugeLog* log) {
    if (st.normD() == 0) throw std::invalid_argument("reduceNormStep: D is already zero");
    checkNonCongruent(st.kind, st.q, st.roots);
    bool rowCase = false;
    for (int d : st.D)
        if (d < 0) rowCase = true;
    // smallest |alpha| first, then lexicographic, for a reproducible log
    std::vector<size_t> order(st.roots.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        mpq_class na = normSq(st.roots[a]), nb = normSq(st.roots[b]);
        if (na != nb) return na < nb;
        if (st.roots[a].re != st.roots[b].re) return st.roots[a].re < st.roots[b].re;
        return st.roots[a].im < st.roots[b].im;
    });
    for (size_t ri : order) {
        ExactMatrix qa = evalMat(st.Q, st.roots[ri]);
        std::vector<ExactComplex> v = rowCase ? leftKernelVector(qa) : kernelVector(qa);
        if (v.empty()) throw std::logic_error("reduceNormStep: catalog root is not a root");
        size_t pick = st.Q.rows();
        for (size_t i = 0; i < v.size(); ++i)
            if (!v[i].isZero() && (rowCase || pick == st.Q.rows())) pick = i;
        if (rowCase) {
            if (st.D[pick] >= 0) continue;
        } else {
            if (st.D[pick] <= 0) continue;
        }
        return reduceStepAt(st, ri, v, pick, rowCase, log);
    }
    throw ProgressImpossible(
        "no root admits a suitable kernel combination; the non-congruence or simple-zero "
        "hypotheses are violated");
}

// ---- the full pipeline ----

namespace {

struct SplitResult {
    ExactPolyMatrix U, W;
    std::vector<int> D;  // descending
};

/// Sauvage split of the accumulated shift gauge, reordered so that
/// U M^{-1} = z^{-D} W with D descending.
SplitResult splitGauge(const ExactPolyMatrix& mtot) {
    size_t n = mtot.rows();
    SauvageFactorization sf = sauvageFactorize(inverseMonomialDet(mtot));
    std::vector<size_t> rev(n);
    for (size_t i = 0; i < n; ++i) rev[i] = n - 1 - i;
    SplitResult out;
    out.U = sf.U.permuteRows(rev);
    out.W = sf.W.permuteRows(rev);
    out.D.resize(n);
    for (size_t i = 0; i < n; ++i) out.D[i] = -sf.K[n - 1 - i];
    return out;
}

}  // namespace

NormalizeResult normalizeSystem(const QDifferenceSystem& s, const std::vector<int>& targets) {
    if (targets.size() != s.n) throw std::invalid_argument("normalizeSystem: targets length");
    NormalizeResult res;
    bool trivial = true;
    for (int t : targets)
        if (t != 0) trivial = false;
    if (trivial) {
        res.Q = s.Q;
        return res;
    }
    if (s.low < 0)
        throw std::invalid_argument("normalizeSystem: the zero-side system must be polynomial");
    size_t n = s.n;
    QDifferenceSystem s1 = normalizeLeading(s, &res.log);
    std::vector<ExactComplex> dvals(n);
    for (size_t i = 0; i < n; ++i) dvals[i] = coeffMat(s1.Q, s1.mu)(i, i);

    // build the shifted (infinity-good) partner; only its gauge survives
    GaugeLog shiftLog;
    QDifferenceSystem cur = s1;
    for (size_t k = 0; k < n; ++k)
        for (int c = 0; c < std::abs(targets[k]); ++c)
            cur = shiftConstant(cur, k, targets[k] > 0 ? -1 : 1, &shiftLog);

    SplitResult sp = splitGauge(polyMat(shiftLog.total(n)));
    ExactPolyMatrix qt = scaleArgMat(sp.U, s.q) * s1.Q * inverseConstDet(sp.U);
    if (matLow(qt) < 0) throw std::logic_error("normalizeSystem: zero side not polynomial");
    // both sides must be connected by (qz)^D ... z^{-D}
    ExactPolyMatrix lhs = scaleArgMat(sp.W, s.q) * cur.Q * inverseConstDet(sp.W);
    ExactPolyMatrix rhs(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            rhs(i, j) = (pow(s.q, long(sp.D[i])) * qt(i, j)).shifted(sp.D[i] - sp.D[j]);
    if (!(lhs == rhs)) throw std::logic_error("normalizeSystem: side connection failed");
    res.log.push("sauvage", ratMat(sp.U));

    ReductionState st{SystemKind::qdifference, s.q,
                      s1.mu,                   qt,
                      sp.D,                    exactRoots(s1.Q.det())};
    checkNonCongruent(st.kind, st.q, st.roots);
    int norm0 = st.normD();
    res.normTrajectory.push_back(norm0);
    for (int i = 0; i < norm0 && st.normD() > 0; ++i) {
        st = reduceNormStep(st, &res.log);
        res.normTrajectory.push_back(st.normD());
    }
    if (st.normD() != 0)
        throw PipelineDiverged("norm reduction exceeded the initial ||D||_1 step budget");

    std::vector<ExactComplex> expect(n);
    for (size_t i = 0; i < n; ++i) expect[i] = dvals[i] * pow(s.q, long(targets[i]));
    res.Q = finalizeTop(st.Q, s1.mu, expect, res.log, "normalizeSystem");
    return res;
}

NormalizeResult normalizeSystem(const DifferenceSystem& s, const std::vector<int>& targets) {
    if (targets.size() != s.n) throw std::invalid_argument("normalizeSystem: targets length");
    NormalizeResult res;
    bool trivial = true;
    for (int t : targets)
        if (t != 0) trivial = false;
    if (trivial) {
        res.Q = s.A;
        return res;
    }
    size_t n = s.n;
    std::vector<ExactComplex> dIn = diffExponents(s);

    GaugeLog shiftLog;
    RationalDiffSystem cur = toRational(s);
    for (size_t k = 0; k < n; ++k)
        for (int c = 0; c < std::abs(targets[k]); ++c)
            cur = shiftConstant(cur, k, targets[k] > 0 ? -1 : 1, &shiftLog);

    ExactComplex one(1);
    SplitResult sp = splitGauge(polyMat(shiftLog.total(n)));
    ExactPolyMatrix at = shiftArgMat(sp.U, one) * s.A * inverseConstDet(sp.U);
    if (matLow(at) < 0) throw std::logic_error("normalizeSystem: zero side not polynomial");
    // side connection, in rational arithmetic: poles at shifted points are fine
    Matrix<RatFunc> lhs = shiftArgRat(SystemKind::difference, one, ratMat(sp.W)) * cur.A *
                          ratMat(inverseConstDet(sp.W));
    Matrix<RatFunc> rhs(n, n);
    RatFunc zp1(ExactPoly::z() + ExactPoly::one());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            RatFunc f(at(i, j).shifted(-sp.D[j]));
            for (int c = 0; c < std::abs(sp.D[i]); ++c)
                f = sp.D[i] > 0 ? f * zp1 : f / zp1;
            rhs(i, j) = f;
        }
    if (!(lhs == rhs)) throw std::logic_error("normalizeSystem: side connection failed");
    res.log.push("sauvage", ratMat(sp.U));

    ReductionState st{SystemKind::difference, one, s.r, at, sp.D, exactRoots(s.A.det())};
    checkNonCongruent(st.kind, st.q, st.roots);
    int norm0 = st.normD();
    res.normTrajectory.push_back(norm0);
    for (int i = 0; i < norm0 && st.normD() > 0; ++i) {
        st = reduceNormStep(st, &res.log);
        res.normTrajectory.push_back(st.normD());
    }
    if (st.normD() != 0)
        throw PipelineDiverged("norm reduction exceeded the initial ||D||_1 step budget");

    res.Q = finalizeTop(st.Q, s.r, s.rho, res.log, "normalizeSystem");
    ExactMatrix sub = coeffMat(res.Q, s.r - 1);
    for (size_t k = 0; k < n; ++k)
        if (!(sub(k, k) / s.rho[k] == dIn[k] - ExactComplex(targets[k])))
            throw NormalizationLost("normalizeSystem: output exponents do not match");
    return res;
}

}  // namespace dqs
