#ifndef DQS_ROOTS_HPP
#define DQS_ROOTS_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "dqs/laurent.hpp"

namespace dqs {

/// Numeric roots of an ordinary polynomial (Aberth-Ehrlich with a Newton
/// polish). Returns all deg(p) roots; the working precision is twice the
/// requested one so the results are good to roughly `prec` bits.
inline std::vector<BigComplex> numericRoots(const NumPoly& p, mpfr_prec_t prec) {
    if (p.isZero()) throw std::domain_error("numericRoots: zero polynomial");
    if (!p.isPolynomial()) throw std::invalid_argument("numericRoots: ordinary polynomial");
    mpfr_prec_t wp = 2 * prec + 32;
    int n = p.high();
    std::vector<BigComplex> c(size_t(n) + 1, BigComplex(wp));
    for (const auto& [e, v] : p.coeffs()) c[size_t(e)] = BigComplex(BigFloat(wp) + v.re, BigFloat(wp) + v.im);
    std::vector<BigComplex> roots;
    // strip roots at the origin
    while (n > 0 && c[0].isZero()) {
        roots.emplace_back(wp);
        c.erase(c.begin());
        --n;
    }
    if (n == 0) return roots;

    NumPoly q;
    for (int e = 0; e <= n; ++e) q.setCoeff(e, c[size_t(e)]);
    NumPoly dq = q.derivative();

    // Cauchy-style radius
    BigFloat radius(1.0, wp);
    for (int e = 0; e < n; ++e) {
        BigFloat t = abs(c[size_t(e)] / c[size_t(n)]);
        if (t > radius) radius = t;
    }
    radius += BigFloat(1.0, wp);

    std::vector<BigComplex> z;
    z.assign(size_t(n), BigComplex(wp));
    BigFloat pi = BigFloat::pi(wp);
    for (int i = 0; i < n; ++i) {
        // irregular angles so no two starts are symmetric about the axes
        BigFloat a = (BigFloat(2.0, wp) * pi * BigFloat(long(i), wp)) / BigFloat(long(n), wp) +
                     BigFloat(0.35813, wp);
        z[size_t(i)] = BigComplex(radius * cos(a), radius * sin(a));
    }

    BigFloat tol = BigFloat::pow2(-long(wp) + 8, wp) * radius;
    for (int iter = 0; iter < 600; ++iter) {
        BigFloat worst(wp);
        for (int i = 0; i < n; ++i) {
            BigComplex pv = q.eval(z[size_t(i)]);
            BigComplex dv = dq.eval(z[size_t(i)]);
            if (dv.isZero()) {
                z[size_t(i)] += BigComplex(tol, tol);
                worst = radius;
                continue;
            }
            BigComplex w = pv / dv;
            BigComplex s(wp);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                BigComplex d = z[size_t(i)] - z[size_t(j)];
                if (d.isZero()) d = BigComplex(tol, BigFloat(wp));
                s += BigComplex::one(wp) / d;
            }
            BigComplex denom = BigComplex::one(wp) - w * s;
            BigComplex step = denom.isZero() ? w : w / denom;
            z[size_t(i)] -= step;
            BigFloat m = abs(step);
            if (m > worst) worst = m;
        }
        if (worst < tol) break;
    }
    // Newton polish
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k) {
            BigComplex dv = dq.eval(z[size_t(i)]);
            if (dv.isZero()) break;
            z[size_t(i)] -= q.eval(z[size_t(i)]) / dv;
        }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

/// Best rational with |x - p/q| <= tol, via continued fractions.
inline mpq_class rationalReconstruct(const BigFloat& x, const BigFloat& tol) {
    mpq_class v = x.toRational();
    mpq_class a = v;
    mpz_class p0 = 0, p1 = 1, q0 = 1, q1 = 0;  // convergents p1/q1
    for (int k = 0; k < 256; ++k) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
        mpz_class p2 = fl * p1 + p0, q2 = fl * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        mpq_class approx(p1, q1);
        approx.canonicalize();
        BigFloat err = abs(BigFloat(mpq_class(v - approx), x.prec()));
        if (err <= tol) return approx;
        mpq_class frac = a - mpq_class(fl);
        if (sgn(frac) == 0) return approx;
        a = 1 / frac;
    }
    return v;
}

/// Gaussian-rational roots of an exact polynomial, verified exactly.
/// Throws if any numeric root fails to reconstruct to an exact zero.
inline std::vector<ExactComplex> exactRoots(const ExactPoly& p, mpfr_prec_t prec = 256) {
    if (p.isZero()) throw std::domain_error("exactRoots: zero polynomial");
    int lo = std::max(p.low(), 0);
    ExactPoly q = p.shifted(-p.low());
    std::vector<ExactComplex> out(size_t(lo), ExactComplex(0));
    if (q.high() == 0) return out;
    NumPoly np = promote(q, prec);
    std::vector<BigComplex> nr = numericRoots(np, prec);
    BigFloat tol = BigFloat::pow2(-long(prec) / 2, prec);
    ExactPoly rem = q;
    for (const auto& r : nr) {
        ExactComplex cand(rationalReconstruct(r.re, tol), rationalReconstruct(r.im, tol));
        // deflated candidates can repeat; verify against the original
        bool known = false;
        for (size_t i = size_t(lo); i < out.size(); ++i)
            if (out[i] == cand) known = true;
        if (!known && !q.eval(cand).isZero())
            throw std::domain_error("exactRoots: irrational root, exact pipeline unavailable");
        out.push_back(cand);
    }
    // multiplicity check: full deflation must succeed
    for (size_t i = size_t(lo); i < out.size(); ++i) rem = rem.divByLinear(out[i]);
    if (rem.high() != 0 || rem.low() != 0)
        throw std::logic_error("exactRoots: deflation mismatch");
    return out;
}

/// Sum of all roots of p (with multiplicity), by Vieta.
inline ExactComplex rootSum(const ExactPoly& p) {
    if (p.isZero()) throw std::domain_error("rootSum: zero polynomial");
    int hi = p.high();
    if (hi == p.low()) return ExactComplex(0);
    return -(p.coeff(hi - 1) / p.coeff(hi));
}

}  // namespace dqs

#endif
