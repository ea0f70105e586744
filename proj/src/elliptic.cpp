#include "dqs/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace dqs {

BigComplex csin(const BigComplex& v) {
    mpfr_prec_t p = v.prec();
    BigComplex iv(-v.im, v.re);
    BigComplex e1 = exp(iv), e2 = exp(-iv);
    BigComplex d = e1 - e2;
    // divide by 2i
    return {d.im / BigFloat(2.0, p), -d.re / BigFloat(2.0, p)};
}

namespace {

// theta1(v) = 2 sum_{n>=0} (-1)^n p^{(n+1/2)^2} sin((2n+1) v), p = e^{i pi tau}
// and the v-derivatives at 0 needed for eta. Terms decay like |p|^{n^2}.
struct ThetaSums {
    BigComplex d1, d3;  // theta1'(0), theta1'''(0)
};

BigComplex nomePower(const BigComplex& ipitau, long n) {
    // p^{(n+1/2)^2} = exp(i pi tau (2n+1)^2 / 4)
    mpfr_prec_t pr = ipitau.prec();
    long m = 2 * n + 1;
    return exp(ipitau * BigComplex(BigFloat(m * m, pr) / BigFloat(4L, pr)));
}

long termCount(const BigComplex& ipitau, mpfr_prec_t prec) {
    // stop once |p|^{(n+1/2)^2} drops below 2^{-prec-64}
    double logAbsP = ipitau.re.toDouble();  // ln|p| < 0
    if (logAbsP >= 0) throw std::domain_error("elliptic: nome not inside unit disk");
    double target = -(double(prec) + 64.0) * 0.6931471805599453;
    double n = std::sqrt(target / logAbsP);
    return long(n) + 4;
}

}  // namespace

BigComplex theta1(const BigComplex& v, const BigComplex& tau) {
    mpfr_prec_t pr = std::max(v.prec(), tau.prec());
    BigComplex ipitau = BigComplex::i(pr) * BigComplex(BigFloat::pi(pr)) * tau;
    long N = termCount(ipitau, pr);
    BigComplex s(pr);
    for (long n = N; n >= 0; --n) {
        BigComplex term = nomePower(ipitau, n) * csin(BigComplex(BigFloat(2 * n + 1, pr)) * v);
        s = (n % 2 == 0) ? s + term : s - term;
    }
    return BigComplex(BigFloat(2L, pr)) * s;
}

PeriodLattice latticeConstants(const BigComplex& q, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    BigComplex qw = BigComplex(BigFloat(wp) + q.re, BigFloat(wp) + q.im);
    BigComplex lnq = log(qw);
    if (!(lnq.re > BigFloat(0.0, wp))) throw std::domain_error("latticeConstants: need |q| > 1");
    BigComplex pi2i = BigComplex::pi2i(wp);
    BigComplex omegaPrime = pi2i / lnq;
    // tau = omega', nome p = e^{i pi tau}; Im tau > 0 since ln|q| > 0
    BigComplex ipitau = BigComplex::i(wp) * BigComplex(BigFloat::pi(wp)) * omegaPrime;
    long N = termCount(ipitau, wp);
    BigComplex d1(wp), d3(wp);
    for (long n = N; n >= 0; --n) {
        BigComplex p = nomePower(ipitau, n);
        long m = 2 * n + 1;
        BigComplex t1 = BigComplex(BigFloat(m, wp)) * p;
        BigComplex t3 = BigComplex(BigFloat(m, wp) * BigFloat(m, wp) * BigFloat(m, wp)) * p;
        if (n % 2 == 0) {
            d1 += t1;
            d3 -= t3;
        } else {
            d1 -= t1;
            d3 += t3;
        }
    }
    // theta1'(0) = 2 d1, theta1'''(0) = 2 d3 (d3 already carries the minus sign)
    BigFloat pi = BigFloat::pi(wp);
    BigComplex pi2 = BigComplex(pi * pi);
    BigComplex eta = -(pi2 / BigComplex(BigFloat(3L, wp))) * (d3 / d1);
    BigComplex etaPrime = eta * omegaPrime - pi2i;
    return PeriodLattice{prec, qw, lnq, omegaPrime, eta, etaPrime};
}

BigComplex sigmaEval(const BigComplex& t, const PeriodLattice& lat) {
    mpfr_prec_t wp = lat.lnq.prec();
    BigComplex tw = BigComplex(BigFloat(wp) + t.re, BigFloat(wp) + t.im);
    BigFloat pi = BigFloat::pi(wp);
    BigComplex ipitau = BigComplex::i(wp) * BigComplex(pi) * lat.omegaPrime;
    long N = termCount(ipitau, wp);
    BigComplex d1(wp);
    for (long n = N; n >= 0; --n) {
        BigComplex term = BigComplex(BigFloat(2 * n + 1, wp)) * nomePower(ipitau, n);
        d1 = (n % 2 == 0) ? d1 + term : d1 - term;
    }
    BigComplex theta = theta1(BigComplex(pi) * tw, lat.omegaPrime);
    BigComplex half(0.5, 0.0, wp);
    BigComplex quad = exp(lat.eta * tw * tw * half);
    // sigma = e^{eta t^2/2} theta1(pi t) / (pi theta1'(0)); theta1'(0) = 2 d1
    return quad * theta / (BigComplex(pi) * BigComplex(BigFloat(2L, wp)) * d1);
}

}  // namespace dqs
