#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqs/polymat.hpp"
#include "dqs/roots.hpp"

using namespace dqs;

static ExactComplex ec(long re, long im = 0) { return ExactComplex(re, im); }

TEST_CASE("exact complex field") {
    ExactComplex a(mpq_class(1, 2), mpq_class(3));
    ExactComplex b(mpq_class(-2), mpq_class(1, 5));
    CHECK(a * b / b == a);
    CHECK((a - a).isZero());
    CHECK(pow(a, 3) == a * a * a);
    CHECK(pow(a, -2) * a * a == ec(1));
    CHECK(conj(a * b) == conj(a) * conj(b));
    CHECK(normSq(a) == a.re * a.re + a.im * a.im);
}

TEST_CASE("exact sqrt in Q(i)") {
    auto s = exactSqrt(ExactComplex(mpq_class(-7, 9), mpq_class(24, 9)));
    REQUIRE(s.has_value());
    CHECK(*s * *s == ExactComplex(mpq_class(-7, 9), mpq_class(24, 9)));
    CHECK(exactSqrt(ec(-4))->im == 2);
    CHECK(!exactSqrt(ec(2)).has_value());
    CHECK(!exactSqrt(ExactComplex(mpq_class(1), mpq_class(1))).has_value());
}

TEST_CASE("bigfloat precision propagation") {
    BigFloat a(1.0, 64), b(3.0, 256);
    CHECK((a / b).prec() == 256);
    BigFloat third = a / b;
    CHECK(abs(third * b - a) < BigFloat::pow2(-250, 256));
    CHECK(BigFloat("0.25", 128) == BigFloat(1.0, 128) / BigFloat(4.0, 128));
}

TEST_CASE("bigcomplex log/exp principal branch") {
    mpfr_prec_t p = 192;
    BigComplex z(-2.0, 0.5, p);
    BigComplex w = log(z);
    CHECK(abs(exp(w) - z) < BigFloat::pow2(-180, p));
    CHECK(w.im <= BigFloat::pi(p));
    CHECK(w.im > -BigFloat::pi(p));
    BigComplex minusOne(-1.0, 0.0, p);
    CHECK(abs(log(minusOne).im - BigFloat::pi(p)) < BigFloat::pow2(-180, p));
    BigComplex s = sqrt(BigComplex(0.0, -4.0, p));
    CHECK(abs(s * s - BigComplex(0.0, -4.0, p)) < BigFloat::pow2(-180, p));
}

TEST_CASE("laurent arithmetic and evaluation") {
    ExactPoly z = ExactPoly::z();
    ExactPoly p = z * z + ExactComplex(2) * z + ExactPoly(ec(0, 1), -1);  // z^2+2z+i/z
    CHECK(p.low() == -1);
    CHECK(p.high() == 2);
    ExactComplex at = p.eval(ec(2));
    CHECK(at == ec(8) + ExactComplex(mpq_class(0), mpq_class(1, 2)));
    CHECK((p - p).isZero());
    CHECK(p * ExactPoly::one() == p);
    CHECK(p.shifted(1).low() == 0);

    ExactPoly q = (z - ExactPoly(ec(3))) * (z + ExactPoly(ec(0, 1)));
    CHECK(q.divByLinear(ec(3)) == z + ExactPoly(ec(0, 1)));
    CHECK_THROWS_AS(q.divByLinear(ec(5)), std::domain_error);
    CHECK(q.derivative() == ExactComplex(2) * z + ExactPoly(ec(-3) + ec(0, 1)));
}

TEST_CASE("laurent substitutions") {
    ExactPoly z = ExactPoly::z();
    ExactPoly p = z * z * z - ExactComplex(4) * z + ExactPoly::one();
    ExactPoly sh = p.shiftArg(ec(2));
    for (long v : {-3L, 0L, 1L, 7L}) CHECK(sh.eval(ec(v)) == p.eval(ec(v + 2)));
    ExactPoly sc = p.scaleArg(ec(0, 1));
    CHECK(sc.eval(ec(2)) == p.eval(ec(0, 2)));
}

TEST_CASE("poly gcd and rational functions") {
    ExactPoly z = ExactPoly::z();
    ExactPoly a = (z - ExactPoly(ec(1))) * (z - ExactPoly(ec(2)));
    ExactPoly b = (z - ExactPoly(ec(2))) * (z + ExactPoly(ec(5)));
    ExactPoly g = polyGCD(a, b);
    CHECK(g == z - ExactPoly(ec(2)));
    RatFunc f(a, b);
    CHECK(f.num == z - ExactPoly(ec(1)));
    CHECK(f.den == z + ExactPoly(ec(5)));
    RatFunc sum = f + RatFunc(ExactPoly::one());
    CHECK(sum == RatFunc(a + b, b));
    CHECK(polyDivMod(a * b, a).first == b);
}

TEST_CASE("matrix det, inverse, kernel over Q(i)") {
    ExactMatrix m(3, 3);
    long vals[9] = {2, 1, 0, 1, 3, 1, 0, 1, 4};
    for (int i = 0; i < 9; ++i) m(size_t(i / 3), size_t(i % 3)) = ec(vals[i]);
    m(0, 2) = ec(0, 1);
    ExactComplex d = m.det();
    CHECK(!d.isZero());
    ExactMatrix inv = inverse(m);
    CHECK(m * inv == ExactMatrix::identity(3));

    // singular: row2 = row0 + row1
    ExactMatrix s(3, 3);
    for (size_t j = 0; j < 3; ++j) {
        s(0, j) = m(0, j);
        s(1, j) = m(1, j);
        s(2, j) = m(0, j) + m(1, j);
    }
    CHECK(s.det().isZero());
    auto k = leftKernelVector(s);
    REQUIRE(k.size() == 3);
    bool nonzero = false;
    for (auto& x : k) nonzero |= !x.isZero();
    CHECK(nonzero);
    for (size_t j = 0; j < 3; ++j) {
        ExactComplex acc;
        for (size_t i = 0; i < 3; ++i) acc += k[i] * s(i, j);
        CHECK(acc.isZero());
    }
    auto rk = kernelVector(s.transpose());
    CHECK(rk.size() == 3);
}

TEST_CASE("exact linear solve") {
    ExactMatrix m(2, 2);
    m(0, 0) = ec(1, 1);
    m(0, 1) = ec(2);
    m(1, 0) = ec(0);
    m(1, 1) = ec(3, -1);
    std::vector<ExactComplex> b{ec(5), ec(7, 2)};
    auto x = solve(m, b);
    auto mx = matVec(m, x);
    CHECK(mx[0] == b[0]);
    CHECK(mx[1] == b[1]);
}

TEST_CASE("poly matrix det matches scalar eval") {
    ExactPolyMatrix m(2, 2);
    ExactPoly z = ExactPoly::z();
    m(0, 0) = z + ExactPoly(ec(2));
    m(0, 1) = ExactPoly(ec(1));
    m(1, 0) = ExactPoly(ec(1));
    m(1, 1) = ec(0, 1) * z + ExactPoly(ec(0, 3));
    ExactPoly d = m.det();
    // spot check at several points
    for (long v : {0L, 1L, -2L, 5L}) {
        ExactMatrix mv = evalMat(m, ec(v));
        CHECK(mv.det() == d.eval(ec(v)));
    }
}

TEST_CASE("monomial-determinant inverse stays Laurent") {
    ExactPolyMatrix m(2, 2);
    ExactPoly z = ExactPoly::z();
    m(0, 0) = z;
    m(0, 1) = ExactPoly(ec(1));
    m(1, 0) = ExactPoly();
    m(1, 1) = ExactPoly(ec(2), -1);  // det = 2, a unit
    ExactPolyMatrix inv = inverseMonomialDet(m);
    ExactPolyMatrix id = constMat(ExactMatrix::identity(2));
    CHECK(m * inv == id);
    CHECK(inv * m == id);
}

TEST_CASE("numeric roots of a cubic") {
    mpfr_prec_t p = 256;
    // (z-1)(z-2i)(z+3) = z^3 + (2-2i) z^2 - (3+4i) z + 6i
    ExactPoly z = ExactPoly::z();
    ExactPoly poly = (z - ExactPoly(ec(1))) * (z - ExactPoly(ec(0, 2))) * (z + ExactPoly(ec(3)));
    auto rts = numericRoots(promote(poly, p), p);
    REQUIRE(rts.size() == 3);
    BigFloat tol = BigFloat::pow2(-200, p);
    int hit = 0;
    for (auto& r : rts) {
        for (auto target : {ec(1), ec(0, 2), ec(-3)})
            if (abs(r - target.toBig(p)) < tol) ++hit;
    }
    CHECK(hit == 3);
}

TEST_CASE("exact root extraction with multiplicity") {
    ExactPoly z = ExactPoly::z();
    ExactComplex half(mpq_class(1, 2));
    ExactPoly poly = (z - ExactPoly(half)) * (z - ExactPoly(half)) * (z - ExactPoly(ec(0, 3)));
    auto rts = exactRoots(poly);
    REQUIRE(rts.size() == 3);
    int halves = 0, threes = 0;
    for (auto& r : rts) {
        if (r == ExactComplex(half)) ++halves;
        if (r == ec(0, 3)) ++threes;
    }
    CHECK(halves == 2);
    CHECK(threes == 1);
    CHECK(rootSum(poly) == ec(1) + ec(0, 3));

    ExactPoly irr = z * z - ExactPoly(ec(2));
    CHECK_THROWS_AS(exactRoots(irr), std::domain_error);
}

TEST_CASE("rational reconstruction") {
    mpfr_prec_t p = 256;
    BigFloat x(mpq_class(22, 7), p);
    mpq_class r = rationalReconstruct(x, BigFloat::pow2(-128, p));
    CHECK(r == mpq_class(22, 7));
    BigFloat y = BigFloat(1.0, p) / BigFloat(3.0, p);
    CHECK(rationalReconstruct(y, BigFloat::pow2(-100, p)) == mpq_class(1, 3));
}
