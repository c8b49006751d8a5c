#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodcert/complex_interval.hpp"
#include "prodcert/interval.hpp"

using namespace prodcert;

namespace {

Rat random_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-10000, 10000);
    std::uniform_int_distribution<long> den(1, 997);
    Rat r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("17/4") == Rat(17, 4));
    CHECK(parse_rational("-12.25") == Rat(-49, 4));
    CHECK(parse_rational("3") == Rat(3));
    CHECK(parse_rational("5e-3") == Rat(1, 200));
    CHECK(parse_rational("1.5e2") == Rat(150));
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK(rat_to_decimal_exact(Rat(3, 4)).value() == "0.75");
    CHECK(rat_to_decimal_exact(Rat(-3, 8)).value() == "-0.375");
    CHECK(!rat_to_decimal_exact(Rat(1, 3)).has_value());
}

TEST_CASE("interval arithmetic encloses exact rational arithmetic") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
        Rat a = random_rat(rng), b = random_rat(rng);
        RealInterval ia(a, 64), ib(b, 64);
        CHECK(iv_add(ia, ib, 64).contains(a + b));
        CHECK(iv_sub(ia, ib, 64).contains(a - b));
        CHECK(iv_mul(ia, ib, 64).contains(a * b));
        if (b != 0 && !ib.contains_zero()) CHECK(iv_div(ia, ib, 64).contains(a / b));
        CHECK(iv_sqr(ia, 64).contains(a * a));
        Rat absa = a < 0 ? -a : a;
        CHECK(iv_abs(ia).contains(absa));
    }
}

TEST_CASE("interval 1/3 stays enclosed under refinement") {
    Rat third(1, 3);
    RealInterval prev(third, 32);
    for (long prec : {64L, 128L, 256L, 1024L}) {
        RealInterval cur(third, prec);
        CHECK(prev.contains(cur));
        CHECK(cur.contains(third));
        CHECK(mpfr_cmp(cur.lo(), cur.hi()) < 0);  // 1/3 is not dyadic
        prev = cur;
    }
}

TEST_CASE("pow and log2 enclosures") {
    RealInterval two(2L, 128);
    RealInterval e = iv_log2(two, 128);
    CHECK(e.contains(Rat(1)));

    // 8^(2/3) = 4 must be inside the enclosure
    RealInterval eight(8L, 128);
    RealInterval r = iv_pow(eight, Rat(2, 3), 128);
    CHECK(r.contains(Rat(4)));
    CHECK(r.width_below_2exp(-100));

    // integer exponent path stays exact on dyadics
    RealInterval half(Rat(1, 2), 128);
    RealInterval h3 = iv_pow(half, Rat(3), 128);
    CHECK(h3.contains(Rat(1, 8)));
    CHECK(h3.width_below_2exp(-500));

    RealInterval neg = iv_pow(RealInterval(-3L, 64), Rat(2), 64);
    CHECK(neg.contains(Rat(9)));
}

TEST_CASE("three-valued comparisons") {
    RealInterval a(Rat(1), Rat(2), 64);
    RealInterval b(Rat(3), Rat(4), 64);
    RealInterval c(Rat(3, 2), Rat(5, 2), 64);
    CHECK(a.less_than(b) == Tri::True);
    CHECK(b.less_than(a) == Tri::False);
    CHECK(a.less_than(c) == Tri::Unknown);
    CHECK(a.greater_equal(Rat(1)) == Tri::True);
    CHECK(a.greater_equal(Rat(5)) == Tri::False);
    CHECK(a.not_equal(Rat(10)) == Tri::True);
    CHECK(a.not_equal(Rat(3, 2)) == Tri::Unknown);
}

TEST_CASE("decimal outward rounding brackets the value") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rat a = random_rat(rng);
        if (a == 0) continue;
        RealInterval ia(a, 96);
        auto [lo, hi] = outward_decimal(ia, 12);
        CHECK(lo.value() <= a);
        CHECK(a <= hi.value());
        CHECK(parse_rational(lo.str()) == lo.value());
        CHECK(parse_rational(hi.str()) == hi.value());
    }
}

TEST_CASE("complex interval products enclose gaussian rational products") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        Rat ar = random_rat(rng), ai = random_rat(rng);
        Rat br = random_rat(rng), bi = random_rat(rng);
        ComplexInterval a = ComplexInterval::from_rat(ar, ai, 64);
        ComplexInterval b = ComplexInterval::from_rat(br, bi, 64);
        ComplexInterval p = cv_mul(a, b, 64);
        CHECK(p.re.contains(ar * br - ai * bi));
        CHECK(p.im.contains(ar * bi + ai * br));
        // |ab|^2 = |a|^2 |b|^2
        RealInterval p2 = cv_abs2(p, 64);
        CHECK(p2.contains((ar * ar + ai * ai) * (br * br + bi * bi)));
    }
}

TEST_CASE("complex division inverts multiplication") {
    ComplexInterval a = ComplexInterval::from_rat(Rat(3), Rat(-2), 128);
    ComplexInterval b = ComplexInterval::from_rat(Rat(1, 2), Rat(5), 128);
    ComplexInterval q = cv_div(cv_mul(a, b, 128), b, 128);
    CHECK(q.re.contains(Rat(3)));
    CHECK(q.im.contains(Rat(-2)));
    CHECK_THROWS_AS(cv_inv(ComplexInterval::from_rat(Rat(0), Rat(0), 64), 64), DomainError);
}
