#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodcert/roots.hpp"

using namespace prodcert;

namespace {

// Vieta check: sum of roots = -c_{d-1}/c_d, product = (-1)^d c_0/c_d.
void check_vieta(const IntPolynomial& p, const std::vector<RootBox>& roots, long prec) {
    ComplexInterval sum = ComplexInterval::from_rat(Rat(0), Rat(0), prec);
    ComplexInterval prod = ComplexInterval::from_rat(Rat(1), Rat(0), prec);
    for (const auto& r : roots) {
        sum = cv_add(sum, r.box, prec);
        prod = cv_mul(prod, r.box, prec);
    }
    long d = p.degree();
    Rat s = -Rat(p.coeffs()[static_cast<size_t>(d - 1)]) / Rat(p.leading());
    Rat q = Rat(p.constant_term()) / Rat(p.leading());
    if (d % 2 == 1) q = -q;
    CHECK(sum.re.contains(s));
    CHECK(sum.im.contains(Rat(0)));
    CHECK(prod.re.contains(q));
    CHECK(prod.im.contains(Rat(0)));
}

}  // namespace

TEST_CASE("golden ratio roots against the radical oracle") {
    IntPolynomial phi({Int(-1), Int(-1), Int(1)});
    auto roots = isolate_roots(phi, 128);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real);
    CHECK(roots[1].real);
    // oracle: (1 +- sqrt 5)/2 via interval sqrt
    RealInterval s5 = iv_sqrt(RealInterval(5L, 192), 192);
    RealInterval pos = iv_mul(iv_add(RealInterval(1L, 192), s5, 192), RealInterval(Rat(1, 2), 192), 192);
    RealInterval neg = iv_mul(iv_sub(RealInterval(1L, 192), s5, 192), RealInterval(Rat(1, 2), 192), 192);
    int matched = 0;
    for (const auto& r : roots) {
        if (r.box.re.overlaps(pos)) ++matched;
        if (r.box.re.overlaps(neg)) ++matched;
        CHECK(r.box.width_below_2exp(-128));
    }
    CHECK(matched == 2);
    check_vieta(phi, roots, 192);
}

TEST_CASE("supergolden ratio roots: one real, complex pair of modulus psi^{-1/2}") {
    IntPolynomial psi({Int(-1), Int(0), Int(-1), Int(1)});
    auto roots = isolate_roots(psi, 160);
    REQUIRE(roots.size() == 3);
    int real_count = 0;
    RealInterval psival(0L, 256);
    for (const auto& r : roots)
        if (r.real) {
            ++real_count;
            psival = r.box.re;
        }
    CHECK(real_count == 1);
    CHECK(psival.contains(Rat(14656, 10000)) == false);  // tighter than 4 digits
    CHECK(psival.overlaps(RealInterval(Rat(146557, 100000), Rat(146558, 100000), 64)));

    // |norm| = 1 so the complex pair has modulus psi^{-1/2}
    RealInterval inv_sqrt = iv_div(RealInterval(1L, 256), iv_sqrt(psival, 256), 256);
    for (const auto& r : roots) {
        if (r.real) continue;
        RealInterval m = cv_abs(r.box, 256);
        CHECK(m.overlaps(inv_sqrt));
    }
    check_vieta(psi, roots, 256);
}

TEST_CASE("x^2 + 1 has a purely imaginary certified pair") {
    IntPolynomial p({Int(1), Int(0), Int(1)});
    auto roots = isolate_roots(p, 100);
    REQUIRE(roots.size() == 2);
    for (const auto& r : roots) {
        CHECK(!r.real);
        CHECK(r.box.re.contains(Rat(0)));
        RealInterval ai = iv_abs(r.box.im);
        CHECK(ai.contains(Rat(1)));
    }
    // boxes exclude the real axis
    CHECK(!roots[0].box.im.contains(Rat(0)));
}

TEST_CASE("degree one and rational roots") {
    auto roots = isolate_roots(IntPolynomial({Int(-3), Int(1)}), 64);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].real);
    CHECK(roots[0].box.re.contains(Rat(3)));
    CHECK(roots[0].box.width_below_2exp(-64));

    auto half = isolate_roots(IntPolynomial({Int(-1), Int(2)}), 64);
    CHECK(half[0].box.re.contains(Rat(1, 2)));
}

TEST_CASE("refinement nests and keeps the selected root") {
    IntPolynomial p({Int(-2), Int(0), Int(0), Int(1)});  // x^3 - 2
    auto coarse = isolate_roots(p, 64);
    auto fine = isolate_roots(p, 512);
    REQUIRE(coarse.size() == 3);
    REQUIRE(fine.size() == 3);
    // every fine box lies inside exactly one coarse box
    for (const auto& f : fine) {
        int inside = 0;
        for (const auto& c : coarse)
            if (c.box.contains(f.box)) ++inside;
        CHECK(inside == 1);
        CHECK(f.box.width_below_2exp(-512));
    }
}

TEST_CASE("random squarefree polynomials isolate with certified boxes") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> coeff(-100, 100);
    std::uniform_int_distribution<int> deg(2, 6);
    int done = 0;
    while (done < 40) {
        long d = deg(rng);
        std::vector<Int> c(static_cast<size_t>(d) + 1);
        for (auto& x : c) x = Int(coeff(rng));
        if (c.back() == 0) continue;
        IntPolynomial p(std::move(c));
        if (p.degree() < 2 || !p.is_squarefree()) continue;
        auto roots = isolate_roots(p, 80);
        REQUIRE(roots.size() == static_cast<size_t>(p.degree()));
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = i + 1; j < roots.size(); ++j)
                CHECK(roots_detail::boxes_disjoint(roots[i].box, roots[j].box));
        check_vieta(p, roots, 160);
        ++done;
    }
}
