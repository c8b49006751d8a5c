#include <catch2/catch_amalgamated.hpp>

#include "prodcert/modular.hpp"
#include "prodcert/intpoly.hpp"

using namespace prodcert;

TEST_CASE("IntPolynomial normalization") {
    IntPolynomial p({Int(-2), Int(0), Int(4)});  // content 2
    CHECK(p.degree() == 2);
    CHECK(p.coeffs() == std::vector<Int>{Int(-1), Int(0), Int(2)});

    IntPolynomial q({Int(3), Int(-6)});  // lc must end positive
    CHECK(q.coeffs() == std::vector<Int>{Int(-1), Int(2)});

    CHECK_THROWS_AS(IntPolynomial(std::vector<Int>{Int(0)}), InputError);
}

TEST_CASE("linear minimal polynomials") {
    IntPolynomial half = IntPolynomial::linear_for(Rat(1, 2));
    CHECK(half.coeffs() == std::vector<Int>{Int(-1), Int(2)});
    CHECK(half.eval(Rat(1, 2)) == 0);
}

TEST_CASE("root scaling gives the minimal polynomial of a/k") {
    // phi: x^2 - x - 1; phi/3 has primitive minimal polynomial 9x^2 - 3x - 1
    IntPolynomial phi({Int(-1), Int(-1), Int(1)});
    IntPolynomial scaled = phi.roots_scaled_down(Int(3));
    CHECK(scaled.coeffs() == std::vector<Int>{Int(-1), Int(-3), Int(9)});
}

TEST_CASE("reversal gives the minimal polynomial of 1/a") {
    IntPolynomial p({Int(-1), Int(-1), Int(1)});
    IntPolynomial r = p.reversed();
    // roots of x^2 + x - 1 are 1/phi and -phi
    CHECK(r.coeffs() == std::vector<Int>{Int(-1), Int(1), Int(1)});
    CHECK_THROWS_AS(IntPolynomial({Int(0), Int(1)}).reversed(), DomainError);
}

TEST_CASE("QPoly divmod and gcd") {
    // (x^2 - 1) = (x - 1)(x + 1)
    QPoly a({Rat(-1), Rat(0), Rat(1)});
    QPoly b({Rat(-1), Rat(1)});
    auto [q, r] = divmod(a, b);
    CHECK(r.is_zero());
    CHECK(q.c == std::vector<Rat>{Rat(1), Rat(1)});

    QPoly g = poly_gcd(a, b);
    CHECK(g.c == std::vector<Rat>{Rat(-1), Rat(1)});

    auto [gg, u, v] = poly_xgcd(a, QPoly({Rat(1), Rat(1)}));  // gcd(x^2-1, x+1) = x+1
    CHECK(gg.degree() == 1);
    CHECK((u * a + v * QPoly({Rat(1), Rat(1)})) == gg);
}

TEST_CASE("xgcd certifies inverses modulo an irreducible polynomial") {
    QPoly minpoly({Rat(-1), Rat(-1), Rat(1)});  // x^2 - x - 1
    QPoly x({Rat(0), Rat(1)});
    auto [g, u, v] = poly_xgcd(x, minpoly);
    CHECK(g.degree() == 0);
    // u * x = 1 mod minpoly, i.e. u represents 1/phi = phi - 1
    QPoly prod = divmod(u * x, minpoly).second;
    CHECK(prod.c == std::vector<Rat>{Rat(1)});
}

TEST_CASE("squarefree part strips repeated factors") {
    // (x-1)^2 (x+2)
    QPoly p({Rat(2), Rat(-3), Rat(0), Rat(1)});
    QPoly s = squarefree_part(p);
    CHECK(s.degree() == 2);
    CHECK(divmod(p, s).second.is_zero());
    CHECK(poly_gcd(s, s.derivative()).degree() == 0);
}

TEST_CASE("interval evaluation encloses rational evaluation") {
    IntPolynomial p({Int(3), Int(-7), Int(0), Int(2)});
    Rat x(13, 7);
    RealInterval xi(x, 96);
    CHECK(p.eval(xi, 96).contains(p.eval(x)));

    ComplexInterval z = ComplexInterval::from_rat(Rat(1, 3), Rat(-2, 5), 96);
    ComplexInterval v = p.eval(z, 96);
    // exact complex evaluation: p(1/3 - 2i/5)
    // computed with exact gaussian rational arithmetic below
    Rat re(1, 3), im(-2, 5);
    Rat vr(0), vi(0);
    for (long i = p.degree(); i >= 0; --i) {
        Rat nr = vr * re - vi * im + Rat(p.coeffs()[static_cast<size_t>(i)]);
        Rat ni = vr * im + vi * re;
        vr = nr;
        vi = ni;
    }
    CHECK(v.re.contains(vr));
    CHECK(v.im.contains(vi));
}

TEST_CASE("irreducibility certification") {
    CHECK(certify_irreducible(IntPolynomial({Int(-1), Int(-1), Int(1)})));  // x^2-x-1
    CHECK(certify_irreducible(IntPolynomial({Int(-1), Int(0), Int(-1), Int(1)})));  // x^3-x^2-1
    CHECK(certify_irreducible(IntPolynomial({Int(-2), Int(0), Int(0), Int(1)})));  // x^3-2
    CHECK(certify_irreducible(IntPolynomial({Int(1), Int(0), Int(1)})));  // x^2+1
    CHECK(certify_irreducible(IntPolynomial({Int(-1), Int(-3), Int(9)})));  // phi/3
    CHECK(certify_irreducible(IntPolynomial({Int(7), Int(1)})));  // linear

    CHECK(!certify_irreducible(IntPolynomial({Int(-1), Int(0), Int(1)})));  // (x-1)(x+1)
    CHECK(!certify_irreducible(IntPolynomial({Int(1), Int(2), Int(1)})));  // (x+1)^2
    CHECK(!certify_irreducible(IntPolynomial({Int(2), Int(3), Int(1)})));  // (x+1)(x+2)
    CHECK(!certify_irreducible(IntPolynomial({Int(4), Int(0), Int(5), Int(0), Int(1)})));
    // x^4+1 factors modulo every prime; certification must refuse rather than guess
    CHECK(!certify_irreducible(IntPolynomial({Int(1), Int(0), Int(0), Int(0), Int(1)})));
}

TEST_CASE("factor degree patterns modulo a prime") {
    // x^2 - x - 1 mod 3 has no roots, hence is irreducible
    auto degs = modular::factor_degrees(modular::reduce(IntPolynomial({Int(-1), Int(-1), Int(1)}), 3));
    CHECK(degs == std::vector<long>{2});
    // x^3 - 2 mod 5 = (x-3)(quadratic)
    auto degs2 = modular::factor_degrees(modular::reduce(IntPolynomial({Int(-2), Int(0), Int(0), Int(1)}), 5));
    std::sort(degs2.begin(), degs2.end());
    CHECK(degs2 == std::vector<long>{1, 2});
}
