#pragma once

#include <utility>
#include <vector>

#include "prodcert/modular.hpp"
#include "prodcert/roots.hpp"

namespace prodcert {

// A root of a certified-irreducible primitive integer polynomial, selected by
// an isolating complex box. Values are immutable; refinement returns fresh
// enclosures that always nest inside earlier ones.
class AlgebraicNumber {
  public:
    static AlgebraicNumber from_rational(const Rat& r) {
        AlgebraicNumber a;
        a.minpoly_ = IntPolynomial::linear_for(r);
        a.real_ = true;
        a.box_ = ComplexInterval::real(RealInterval(r, 96));
        return a;
    }

    // Validates irreducibility and that the box selects exactly one root.
    static AlgebraicNumber select(IntPolynomial minpoly, const ComplexInterval& user_box,
                                  long bits = 96) {
        if (minpoly.degree() < 1) throw InputError("constant minimal polynomial");
        if (minpoly.degree() > 1 && !certify_irreducible(minpoly))
            throw InputError("could not certify irreducibility of " + minpoly.str());
        long b = bits;
        while (true) {
            auto roots = isolate_roots(minpoly, b);
            int hits = 0;
            size_t hit = 0;
            bool partial = false;
            for (size_t i = 0; i < roots.size(); ++i) {
                if (!roots[i].box.overlaps(user_box)) continue;
                if (user_box.contains(roots[i].box)) {
                    ++hits;
                    hit = i;
                } else {
                    partial = true;
                }
            }
            if (hits == 1 && !partial) {
                AlgebraicNumber a;
                a.minpoly_ = std::move(minpoly);
                a.real_ = roots[hit].real;
                a.box_ = roots[hit].box;
                return a;
            }
            if (hits == 0 && !partial)
                throw InputError("root box does not select any root of " + minpoly.str());
            if (b >= default_precision_cap())
                throw InputError("root box does not isolate a unique root of " + minpoly.str());
            b *= 2;
        }
    }

    // The largest real root of an irreducible polynomial.
    static AlgebraicNumber largest_real_root(const IntPolynomial& minpoly, long bits = 96) {
        auto all = roots_of(minpoly, bits);
        const AlgebraicNumber* best = nullptr;
        for (const auto& a : all) {
            if (!a.is_real()) continue;
            if (!best || mpfr_cmp(a.root_box().re.lo(), best->root_box().re.hi()) > 0)
                best = &a;
        }
        if (!best) throw InputError("polynomial has no real root: " + minpoly.str());
        return *best;
    }

    // All roots of an irreducible polynomial, ordered as isolated.
    static std::vector<AlgebraicNumber> roots_of(const IntPolynomial& minpoly, long bits = 96) {
        if (minpoly.degree() > 1 && !certify_irreducible(minpoly))
            throw InputError("could not certify irreducibility of " + minpoly.str());
        std::vector<AlgebraicNumber> out;
        for (auto& rb : isolate_roots(minpoly, bits)) {
            AlgebraicNumber a;
            a.minpoly_ = minpoly;
            a.real_ = rb.real;
            a.box_ = rb.box;
            out.push_back(std::move(a));
        }
        return out;
    }

    const IntPolynomial& minpoly() const { return minpoly_; }
    long degree() const { return minpoly_.degree(); }
    bool is_real() const { return real_; }
    const ComplexInterval& root_box() const { return box_; }

    bool is_rational() const { return degree() == 1; }
    Rat rational_value() const {
        if (!is_rational()) throw DomainError("not a rational number");
        Rat r(-minpoly_.coeffs()[0], minpoly_.coeffs()[1]);
        r.canonicalize();
        return r;
    }
    bool is_zero() const { return is_rational() && minpoly_.constant_term() == 0; }

    // Refined enclosure of the selected root, width <= 2^{-bits}, nested in
    // the stored box.
    ComplexInterval enclosure(long bits) const {
        if (box_.width_below_2exp(-bits)) return box_;
        if (is_rational()) {
            ComplexInterval c = ComplexInterval::real(RealInterval(rational_value(), bits + 8));
            return {iv_intersect(c.re, box_.re), c.im};
        }
        long b = bits;
        while (true) {
            auto roots = isolate_roots(minpoly_, b);
            const ComplexInterval* found = nullptr;
            int hits = 0;
            for (const auto& rb : roots) {
                if (!rb.box.overlaps(box_)) continue;
                ++hits;
                found = &rb.box;
            }
            // A stray neighbor box can graze the stored box; at higher
            // precision only the selected root's box keeps overlapping.
            if (hits == 1)
                return {iv_intersect(found->re, box_.re), iv_intersect(found->im, box_.im)};
            if (hits == 0)
                throw PrecisionExhausted("refinement lost the selected root (invalid root box?)");
            if (b >= default_precision_cap())
                throw PrecisionExhausted("refinement cannot disambiguate the selected root");
            b *= 2;
        }
    }

  private:
    AlgebraicNumber() = default;
    IntPolynomial minpoly_;
    ComplexInterval box_;
    bool real_ = false;
};

// Conjugates of a: all roots of its minimal polynomial as boxes of width
// <= 2^{-bits}; self_index marks the box containing a itself.
struct ConjugateSet {
    std::vector<ComplexInterval> boxes;
    std::vector<bool> real;
    size_t self_index = 0;
};

inline ConjugateSet conjugates(const AlgebraicNumber& a, long bits) {
    if (bits < 32) throw InputError("conjugates: bits must be at least 32");
    long b = bits;
    while (true) {
        ConjugateSet cs;
        auto roots = isolate_roots(a.minpoly(), b);
        int hits = 0;
        for (size_t i = 0; i < roots.size(); ++i) {
            cs.boxes.push_back(roots[i].box);
            cs.real.push_back(roots[i].real);
            if (roots[i].box.overlaps(a.root_box())) {
                cs.self_index = i;
                ++hits;
            }
        }
        if (hits == 1) return cs;
        if (hits == 0 || b >= default_precision_cap())
            throw PrecisionExhausted("conjugate refinement did not match the stored root box");
        b *= 2;
    }
}

// Rigorous enclosure of the maximum conjugate modulus.
inline RealInterval house(const AlgebraicNumber& a, long bits = 64) {
    auto cs = conjugates(a, std::max(bits + 8, 32L));
    long prec = bits + 16;
    RealInterval m = cv_abs(cs.boxes[0], prec);
    for (size_t i = 1; i < cs.boxes.size(); ++i) m = iv_max(m, cv_abs(cs.boxes[i], prec));
    return m;
}

// Product of all conjugates: (-1)^deg c_0 / c_d, exact.
inline Rat norm(const AlgebraicNumber& a) {
    if (a.is_zero()) throw DomainError("norm of zero");
    Rat r(a.minpoly().constant_term(), a.minpoly().leading());
    r.canonicalize();
    if (a.degree() % 2 == 0) return r;
    return -r;
}

// Leading coefficient of the primitive minimal polynomial.
inline Int denominator(const AlgebraicNumber& a) { return a.minpoly().leading(); }

// M(a) = c_d * prod max(1, |a_i|).
inline RealInterval mahler_measure(const AlgebraicNumber& a, long bits = 64) {
    auto cs = conjugates(a, std::max(bits + 8, 32L));
    long prec = bits + 16;
    RealInterval m(a.minpoly().leading(), prec);
    RealInterval one(1L, prec);
    for (const auto& b : cs.boxes) m = iv_mul(m, iv_max(one, cv_abs(b, prec)), prec);
    return m;
}

// H(a) = M(a)^{1/deg a}.
inline RealInterval weil_height(const AlgebraicNumber& a, long bits = 64) {
    RealInterval m = mahler_measure(a, bits + 8);
    return iv_pow(m, Rat(1, a.degree()), bits + 16);
}

// Liouville bound (2H(a))^{-deg a}; a rigorous lower bound for |a|.
inline RealInterval liouville_lower_bound(const AlgebraicNumber& a, long bits = 64) {
    if (a.is_zero()) throw DomainError("liouville bound of zero");
    long prec = bits + 16;
    RealInterval h2 = iv_mul(RealInterval(2L, prec), weil_height(a, bits + 8), prec);
    return iv_pow(h2, Rat(-a.degree()), prec);
}

// The algebraic number 1/a (reversed minimal polynomial, reciprocal box).
inline AlgebraicNumber invert(const AlgebraicNumber& a, long bits = 96) {
    if (a.is_zero()) throw DomainError("inverse of zero");
    if (a.is_rational()) return AlgebraicNumber::from_rational(Rat(1) / a.rational_value());
    IntPolynomial rev = a.minpoly().reversed();
    long b = bits;
    while (true) {
        ComplexInterval box = cv_inv(a.enclosure(b), b + 16);
        try {
            return AlgebraicNumber::select(rev, box, b);
        } catch (const InputError&) {
            if (b >= default_precision_cap()) throw;
            b *= 2;
        }
    }
}

}  // namespace prodcert
