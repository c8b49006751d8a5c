#pragma once

#include "prodcert/interval.hpp"

namespace prodcert {

// Axis-aligned rectangle enclosure of a complex number.
struct ComplexInterval {
    RealInterval re, im;

    ComplexInterval() = default;
    ComplexInterval(RealInterval r, RealInterval i) : re(std::move(r)), im(std::move(i)) {}

    static ComplexInterval real(const RealInterval& r) {
        return {r, RealInterval(0L, r.prec())};
    }
    static ComplexInterval from_rat(const Rat& r, const Rat& i, long prec) {
        return {RealInterval(r, prec), RealInterval(i, prec)};
    }

    long prec() const { return std::max(re.prec(), im.prec()); }

    bool is_exact_real() const {
        return mpfr_zero_p(im.lo()) && mpfr_zero_p(im.hi());
    }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

    bool overlaps(const ComplexInterval& o) const {
        return re.overlaps(o.re) && im.overlaps(o.im);
    }
    bool contains(const ComplexInterval& o) const {
        return re.contains(o.re) && im.contains(o.im);
    }

    ComplexInterval conj() const { return {re, iv_neg(im)}; }

    bool width_below_2exp(long e) const {
        return re.width_below_2exp(e) && im.width_below_2exp(e);
    }

    std::string str(size_t digits = 20) const {
        return re.str(digits) + " + " + im.str(digits) + " i";
    }
};

inline ComplexInterval cv_add(const ComplexInterval& a, const ComplexInterval& b, long prec) {
    return {iv_add(a.re, b.re, prec), iv_add(a.im, b.im, prec)};
}
inline ComplexInterval cv_sub(const ComplexInterval& a, const ComplexInterval& b, long prec) {
    return {iv_sub(a.re, b.re, prec), iv_sub(a.im, b.im, prec)};
}
inline ComplexInterval cv_neg(const ComplexInterval& a) {
    return {iv_neg(a.re), iv_neg(a.im)};
}

inline ComplexInterval cv_mul(const ComplexInterval& a, const ComplexInterval& b, long prec) {
    RealInterval re = iv_sub(iv_mul(a.re, b.re, prec), iv_mul(a.im, b.im, prec), prec);
    RealInterval im = iv_add(iv_mul(a.re, b.im, prec), iv_mul(a.im, b.re, prec), prec);
    return {re, im};
}

inline ComplexInterval cv_mul(const ComplexInterval& a, const RealInterval& s, long prec) {
    return {iv_mul(a.re, s, prec), iv_mul(a.im, s, prec)};
}

// |z|^2 as an interval.
inline RealInterval cv_abs2(const ComplexInterval& a, long prec) {
    return iv_add(iv_sqr(a.re, prec), iv_sqr(a.im, prec), prec);
}

inline RealInterval cv_abs(const ComplexInterval& a, long prec) {
    if (a.is_exact_real()) return iv_abs(a.re);
    return iv_sqrt(cv_abs2(a, prec), prec);
}

inline ComplexInterval cv_inv(const ComplexInterval& a, long prec) {
    RealInterval n = cv_abs2(a, prec);
    if (n.contains_zero()) throw DomainError("complex interval inverse through zero");
    return {iv_div(a.re, n, prec), iv_div(iv_neg(a.im), n, prec)};
}

inline ComplexInterval cv_div(const ComplexInterval& a, const ComplexInterval& b, long prec) {
    if (b.is_exact_real()) {
        if (b.re.contains_zero()) throw DomainError("complex interval division by zero");
        return {iv_div(a.re, b.re, prec), iv_div(a.im, b.re, prec)};
    }
    return cv_mul(a, cv_inv(b, prec), prec);
}

}  // namespace prodcert
