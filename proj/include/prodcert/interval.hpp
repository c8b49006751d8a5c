#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "prodcert/numeric.hpp"

namespace prodcert {

// RAII wrapper for a single mpfr value.
class Mpfr {
  public:
    explicit Mpfr(long prec = 64) { mpfr_init2(v_, std::max(prec, 2L)); }
    Mpfr(const Mpfr& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    long prec() const { return mpfr_get_prec(v_); }

  private:
    mpfr_t v_;
};

// Closed interval [lo, hi] with outward-rounded endpoints. All operations
// return enclosures of the exact result; lo is always rounded down and hi up.
class RealInterval {
  public:
    RealInterval() : RealInterval(0L, 64) {}

    RealInterval(long v, long prec) : lo_(prec), hi_(prec) {
        mpfr_set_si(lo_.get(), v, MPFR_RNDD);
        mpfr_set_si(hi_.get(), v, MPFR_RNDU);
    }

    RealInterval(const Int& v, long prec) : lo_(prec), hi_(prec) {
        mpfr_set_z(lo_.get(), v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi_.get(), v.get_mpz_t(), MPFR_RNDU);
    }

    RealInterval(const Rat& v, long prec) : lo_(prec), hi_(prec) {
        mpfr_set_q(lo_.get(), v.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_.get(), v.get_mpq_t(), MPFR_RNDU);
    }

    RealInterval(const Rat& lo, const Rat& hi, long prec) : lo_(prec), hi_(prec) {
        if (lo > hi) throw DomainError("interval endpoints out of order");
        mpfr_set_q(lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
    }

    static RealInterval from_mpfr(const Mpfr& lo, const Mpfr& hi) {
        RealInterval r;
        r.lo_ = lo;
        r.hi_ = hi;
        if (mpfr_nan_p(r.lo_.get()) || mpfr_nan_p(r.hi_.get()))
            throw DomainError("NaN interval endpoint");
        if (mpfr_cmp(r.lo_.get(), r.hi_.get()) > 0)
            throw DomainError("interval endpoints out of order");
        return r;
    }

    // Point interval holding an mpfr value exactly.
    static RealInterval point(const Mpfr& v) { return from_mpfr(v, v); }

    long prec() const { return std::max(lo_.prec(), hi_.prec()); }
    mpfr_srcptr lo() const { return lo_.get(); }
    mpfr_srcptr hi() const { return hi_.get(); }

    Rat lo_rat() const {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), lo_.get());
        return q;
    }
    Rat hi_rat() const {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), hi_.get());
        return q;
    }

    bool is_finite() const { return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get()); }

    bool contains_zero() const {
        return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
    }
    bool contains(const Rat& q) const {
        return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 &&
               mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
    }
    bool contains(const RealInterval& o) const {
        return mpfr_cmp(lo_.get(), o.lo_.get()) <= 0 && mpfr_cmp(hi_.get(), o.hi_.get()) >= 0;
    }
    bool overlaps(const RealInterval& o) const {
        return mpfr_cmp(lo_.get(), o.hi_.get()) <= 0 && mpfr_cmp(o.lo_.get(), hi_.get()) <= 0;
    }

    bool is_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool is_negative() const { return mpfr_sgn(hi_.get()) < 0; }

    // Certain comparisons; Unknown when the enclosures overlap.
    Tri less_than(const RealInterval& o) const {
        if (mpfr_cmp(hi_.get(), o.lo_.get()) < 0) return Tri::True;
        if (mpfr_cmp(lo_.get(), o.hi_.get()) >= 0) return Tri::False;
        return Tri::Unknown;
    }
    Tri less_equal(const RealInterval& o) const {
        if (mpfr_cmp(hi_.get(), o.lo_.get()) <= 0) return Tri::True;
        if (mpfr_cmp(lo_.get(), o.hi_.get()) > 0) return Tri::False;
        return Tri::Unknown;
    }
    Tri greater_equal(const Rat& q) const {
        if (mpfr_cmp_q(lo_.get(), q.get_mpq_t()) >= 0) return Tri::True;
        if (mpfr_cmp_q(hi_.get(), q.get_mpq_t()) < 0) return Tri::False;
        return Tri::Unknown;
    }
    Tri less_equal(const Rat& q) const {
        if (mpfr_cmp_q(hi_.get(), q.get_mpq_t()) <= 0) return Tri::True;
        if (mpfr_cmp_q(lo_.get(), q.get_mpq_t()) > 0) return Tri::False;
        return Tri::Unknown;
    }
    Tri not_equal(const Rat& q) const {
        if (!contains(q)) return Tri::True;
        if (mpfr_cmp_q(lo_.get(), q.get_mpq_t()) == 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) == 0)
            return Tri::False;
        return Tri::Unknown;
    }

    Mpfr width() const {
        Mpfr w(prec());
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }

    // width <= 2^e ?
    bool width_below_2exp(long e) const {
        Mpfr w = width();
        if (mpfr_zero_p(w.get())) return true;
        if (!mpfr_number_p(w.get())) return false;
        return mpfr_get_exp(w.get()) <= e + 1 &&
               mpfr_cmp_si_2exp(w.get(), 1, e) <= 0;
    }

    Mpfr mid() const {
        Mpfr m(prec() + 1);
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return m;
    }

    double mid_d() const {
        return (mpfr_get_d(lo_.get(), MPFR_RNDN) + mpfr_get_d(hi_.get(), MPFR_RNDN)) / 2;
    }

    std::string str(size_t digits = 20) const;

  private:
    Mpfr lo_, hi_;
    friend RealInterval iv_add(const RealInterval&, const RealInterval&, long);
    friend RealInterval iv_sub(const RealInterval&, const RealInterval&, long);
    friend RealInterval iv_mul(const RealInterval&, const RealInterval&, long);
    friend RealInterval iv_div(const RealInterval&, const RealInterval&, long);
    friend RealInterval iv_neg(const RealInterval&);
    friend RealInterval iv_abs(const RealInterval&);
    friend RealInterval iv_sqr(const RealInterval&, long);
    friend RealInterval iv_sqrt(const RealInterval&, long);
    friend RealInterval iv_union(const RealInterval&, const RealInterval&);
    friend RealInterval iv_intersect(const RealInterval&, const RealInterval&);
    friend RealInterval iv_max(const RealInterval&, const RealInterval&);
    friend RealInterval iv_monotone_inc(const RealInterval&, long,
                                        int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t));
    friend RealInterval iv_monotone_dec(const RealInterval&, long,
                                        int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t));
    friend RealInterval iv_pow2i(long, long);
    friend RealInterval iv_mul_2exp(const RealInterval&, long);
};

inline RealInterval iv_add(const RealInterval& a, const RealInterval& b, long prec) {
    Mpfr lo(prec), hi(prec);
    mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_sub(const RealInterval& a, const RealInterval& b, long prec) {
    Mpfr lo(prec), hi(prec);
    mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_neg(const RealInterval& a) {
    Mpfr lo(a.hi_.prec()), hi(a.lo_.prec());
    mpfr_neg(lo.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(hi.get(), a.lo_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_mul(const RealInterval& a, const RealInterval& b, long prec) {
    Mpfr lo(prec), hi(prec), t(prec);
    mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
    mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
    bool first = true;
    for (auto x : as)
        for (auto y : bs) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_div(const RealInterval& a, const RealInterval& b, long prec) {
    if (b.contains_zero()) throw DomainError("interval division by interval containing zero");
    Mpfr lo(prec), hi(prec), t(prec);
    mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
    mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
    bool first = true;
    for (auto x : as)
        for (auto y : bs) {
            mpfr_div(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_div(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_abs(const RealInterval& a) {
    if (mpfr_sgn(a.lo_.get()) >= 0) return a;
    if (mpfr_sgn(a.hi_.get()) <= 0) return iv_neg(a);
    Mpfr lo(a.prec()), hi(a.prec()), t(a.prec());
    mpfr_set_zero(lo.get(), 1);
    mpfr_neg(t.get(), a.lo_.get(), MPFR_RNDU);
    if (mpfr_cmp(t.get(), a.hi_.get()) > 0)
        mpfr_set(hi.get(), t.get(), MPFR_RNDU);
    else
        mpfr_set(hi.get(), a.hi_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_sqr(const RealInterval& a, long prec) {
    RealInterval u = iv_abs(a);
    Mpfr lo(prec), hi(prec);
    mpfr_sqr(lo.get(), u.lo(), MPFR_RNDD);
    mpfr_sqr(hi.get(), u.hi(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_sqrt(const RealInterval& a, long prec) {
    if (mpfr_sgn(a.lo()) < 0) throw DomainError("sqrt of interval with negative part");
    Mpfr lo(prec), hi(prec);
    mpfr_sqrt(lo.get(), a.lo(), MPFR_RNDD);
    mpfr_sqrt(hi.get(), a.hi(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_union(const RealInterval& a, const RealInterval& b) {
    Mpfr lo(std::max(a.lo_.prec(), b.lo_.prec())), hi(std::max(a.hi_.prec(), b.hi_.prec()));
    mpfr_min(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_intersect(const RealInterval& a, const RealInterval& b) {
    if (!a.overlaps(b)) throw DomainError("empty interval intersection");
    Mpfr lo(std::max(a.lo_.prec(), b.lo_.prec())), hi(std::max(a.hi_.prec(), b.hi_.prec()));
    mpfr_max(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_min(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_max(const RealInterval& a, const RealInterval& b) {
    Mpfr lo(std::max(a.lo_.prec(), b.lo_.prec())), hi(std::max(a.hi_.prec(), b.hi_.prec()));
    mpfr_max(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_monotone_inc(const RealInterval& a, long prec,
                                    int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
    Mpfr lo(prec), hi(prec);
    fn(lo.get(), a.lo_.get(), MPFR_RNDD);
    fn(hi.get(), a.hi_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_monotone_dec(const RealInterval& a, long prec,
                                    int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
    Mpfr lo(prec), hi(prec);
    fn(lo.get(), a.hi_.get(), MPFR_RNDD);
    fn(hi.get(), a.lo_.get(), MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

// 2^e as an exact point interval.
inline RealInterval iv_pow2i(long e, long prec) {
    Mpfr lo(prec), hi(prec);
    mpfr_set_si_2exp(lo.get(), 1, e, MPFR_RNDD);
    mpfr_set_si_2exp(hi.get(), 1, e, MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_mul_2exp(const RealInterval& a, long e) {
    Mpfr lo(a.lo_.prec()), hi(a.hi_.prec());
    mpfr_mul_2si(lo.get(), a.lo_.get(), e, MPFR_RNDD);
    mpfr_mul_2si(hi.get(), a.hi_.get(), e, MPFR_RNDU);
    return RealInterval::from_mpfr(lo, hi);
}

inline RealInterval iv_exp(const RealInterval& a, long prec) {
    return iv_monotone_inc(a, prec, mpfr_exp);
}
inline RealInterval iv_exp2(const RealInterval& a, long prec) {
    return iv_monotone_inc(a, prec, mpfr_exp2);
}
inline RealInterval iv_log(const RealInterval& a, long prec) {
    if (mpfr_sgn(a.lo()) <= 0) throw DomainError("log of interval touching (-inf, 0]");
    return iv_monotone_inc(a, prec, mpfr_log);
}
inline RealInterval iv_log2(const RealInterval& a, long prec) {
    if (mpfr_sgn(a.lo()) <= 0) throw DomainError("log2 of interval touching (-inf, 0]");
    return iv_monotone_inc(a, prec, mpfr_log2);
}

// x^t for strictly positive x and real interval exponent, via exp2(t*log2 x).
inline RealInterval iv_pow(const RealInterval& x, const RealInterval& t, long prec) {
    long work = prec + 16;
    return iv_exp2(iv_mul(iv_log2(x, work), t, work), prec);
}

inline RealInterval iv_pow(const RealInterval& x, const Rat& t, long prec) {
    if (t == 0) return RealInterval(1, prec);
    if (mpz_cmp_ui(mpq_denref(t.get_mpq_t()), 1) == 0 && t.get_num().fits_slong_p()) {
        // integer exponents keep exactness and allow x <= 0
        long e = t.get_num().get_si();
        long n = e < 0 ? -e : e;
        RealInterval acc(1, prec);
        RealInterval base = x;
        while (n > 0) {
            if (n & 1) acc = iv_mul(acc, base, prec);
            base = iv_sqr(base, prec);
            n >>= 1;
        }
        if (e < 0) return iv_div(RealInterval(1, prec), acc, prec);
        return acc;
    }
    return iv_pow(x, RealInterval(t, prec + 16), prec);
}

inline std::string RealInterval::str(size_t digits) const {
    char* s1 = nullptr;
    char* s2 = nullptr;
    mpfr_asprintf(&s1, "%.*Rg", static_cast<int>(digits), lo_.get());
    mpfr_asprintf(&s2, "%.*Rg", static_cast<int>(digits), hi_.get());
    std::string out = std::string("[") + s1 + ", " + s2 + "]";
    mpfr_free_str(s1);
    mpfr_free_str(s2);
    return out;
}

// Exact decimal bound: value = mant * 10^exp10.
struct Decimal {
    Int mant;
    long exp10 = 0;

    Rat value() const {
        Rat r(mant);
        if (exp10 >= 0) return r * Rat(pow_int(Int(10), exp10));
        return r / Rat(pow_int(Int(10), -exp10));
    }
    std::string str() const {
        if (mant == 0) return "0";
        Int m = mant;
        long e = exp10;
        while (m != 0 && mpz_divisible_ui_p(m.get_mpz_t(), 10)) {
            m /= 10;
            ++e;
        }
        if (e == 0) return m.get_str();
        return m.get_str() + "e" + std::to_string(e);
    }
};

// Rounds an mpfr value to a decimal with sig_digits significant digits,
// exactly in the requested direction.
inline Decimal decimal_round(mpfr_srcptr v, int sig_digits, bool round_up) {
    if (mpfr_zero_p(v)) return {Int(0), 0};
    if (!mpfr_number_p(v)) throw DomainError("decimal_round on non-finite value");
    Int m;
    long e2 = static_cast<long>(mpfr_get_z_2exp(m.get_mpz_t(), v));
    // log10 |v| ~ (e2 + bitlen) * log10 2
    double log10v = (static_cast<double>(e2) + static_cast<double>(bit_length(m))) *
                    0.30102999566398119;
    long e10 = static_cast<long>(std::floor(log10v)) - sig_digits;
    // scaled = m * 2^{e2-e10} / 5^{e10}, rounded to an integer
    Int num = m, den = 1;
    long sh = e2 - e10;
    if (sh >= 0)
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), sh);
    else
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), -sh);
    if (e10 >= 0)
        den *= pow_int(Int(5), e10);
    else
        num *= pow_int(Int(5), -e10);
    Int q;
    if (round_up)
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return {q, e10};
}

// Outward decimal rounding with a fixed digit budget; the returned bounds
// still bracket the interval and serialize exactly.
inline std::pair<Decimal, Decimal> outward_decimal(const RealInterval& x, int sig_digits = 40) {
    return {decimal_round(x.lo(), sig_digits, false), decimal_round(x.hi(), sig_digits, true)};
}

}  // namespace prodcert
