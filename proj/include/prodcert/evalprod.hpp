#pragma once

#include <bit>
#include <sstream>

#include "prodcert/sequences.hpp"

namespace prodcert {

struct MonotonicityUnverified : Error {
    using Error::Error;
};

// Certified upper bound on a tail sum of |b_n/a_n|, with the comparison
// series spelled out.
struct TailBound {
    Rat bound;            // rigorous upper bound
    long window_end = 0;  // exact term bounds were used for n < window_end
    std::string series;   // description of the analytic closure
};

namespace evalprod_detail {

// upper bound of |b_n/a_n| from embeddings, avoiding quotient cancellation
inline RealInterval term_ratio(const SequenceInstance& inst, long n, long bits) {
    Term t = inst.term(n);
    RealInterval bn = abs_value(t.b, bits);
    RealInterval an = abs_value(t.a, bits);
    return iv_div(bn, an, bits + 16);
}

}  // namespace evalprod_detail

// Upper bound on sum_{n >= n0} |b_n/a_n|: a short window of exact term
// enclosures plus an integral-comparison closure driven by the declared
// (epsilon, beta, alpha) envelope and the monotone growth of |a_n|.
inline TailBound tail_sum_from(const SequenceInstance& inst, long n0, long bits = 96,
                               long window = 6) {
    const ExponentMeta& meta = inst.meta();
    long prec = bits + 32;
    Rat inv1e = Rat(1) / (Rat(1) + meta.epsilon);

    // exact window terms, extending while the analytic closure is not yet
    // certified convergent (|a| grows along the window, so the closure
    // condition p > 1/(1+eps) eventually either holds or never will)
    RealInterval acc(0L, prec);
    long m = n0;
    RealInterval last_abs_a(0L, prec);
    bool have_last = false, out_of_terms = false;
    RealInterval p(0L, prec);
    const long window_limit = std::max(window, 192L);
    while (true) {
        for (; m < n0 + window && !out_of_terms; ++m) {
            try {
                Term t = inst.term(m);
                RealInterval bn = abs_value(t.b, bits);
                RealInterval an = abs_value(t.a, bits);
                acc = iv_add(acc, iv_div(bn, an, prec), prec);
                last_abs_a = an;
                have_last = true;
            } catch (const TermSizeLimit&) {
                out_of_terms = true;
            }
        }
        if (!have_last) {
            if (n0 <= 1) throw DivergentMajorant("no term data available for a tail bound");
            last_abs_a = abs_value(inst.term(n0 - 1).a, bits);
            have_last = true;
        }
        bool closes = last_abs_a.greater_equal(Rat(2)) == Tri::True;
        if (closes) {
            RealInterval log2A = iv_log2(last_abs_a, prec);
            RealInterval alpha_p = iv_pow(log2A, meta.alpha - 1, prec);
            p = iv_sub(RealInterval(Rat(1) - meta.beta, prec), alpha_p, prec);
            closes = iv_sub(p, RealInterval(inv1e, prec), prec).is_positive();
        }
        if (closes) break;
        if (out_of_terms || window >= window_limit)
            throw DivergentMajorant(
                "declared (epsilon, beta, alpha) metadata too weak to certify a convergent "
                "majorant");
        window = std::min(2 * window, window_limit);
    }

    // analytic closure for n >= m, using |a_n| >= max(A, n^{1+eps}) with
    // A = certified lower bound on the last evaluated |a|
    RealInterval A = last_abs_a;
    // count part: A^{1/(1+eps) - p}
    RealInterval e1 = iv_sub(RealInterval(inv1e, prec), p, prec);
    RealInterval count_part = iv_pow(A, e1, prec);
    // series part from M1 = max(m, A^{1/(1+eps)}): M1^{-q} + M1^{1-q}/(q-1)
    RealInterval q = iv_mul(p, RealInterval(Rat(1) + meta.epsilon, prec), prec);
    RealInterval thresh = iv_pow(A, Rat(inv1e), prec);
    RealInterval M1 = iv_max(RealInterval(Int(m), prec), thresh);
    RealInterval first = iv_pow(M1, iv_neg(q), prec);
    RealInterval integral = iv_div(iv_pow(M1, iv_sub(RealInterval(1L, prec), q, prec), prec),
                                   iv_sub(q, RealInterval(1L, prec), prec), prec);
    RealInterval closure = iv_add(count_part, iv_add(first, integral, prec), prec);
    std::string series_used =
        "A^{1/(1+eps)-p} + M^{-q} + M^{1-q}/(q-1), A = |a_{m-1}|, "
        "p = 1-beta-log2(A)^{alpha-1}, q = (1+eps)p";

    // Sharper geometric closure when the kappa envelope supports it: with
    // log2|a_n| >= kappa2 h_n - tol (1 + log2 h_n) and h strictly increasing,
    // h_{m+k} >= h_m + k gives sum_k 2^{-p L(h_m+k)} <= 2^{-p L(h_m)} / (1 - 2^{-p(kappa2-tol)}).
    if (inst.schedule() && meta.kappa2 > meta.kappa2_tol) {
        try {
            Int hm = inst.term(m).h;
            // h_m >= 2 keeps log2 h' - log2 h <= h' - h on the tail
            if (hm > 1) {
                RealInterval hmi(hm, prec);
                RealInterval L = iv_sub(
                    iv_mul(RealInterval(meta.kappa2, prec), hmi, prec),
                    iv_mul(RealInterval(meta.kappa2_tol, prec),
                           iv_add(RealInterval(1L, prec), iv_log2(hmi, prec), prec), prec),
                    prec);
                RealInterval ratio_exp =
                    iv_mul(p, RealInterval(meta.kappa2 - meta.kappa2_tol, prec), prec);
                RealInterval denom = iv_sub(
                    RealInterval(1L, prec),
                    iv_exp2(iv_neg(ratio_exp), prec), prec);
                if (denom.is_positive()) {
                    RealInterval geo =
                        iv_div(iv_exp2(iv_neg(iv_mul(p, L, prec)), prec), denom, prec);
                    if (geo.less_than(closure) == Tri::True) {
                        closure = geo;
                        series_used =
                            "2^{-p L(h_m)} / (1 - 2^{-p (kappa2-tol)}), "
                            "L(h) = kappa2 h - tol (1 + log2 h), p = 1-beta-log2(A)^{alpha-1}";
                    }
                }
            }
        } catch (const TermSizeLimit&) {
        }
    }
    RealInterval total = iv_add(acc, closure, prec);

    TailBound tb;
    tb.bound = total.hi_rat();
    tb.window_end = m;
    std::ostringstream os;
    os << "sum_{n=" << n0 << "}^{" << m - 1 << "} |b_n/a_n| + " << series_used;
    tb.series = os.str();
    return tb;
}

// Spec-facing form: bound on sum_{n > N}.
inline TailBound tail_sum_bound(const SequenceInstance& inst, long N, long bits = 96,
                                long window = 6) {
    return tail_sum_from(inst, N + 1, bits, window);
}

// gamma_N = prod_{n=1}^{N-1} (1 + b_n/a_n), exact order arithmetic first and
// one embedding at the end.
inline ComplexInterval partial_product(const SequenceInstance& inst, long N, long bits) {
    if (N < 1) throw InputError("partial product index must be >= 1");
    const FieldPtr& f = inst.field();
    if (N == 1) return ComplexInterval::from_rat(Rat(1), Rat(0), bits);
    OrderElement num = OrderElement::from_int(f, Int(1));
    OrderElement den = OrderElement::from_int(f, Int(1));
    for (long n = 1; n < N; ++n) {
        Term t = inst.term(n);
        num = num * (t.a + t.b);
        den = den * t.a;
    }
    long guard = 2 * static_cast<long>(std::bit_width(static_cast<unsigned long>(N))) + 8;
    ComplexInterval nv = embed_value(num, bits + guard);
    ComplexInterval dv = embed_value(den, bits + guard);
    return cv_div(nv, dv, bits + guard + 16);
}

// Certified enclosure of the full infinite product around gamma_N.
struct ProductEnclosure {
    long N = 1;             // approximant index; the partial uses N-1 factors
    long bits = 0;
    ComplexInterval partial;       // gamma_N
    Rat tail_sum;                  // upper bound on sum_{n>=N} |b_n/a_n|
    Rat modulus_factor;            // upper bound on max(1, prod |1+b_n/a_n|)
    ComplexInterval full;          // gamma
    bool certified = true;         // false only under the explicit unsound flag
    std::string tail_series;
};

// Verifies the one-sided factor condition |1 + b_n/a_n| >= 1 (e = +1) or
// <= 1 (e = -1) on the prefix; the tail side is the instance's declared
// structural guarantee.
inline Tri factor_side(const SequenceInstance& inst, long n, long bits) {
    Term t = inst.term(n);
    ComplexInterval av = embed_value(t.a, bits);
    ComplexInterval bv = embed_value(t.b, bits);
    ComplexInterval factor = cv_add(ComplexInterval::from_rat(Rat(1), Rat(0), bits),
                                    cv_div(bv, av, bits + 16), bits + 16);
    RealInterval m2 = cv_abs2(factor, bits + 16);
    return inst.meta().e > 0 ? m2.greater_equal(Rat(1)) : m2.less_equal(Rat(1));
}

inline ProductEnclosure full_enclosure(const SequenceInstance& inst, long N, long bits,
                                       bool allow_unsound = false) {
    ProductEnclosure pe;
    pe.N = N;
    pe.bits = bits;

    // Lemma hypothesis: the modulus product converges monotonously, i.e.
    // every factor sits on the declared side of 1.
    bool verified = true;
    for (long n = 1; n < N && verified; ++n) {
        Tri side = factor_side(inst, n, bits);
        for (long b = bits; side == Tri::Unknown && b < default_precision_cap(); ) {
            b *= 2;
            side = factor_side(inst, n, b);
        }
        if (side != Tri::True) verified = false;
    }
    if (!verified && !allow_unsound)
        throw MonotonicityUnverified(
            inst.label() + ": factor modulus not certified on the declared side of 1");
    pe.certified = verified && inst.factor_side_structural();
    if (!pe.certified && !allow_unsound)
        throw MonotonicityUnverified(
            inst.label() + ": no structural one-sided guarantee for the tail factors");

    pe.partial = partial_product(inst, N, bits);
    TailBound tb = tail_sum_from(inst, N, bits);
    pe.tail_sum = tb.bound;
    pe.tail_series = tb.series;

    long prec = bits + 32;
    RealInterval mf(1L, prec);
    if (inst.meta().e > 0) {
        // prod_n |1+b_n/a_n| <= prod_{n<N} |1+b_n/a_n| * exp(tail)
        RealInterval pref = cv_abs(pe.partial, prec);
        RealInterval expo = iv_exp(RealInterval(pe.tail_sum, prec), prec);
        mf = iv_max(RealInterval(1L, prec), iv_mul(pref, expo, prec));
    }
    pe.modulus_factor = mf.hi_rat();

    RealInterval radius = iv_mul(mf, RealInterval(pe.tail_sum, prec), prec);
    Mpfr r(prec);
    mpfr_set(r.get(), radius.hi(), MPFR_RNDU);
    Mpfr rlo(prec), rhi(prec), ilo(prec), ihi(prec);
    // real generators make every factor and hence gamma real; the certified
    // one-sided factor chain then pins gamma on the e side of gamma_N
    bool one_sided = pe.certified && inst.field()->generator_real();
    if (one_sided && inst.meta().e > 0) {
        mpfr_set(rlo.get(), pe.partial.re.lo(), MPFR_RNDD);
        mpfr_add(rhi.get(), pe.partial.re.hi(), r.get(), MPFR_RNDU);
    } else if (one_sided) {
        mpfr_sub(rlo.get(), pe.partial.re.lo(), r.get(), MPFR_RNDD);
        mpfr_set(rhi.get(), pe.partial.re.hi(), MPFR_RNDU);
    } else {
        mpfr_sub(rlo.get(), pe.partial.re.lo(), r.get(), MPFR_RNDD);
        mpfr_add(rhi.get(), pe.partial.re.hi(), r.get(), MPFR_RNDU);
    }
    mpfr_sub(ilo.get(), pe.partial.im.lo(), r.get(), MPFR_RNDD);
    mpfr_add(ihi.get(), pe.partial.im.hi(), r.get(), MPFR_RNDU);
    pe.full = ComplexInterval{RealInterval::from_mpfr(rlo, rhi), RealInterval::from_mpfr(ilo, ihi)};
    if (pe.certified) pe.full = inst.tighten_gamma(pe.full);
    return pe;
}

}  // namespace prodcert
