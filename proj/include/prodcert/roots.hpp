#pragma once

#include <cmath>
#include <vector>

#include "prodcert/intpoly.hpp"

namespace prodcert {

// Certified enclosure of one root of a squarefree integer polynomial.
// For a real root the box has an exactly-zero imaginary part and the real
// part endpoints carry opposite polynomial signs.
struct RootBox {
    ComplexInterval box;
    bool real = false;
};

namespace roots_detail {

// Approximate complex number for the Aberth solver (round-to-nearest only;
// rigor comes from the certification pass).
struct CNum {
    Mpfr re, im;
    explicit CNum(long prec) : re(prec), im(prec) {
        mpfr_set_zero(re.get(), 1);
        mpfr_set_zero(im.get(), 1);
    }
};

inline void c_add(CNum& r, const CNum& a, const CNum& b) {
    mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}
inline void c_sub(CNum& r, const CNum& a, const CNum& b) {
    mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}
inline void c_mul(CNum& r, const CNum& a, const CNum& b, Mpfr& t1, Mpfr& t2) {
    // r may not alias a or b
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(r.re.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), t1.get(), t2.get(), MPFR_RNDN);
}
inline void c_div(CNum& r, const CNum& a, const CNum& b, Mpfr& t1, Mpfr& t2, Mpfr& n) {
    mpfr_sqr(t1.get(), b.re.get(), MPFR_RNDN);
    mpfr_sqr(t2.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(n.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_div(t1.get(), t1.get(), n.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    Mpfr t3(mpfr_get_prec(t2.get()));
    mpfr_mul(t3.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(t2.get(), t2.get(), t3.get(), MPFR_RNDN);
    mpfr_div(r.im.get(), t2.get(), n.get(), MPFR_RNDN);
    mpfr_set(r.re.get(), t1.get(), MPFR_RNDN);
}

inline void horner(const std::vector<Int>& c, const CNum& z, CNum& val, CNum& der, long prec) {
    CNum v(prec), d(prec), t(prec);
    Mpfr t1(prec), t2(prec);
    mpfr_set_z(v.re.get(), c.back().get_mpz_t(), MPFR_RNDN);
    for (size_t i = c.size() - 1; i-- > 0;) {
        c_mul(t, d, z, t1, t2);
        c_add(d, t, v);
        c_mul(t, v, z, t1, t2);
        mpfr_set(v.im.get(), t.im.get(), MPFR_RNDN);
        mpfr_add_z(v.re.get(), t.re.get(), c[i].get_mpz_t(), MPFR_RNDN);
    }
    val = v;
    der = d;
}

// One full Aberth-Ehrlich pass; returns the largest relative correction
// exponent (log2), or a large negative value when converged.
inline long aberth_pass(const std::vector<Int>& c, std::vector<CNum>& z, long prec) {
    size_t d = z.size();
    Mpfr t1(prec), t2(prec), n(prec);
    long worst = -(1L << 30);
    for (size_t k = 0; k < d; ++k) {
        CNum val(prec), der(prec);
        horner(c, z[k], val, der, prec);
        if (mpfr_zero_p(val.re.get()) && mpfr_zero_p(val.im.get())) continue;
        if (mpfr_zero_p(der.re.get()) && mpfr_zero_p(der.im.get())) {
            // nudge off a critical point
            mpfr_nextabove(z[k].re.get());
            worst = std::max(worst, 0L);
            continue;
        }
        CNum nk(prec);
        c_div(nk, val, der, t1, t2, n);
        CNum s(prec), diff(prec), inv(prec), one(prec);
        mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
        for (size_t j = 0; j < d; ++j) {
            if (j == k) continue;
            c_sub(diff, z[k], z[j]);
            if (mpfr_zero_p(diff.re.get()) && mpfr_zero_p(diff.im.get())) {
                mpfr_nextabove(z[k].re.get());
                c_sub(diff, z[k], z[j]);
            }
            c_div(inv, one, diff, t1, t2, n);
            c_add(s, s, inv);
        }
        CNum denom(prec), prod(prec);
        c_mul(prod, nk, s, t1, t2);
        mpfr_ui_sub(denom.re.get(), 1, prod.re.get(), MPFR_RNDN);
        mpfr_neg(denom.im.get(), prod.im.get(), MPFR_RNDN);
        CNum delta(prec);
        if (mpfr_zero_p(denom.re.get()) && mpfr_zero_p(denom.im.get()))
            delta = nk;
        else
            c_div(delta, nk, denom, t1, t2, n);
        mpfr_sub(z[k].re.get(), z[k].re.get(), delta.re.get(), MPFR_RNDN);
        mpfr_sub(z[k].im.get(), z[k].im.get(), delta.im.get(), MPFR_RNDN);

        // relative correction size in exponents
        long edelta = std::max(mpfr_zero_p(delta.re.get()) ? -(1L << 30) : mpfr_get_exp(delta.re.get()),
                               mpfr_zero_p(delta.im.get()) ? -(1L << 30) : mpfr_get_exp(delta.im.get()));
        long ez = std::max({mpfr_zero_p(z[k].re.get()) ? 0L : mpfr_get_exp(z[k].re.get()),
                            mpfr_zero_p(z[k].im.get()) ? 0L : mpfr_get_exp(z[k].im.get()), 0L});
        worst = std::max(worst, edelta - ez);
    }
    return worst;
}

inline std::vector<CNum> initial_points(const IntPolynomial& p, long prec) {
    long d = p.degree();
    // Fujiwara-style radius from coefficient exponents
    double lc_bits = static_cast<double>(bit_length(p.leading()));
    double rad_log2 = -1e9;
    for (long k = 1; k <= d; ++k) {
        const Int& ck = p.coeffs()[static_cast<size_t>(d - k)];
        if (ck == 0) continue;
        double t = (static_cast<double>(bit_length(ck)) - lc_bits + 1.0) / static_cast<double>(k);
        rad_log2 = std::max(rad_log2, t);
    }
    if (rad_log2 < -1e8) rad_log2 = 0;
    rad_log2 += 1.0;
    std::vector<CNum> z;
    z.reserve(static_cast<size_t>(d));
    const double golden = 2.399963229728653;
    for (long k = 0; k < d; ++k) {
        double ang = golden * static_cast<double>(k) + 0.7;
        CNum p0(prec);
        mpfr_set_d(p0.re.get(), std::cos(ang), MPFR_RNDN);
        mpfr_set_d(p0.im.get(), std::sin(ang) + 0.05, MPFR_RNDN);
        long e = static_cast<long>(rad_log2 * (0.5 + 0.5 * (k + 1.0) / d));
        mpfr_mul_2si(p0.re.get(), p0.re.get(), e, MPFR_RNDN);
        mpfr_mul_2si(p0.im.get(), p0.im.get(), e, MPFR_RNDN);
        z.push_back(std::move(p0));
    }
    return z;
}

// Upper bound on deg(p) * |p(z)/p'(z)| at the exact point z; nullopt when the
// derivative enclosure straddles zero.
inline std::optional<Mpfr> newton_radius(const IntPolynomial& p, const IntPolynomial& pd,
                                         const CNum& z, long prec) {
    ComplexInterval zi{RealInterval::point(z.re), RealInterval::point(z.im)};
    ComplexInterval pv = p.eval(zi, prec);
    ComplexInterval dv = pd.eval(zi, prec);
    RealInterval dabs = cv_abs(dv, prec);
    if (dabs.contains_zero()) return std::nullopt;
    RealInterval pabs = cv_abs(pv, prec);
    RealInterval r = iv_div(pabs, dabs, prec);
    Mpfr out(prec);
    mpfr_mul_si(out.get(), r.hi(), p.degree(), MPFR_RNDU);
    return out;
}

inline bool boxes_disjoint(const ComplexInterval& a, const ComplexInterval& b) {
    if (mpfr_cmp(a.re.hi(), b.re.lo()) < 0 || mpfr_cmp(b.re.hi(), a.re.lo()) < 0) return true;
    if (mpfr_cmp(a.im.hi(), b.im.lo()) < 0 || mpfr_cmp(b.im.hi(), a.im.lo()) < 0) return true;
    return false;
}

// Exact sign of p at a dyadic point, nudging the point outward on a zero hit.
inline int exact_sign_nudged(const IntPolynomial& p, Mpfr& x, int dir) {
    for (int tries = 0; tries < 4; ++tries) {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), x.get());
        Rat v = p.eval(q);
        int s = sgn(v);
        if (s != 0) return s;
        if (dir > 0)
            mpfr_nextabove(x.get());
        else
            mpfr_nextbelow(x.get());
    }
    throw PrecisionExhausted("could not obtain nonzero sign near root bracket endpoint");
}

}  // namespace roots_detail

// Isolates all complex roots of a squarefree integer polynomial into
// pairwise-disjoint certified boxes of width <= 2^{-bits}. Real roots are
// certified by exact sign changes, nonreal roots by Newton-test disks that
// exclude the real axis; a count argument pins one root per box.
inline std::vector<RootBox> isolate_roots(const IntPolynomial& p, long bits,
                                          long prec_cap = 0) {
    using namespace roots_detail;
    if (prec_cap == 0) prec_cap = default_precision_cap();
    long d = p.degree();
    if (d <= 0) throw DomainError("root isolation of a constant");
    if (d == 1) {
        Rat r(-p.coeffs()[0], p.coeffs()[1]);
        r.canonicalize();
        long prec = std::max(64L, bits + 8);
        RootBox rb;
        rb.box = ComplexInterval::real(RealInterval(r, prec));
        rb.real = true;
        return {rb};
    }
    if (!p.is_squarefree()) throw DomainError("root isolation requires a squarefree polynomial");
    IntPolynomial pd = p.derivative();

    long target = std::max({128L, bits + 64, bit_length(p.leading()) + 64});
    // the cap limits refinement beyond the request, not the request itself
    long effective_cap = std::max(prec_cap, 2 * target);
    // climb a precision ladder with warm starts; certify only at the target
    long prec = std::min(512L, target);
    std::vector<CNum> z;
    while (prec <= effective_cap) {
        if (z.empty() || z.front().re.prec() != prec) {
            std::vector<CNum> fresh = initial_points(p, prec);
            if (!z.empty()) {
                for (size_t i = 0; i < z.size(); ++i) {
                    if (!mpfr_number_p(z[i].re.get()) || !mpfr_number_p(z[i].im.get())) continue;
                    mpfr_set(fresh[i].re.get(), z[i].re.get(), MPFR_RNDN);
                    mpfr_set(fresh[i].im.get(), z[i].im.get(), MPFR_RNDN);
                }
            }
            z = std::move(fresh);
        }
        long iters = 64 + 4 * d;
        for (long it = 0; it < iters; ++it) {
            long worst = aberth_pass(p.coeffs(), z, prec);
            if (worst < -prec + 8) break;
        }
        if (prec < target) {
            prec = std::min(2 * prec, target);
            continue;
        }

        // certification pass
        std::vector<RootBox> out;
        bool ok = true;
        long nreal = 0, npairs = 0;
        try {
        for (long k = 0; k < d && ok; ++k) {
            if (!mpfr_number_p(z[static_cast<size_t>(k)].re.get()) ||
                !mpfr_number_p(z[static_cast<size_t>(k)].im.get())) {
                ok = false;
                break;
            }
            auto rad = newton_radius(p, pd, z[static_cast<size_t>(k)], prec);
            if (!rad) {
                ok = false;
                break;
            }
            const Mpfr& r = *rad;
            Mpfr abs_im(prec);
            mpfr_abs(abs_im.get(), z[static_cast<size_t>(k)].im.get(), MPFR_RNDU);
            if (mpfr_cmp(abs_im.get(), r.get()) <= 0) {
                // candidate real root: exact sign-change bracket
                Mpfr lo(prec), hi(prec), w(prec);
                mpfr_mul_2ui(w.get(), r.get(), 1, MPFR_RNDU);
                if (mpfr_zero_p(w.get())) mpfr_set_si_2exp(w.get(), 1, -prec + 4, MPFR_RNDU);
                mpfr_sub(lo.get(), z[static_cast<size_t>(k)].re.get(), w.get(), MPFR_RNDD);
                mpfr_add(hi.get(), z[static_cast<size_t>(k)].re.get(), w.get(), MPFR_RNDU);
                int slo, shi;
                try {
                    slo = exact_sign_nudged(p, lo, -1);
                    shi = exact_sign_nudged(p, hi, +1);
                } catch (const PrecisionExhausted&) {
                    ok = false;
                    break;
                }
                if (slo == shi) {
                    ok = false;
                    break;
                }
                RootBox rb;
                rb.real = true;
                rb.box = ComplexInterval{RealInterval::from_mpfr(lo, hi),
                                         RealInterval(Rat(0), prec)};
                out.push_back(std::move(rb));
                ++nreal;
            } else if (mpfr_sgn(z[static_cast<size_t>(k)].im.get()) > 0) {
                // upper half plane: box must exclude the real axis
                Mpfr rlo(prec), rhi(prec), ilo(prec), ihi(prec);
                mpfr_sub(rlo.get(), z[static_cast<size_t>(k)].re.get(), r.get(), MPFR_RNDD);
                mpfr_add(rhi.get(), z[static_cast<size_t>(k)].re.get(), r.get(), MPFR_RNDU);
                mpfr_sub(ilo.get(), z[static_cast<size_t>(k)].im.get(), r.get(), MPFR_RNDD);
                mpfr_add(ihi.get(), z[static_cast<size_t>(k)].im.get(), r.get(), MPFR_RNDU);
                if (mpfr_sgn(ilo.get()) <= 0) {
                    ok = false;
                    break;
                }
                RootBox rb;
                rb.real = false;
                rb.box = ComplexInterval{RealInterval::from_mpfr(rlo, rhi),
                                         RealInterval::from_mpfr(ilo, ihi)};
                RootBox conj;
                conj.real = false;
                conj.box = rb.box.conj();
                out.push_back(std::move(rb));
                out.push_back(std::move(conj));
                ++npairs;
            }
            // lower half plane points are covered by the mirrored boxes
        }
        } catch (const Error&) {
            ok = false;
        }
        if (ok && nreal + 2 * npairs == d) {
            for (size_t i = 0; i < out.size() && ok; ++i)
                for (size_t j = i + 1; j < out.size() && ok; ++j)
                    if (!boxes_disjoint(out[i].box, out[j].box)) ok = false;
            if (ok)
                for (const auto& rb : out)
                    if (!rb.box.width_below_2exp(-bits)) {
                        ok = false;
                        break;
                    }
            if (ok) return out;
        }
        prec *= 2;
    }
    throw PrecisionExhausted("root isolation failed below the precision cap for " + p.str());
}

}  // namespace prodcert
