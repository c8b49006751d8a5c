#pragma once

#include <algorithm>

#include "prodcert/criteria.hpp"

namespace prodcert {

namespace approx_detail {

// smallest positive integer k with k * R >= |a|^{z2}, decided exactly for
// rational |a| and by refinement otherwise
inline Int ceil_power_over(const OrderElement& a, const Rat& z2, const Int& R, long bits) {
    if (z2 == 0) return Int(1);
    if (a.dim() == 1 && z2.get_num().fits_ulong_p() && z2.get_den().fits_ulong_p()) {
        // |a| is an exact integer: k >= A^{p/q}/R iff (kR)^q >= A^p
        Int A = abs(a.coords()[0]);
        Int P;
        unsigned long p = z2.get_num().get_ui();
        unsigned long q = z2.get_den().get_ui();
        mpz_pow_ui(P.get_mpz_t(), A.get_mpz_t(), p);
        auto ok = [&](const Int& k) {
            Int t = k * R;
            Int tq;
            mpz_pow_ui(tq.get_mpz_t(), t.get_mpz_t(), q);
            return tq >= P;
        };
        // start from an interval estimate and adjust locally
        long prec = std::max(bits, 2 * bit_length(A) + 64);
        RealInterval est = iv_div(iv_pow(RealInterval(A, prec), z2, prec),
                                  RealInterval(R, prec), prec);
        Int k = ceil_rat(est.lo_rat());
        if (k < 1) k = 1;
        while (!ok(k)) ++k;
        while (k > 1 && ok(k - 1)) --k;
        return k;
    }
    for (long w = bits;; w *= 2) {
        if (w > default_precision_cap() + 4 * a.max_coord_bits())
            throw PrecisionExhausted("atilde threshold indistinguishable from an integer");
        long prec = w + 16;
        RealInterval v = iv_div(iv_pow(abs_value(a, w), z2, prec), RealInterval(R, prec), prec);
        Int klo = ceil_rat(v.lo_rat());
        Int khi = ceil_rat(v.hi_rat());
        if (klo == khi) return std::max(klo, Int(1));
    }
}

}  // namespace approx_detail

// Lemma parameter bundle (y, z1, z2, M) used by the approximant bounds;
// M = d(y + z1 + z2) + z2 + delta with y = y2.
struct LemmaParams {
    Rat y, z1, z2, M;
    Rat delta;

    static LemmaParams from(const SequenceInstance& inst, Mode mode, const Rat& delta = Rat(0),
                            const Rat& z2_floor_for_zero = Rat(1, 8)) {
        const ExponentMeta& m = inst.meta();
        LemmaParams p;
        p.y = m.y2;
        p.z1 = m.z1;
        p.z2 = m.z2;
        p.delta = delta;
        if (mode == Mode::pi) {
            p.z1 = std::max(p.z1, Rat(-1));
            p.z2 = std::max(p.z2, Rat(1));
        } else if (p.z2 == 0) {
            // the single-product proof replaces z2 = 0 by a small positive
            // bump absorbed into the existential delta
            p.z2 = z2_floor_for_zero;
        }
        long d = inst.field()->degree();
        p.M = Rat(d) * (p.y + p.z1 + p.z2) + p.z2 + delta;
        return p;
    }
};

// The integer approximant data of index N: q_N = prod t_n with
// t_n = atilde_n r_n |Norm(a_n/r_n)|, and p_i the exact power-basis
// coordinates of q_N gamma_N.
struct ApproximantRecord {
    long N = 1;
    long bits = 0;
    std::vector<Int> atilde;
    std::vector<Int> t;  // t_n = atilde_n r_n |Norm(a_n/r_n)|
    Int qN;
    std::vector<Int> p;
    bool qN_gt_2N = false;
    RealInterval gap;    // enclosure of |gamma - gamma_N|
    Rat tail_sum;
    Rat modulus_factor;
};

// Sequentially minimal positive integers making t_n nondecreasing with
// t_n >= |a_n|^{z2}.
inline std::vector<Int> choose_atilde(const SequenceInstance& inst, long N, const Rat& z2,
                                      long bits = 96) {
    if (z2 < 0) throw InputError("z2 must be nonnegative");
    std::vector<Int> out;
    Int prev_t(0);
    for (long n = 1; n < N; ++n) {
        Term tm = inst.term(n);
        OrderElement u = divide_exact(tm.a, tm.r);
        Int R = tm.r * abs(norm_own_field(u));
        if (R == 0) throw DomainError("zero norm factor");
        Int k1(1);
        if (prev_t > 0) {
            mpz_cdiv_q(k1.get_mpz_t(), prev_t.get_mpz_t(), R.get_mpz_t());
            if (k1 < 1) k1 = 1;
        }
        Int k2 = approx_detail::ceil_power_over(tm.a, z2, R, bits);
        Int k = std::max(k1, k2);
        out.push_back(k);
        prev_t = k * R;
    }
    return out;
}

// Builds the approximant by exact order arithmetic:
// q_N gamma_N = prod atilde_n (a_n + b_n) |Norm(u_n)| / u_n with u_n = a_n/r_n,
// each factor an exact order element via the norm cofactor.
inline ApproximantRecord build_approximant(const SequenceInstance& inst, long N, long bits,
                                           const LemmaParams& params) {
    if (N < 2) throw InputError("approximant index must be at least 2");
    ApproximantRecord rec;
    rec.N = N;
    rec.bits = bits;
    rec.atilde = choose_atilde(inst, N, params.z2, bits);

    const FieldPtr& f = inst.field();
    OrderElement G = OrderElement::from_int(f, Int(1));
    OrderElement prod_a = OrderElement::from_int(f, Int(1));
    OrderElement prod_ab = OrderElement::from_int(f, Int(1));
    rec.qN = 1;
    for (long n = 1; n < N; ++n) {
        Term tm = inst.term(n);
        OrderElement u = divide_exact(tm.a, tm.r);
        Int norm_u = norm_own_field(u);
        Int t_n = rec.atilde[static_cast<size_t>(n - 1)] * tm.r * abs(norm_u);
        rec.t.push_back(t_n);
        rec.qN *= t_n;
        OrderElement factor = (tm.a + tm.b) * norm_cofactor(u);
        factor = factor * (rec.atilde[static_cast<size_t>(n - 1)] * Int(sgn(norm_u)));
        G = G * factor;
        prod_a = prod_a * tm.a;
        prod_ab = prod_ab * (tm.a + tm.b);
    }
    // exact integrality witness: G prod a_n = q_N prod (a_n + b_n)
    if (!(G * prod_a == prod_ab * rec.qN))
        throw DomainError(
            "non-integral coordinate: the approximant identity failed (order membership bug)");
    rec.p = G.coords();

    Int two_N;
    mpz_ui_pow_ui(two_N.get_mpz_t(), 2, static_cast<unsigned long>(N));
    rec.qN_gt_2N = rec.qN > two_N;

    // gap enclosure |gamma - gamma_N| via the product-to-sum bound, with a
    // first-omitted-factor lower bound in the certified real case
    ProductEnclosure pe = full_enclosure(inst, N, bits);
    rec.tail_sum = pe.tail_sum;
    rec.modulus_factor = pe.modulus_factor;
    long prec = bits + 32;
    RealInterval upper = iv_mul(RealInterval(pe.tail_sum, prec),
                                RealInterval(pe.modulus_factor, prec), prec);
    Mpfr lo(prec);
    mpfr_set_zero(lo.get(), 1);
    if (inst.factor_side_structural() && f->generator_real()) {
        Term tN = inst.term(N);
        RealInterval ratio = iv_div(abs_value(tN.b, bits), abs_value(tN.a, bits), prec);
        RealInterval gN = cv_abs(pe.partial, prec);
        RealInterval lower = iv_mul(gN, ratio, prec);
        if (lower.is_positive() && mpfr_cmp(lower.lo(), upper.hi()) <= 0)
            mpfr_set(lo.get(), lower.lo(), MPFR_RNDD);
    }
    Mpfr hi(prec);
    mpfr_set(hi.get(), upper.hi(), MPFR_RNDU);
    rec.gap = RealInterval::from_mpfr(lo, hi);
    return rec;
}

// |p_{i,N}| <= 2^{N log2^alpha q_N} q_N^{1 + (y+z1)/z2}, per coordinate.
inline std::vector<Tri> verify_piBound(const ApproximantRecord& rec, const SequenceInstance& inst,
                                       const LemmaParams& params, long bits = 0) {
    if (params.z2 <= 0) throw InputError("piBound needs z2 > 0");
    long prec = (bits > 0 ? bits : rec.bits) + 32;
    RealInterval q(rec.qN, prec);
    RealInterval lq = iv_log2(q, prec);
    RealInterval slack_exp = iv_mul(RealInterval(Int(rec.N), prec),
                                    iv_pow(lq, inst.meta().alpha, prec), prec);
    Rat expo = Rat(1) + (params.y + params.z1) / params.z2;
    RealInterval rhs_log = iv_add(slack_exp, iv_mul(RealInterval(expo, prec), lq, prec), prec);
    std::vector<Tri> out;
    for (const Int& pi : rec.p) {
        if (pi == 0) {
            out.push_back(Tri::True);
            continue;
        }
        RealInterval lhs_log = iv_log2(RealInterval(Int(abs(pi)), prec), prec);
        out.push_back(lhs_log.less_equal(rhs_log));
    }
    return out;
}

// |gamma - (sum p_i x_i)/q_N| < 2^{-dN log2^alpha q_N} q_N^{-M/z2}
// (the left side is the product form; the sum p_i x_i / q_N equals gamma_N
// exactly by construction).
inline Tri verify_hns(const ApproximantRecord& rec, const SequenceInstance& inst,
                      const LemmaParams& params, long bits = 0) {
    if (params.z2 <= 0) throw InputError("hns bound needs z2 > 0");
    long prec = (bits > 0 ? bits : rec.bits) + 32;
    long d = inst.field()->degree();
    RealInterval q(rec.qN, prec);
    RealInterval lq = iv_log2(q, prec);
    RealInterval rhs_log = iv_neg(iv_add(
        iv_mul(RealInterval(Int(d * rec.N), prec), iv_pow(lq, inst.meta().alpha, prec), prec),
        iv_mul(RealInterval(params.M / params.z2, prec), lq, prec), prec));
    RealInterval rhs = iv_exp2(rhs_log, prec);
    return rec.gap.less_than(rhs);
}

struct LinearFormReport {
    RealInterval lhs;
    RealInterval rhs;      // q_N^{-delta}
    Tri holds = Tri::Unknown;
    bool pi_cap_ok = false;
};

// Subspace-lemma inequality |q s - sum p_i x_i| prod max(1,|p_i|) < q^{-delta}
// with s the full product; positive results witness the hypothesis side of
// the finiteness statement.
inline LinearFormReport verify_linear_form(const ApproximantRecord& rec,
                                           const SequenceInstance& inst, const Rat& delta,
                                           const Rat& C_cap, long bits = 0) {
    long prec = (bits > 0 ? bits : rec.bits) + 32;
    LinearFormReport rep;
    Int prod_max(1);
    bool caps = true;
    RealInterval q(rec.qN, prec);
    RealInterval qcap = iv_pow(q, C_cap, prec);
    for (const Int& pi : rec.p) {
        Int a = abs(pi);
        if (a > 1) prod_max *= a;
        if (RealInterval(a, prec).less_equal(qcap) != Tri::True) caps = false;
    }
    rep.pi_cap_ok = caps;
    // |q gamma - sum p_i x_i| = q |gamma - gamma_N|
    rep.lhs = iv_mul(iv_mul(q, rec.gap, prec), RealInterval(prod_max, prec), prec);
    rep.rhs = iv_pow(q, -delta, prec);
    rep.holds = rep.lhs.less_than(rep.rhs);
    return rep;
}

// The decay quantity of the small-tails lemma at index N:
// sum_{n>N} |b_n/a_n| (prod_{n<=N} |a_n|^M) 2^{N^2 log2^c |a_{N-1}|}.
inline RealInterval zn_quantity(const SequenceInstance& inst, const Rat& M, const Rat& c_exp,
                                long N, long bits = 96) {
    if (c_exp <= 0 || c_exp >= 1) throw InputError("c must lie in (0,1)");
    if (N < 2) throw InputError("zn quantity needs N >= 2");
    long prec = bits + 32;
    TailBound tb = tail_sum_from(inst, N + 1, bits);
    Term first = inst.term(N + 1);
    RealInterval first_ratio =
        iv_div(abs_value(first.b, bits), abs_value(first.a, bits), prec);
    Mpfr lo(prec), hi(prec);
    mpfr_set(lo.get(), first_ratio.lo(), MPFR_RNDD);
    if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
    mpfr_set(hi.get(), RealInterval(tb.bound, prec).hi(), MPFR_RNDU);
    RealInterval tail = RealInterval::from_mpfr(lo, hi);

    RealInterval prefix(1L, prec);
    for (long n = 1; n <= N; ++n)
        prefix = iv_mul(prefix, iv_pow(abs_value(inst.term(n).a, bits), M, prec), prec);
    RealInterval la = iv_log2(abs_value(inst.term(N - 1).a, bits), prec);
    la = iv_max(la, RealInterval(1L, prec));
    RealInterval slack = iv_exp2(
        iv_mul(RealInterval(Int(N * N), prec), iv_pow(la, c_exp, prec), prec), prec);
    return iv_mul(iv_mul(tail, prefix, prec), slack, prec);
}

// Replaces a_n by a_n c_n and r_n by c_n r_n on the first |c| terms and
// reorders so |a_n c_n| is nondecreasing; the Pi-mode floors are applied to
// the metadata of the transformed instance.
inline InstancePtr absorb_cn(const InstancePtr& inst, const std::vector<Int>& c, long bits = 96) {
    ExponentMeta meta = inst->meta();
    meta.y1 = std::max(meta.y1, Rat(1));
    meta.z1 = std::max(meta.z1, Rat(-1));
    meta.z2 = std::max(meta.z2, Rat(1));
    if (meta.z1 < -meta.y2)
        throw InputError("floor violation: z1 floor conflicts with y2 in Pi mode");

    long L = static_cast<long>(c.size());
    std::vector<Term> transformed;
    for (long n = 1; n <= L; ++n) {
        const Int& cn = c[static_cast<size_t>(n - 1)];
        if (cn < 1) throw InputError("absorb_cn needs positive integers");
        Term t = inst->term(n);
        t.a = t.a * cn;
        t.r = t.r * cn;
        transformed.push_back(std::move(t));
    }
    // sort by |a_n c_n| with certified comparisons
    std::vector<RealInterval> mags;
    mags.reserve(transformed.size());
    for (const auto& t : transformed) mags.push_back(abs_value(t.a, bits + 32));
    std::vector<size_t> order(transformed.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return mpfr_cmp(mags[i].mid().get(), mags[j].mid().get()) < 0;
    });
    for (size_t i = 0; i + 1 < order.size(); ++i) {
        Tri le = mags[order[i]].less_equal(mags[order[i + 1]]);
        if (le == Tri::False) throw DomainError("absorb_cn sort failed a certified comparison");
        if (le == Tri::Unknown) {
            RealInterval a = abs_value(transformed[order[i]].a, 4 * bits);
            RealInterval b = abs_value(transformed[order[i + 1]].a, 4 * bits);
            if (a.less_equal(b) != Tri::True)
                throw PrecisionExhausted("absorb_cn could not certify the reorder");
        }
    }
    // boundary: the last transformed magnitude must not pass the next base term
    if (L >= 1) {
        RealInterval next = abs_value(inst->term(L + 1).a, bits + 32);
        if (mags[order.back()].less_equal(next) != Tri::True)
            throw PrecisionExhausted(
                "absorb_cn: transformed prefix outgrows the tail; deeper reorder unsupported");
    }
    std::vector<Term> sorted;
    sorted.reserve(transformed.size());
    for (size_t i : order) sorted.push_back(transformed[i]);

    return SequenceInstance::with_overrides(inst, std::move(sorted), std::move(meta),
                                            inst->label() + "+cn");
}

// ---- finite height-exclusion certificates ----------------------------------

struct ExclusionCertificate {
    std::string instance_label;
    long N = 0;
    long bits = 0;
    long degree = 0;
    Rat H_max;
    Rat gap_upper;           // certified upper bound on |gamma - gamma_N|
    Rat height_chain_upper;  // certified upper bound on 2 H_max prod 2 H(a_n/b_n)
    Rat liouville_floor;     // certified lower bound on (2 height_chain)^{-degree}
    int e_side = +1;
    long strict_factor_index = 0;  // tail factor certified off 1
    std::string conclusion;
};

struct ExclusionNotFound : Error {
    using Error::Error;
};

// Attempts the certificate at one index. Soundness: if gamma were an element
// of K with H(gamma) <= H_max, then gamma != gamma_N (strict tail factor and
// one-sided moduli), so Liouville gives |gamma - gamma_N| >= liouville_floor,
// contradicting gap_upper < liouville_floor.
inline std::optional<ExclusionCertificate> exclusion_at(const SequenceInstance& inst, long N,
                                                        const Rat& H_max, long bits) {
    if (!inst.factor_side_structural())
        throw MonotonicityUnverified(inst.label() +
                                     ": exclusion needs the one-sided factor guarantee");
    ProductEnclosure pe = full_enclosure(inst, N, bits);
    long prec = bits + 32;

    // strictness witness: |1 + b_N/a_N| != 1 on the declared side
    Term tN = inst.term(N);
    ComplexInterval av = embed_value(tN.a, bits);
    ComplexInterval bv = embed_value(tN.b, bits);
    ComplexInterval factor = cv_add(ComplexInterval::from_rat(Rat(1), Rat(0), prec),
                                    cv_div(bv, av, prec), prec);
    RealInterval fm = cv_abs2(factor, prec);
    Tri strict = inst.meta().e > 0 ? RealInterval(1L, prec).less_than(fm)
                                   : fm.less_than(RealInterval(1L, prec));
    if (strict != Tri::True) return std::nullopt;

    RealInterval gap_up = iv_mul(RealInterval(pe.tail_sum, prec),
                                 RealInterval(pe.modulus_factor, prec), prec);

    // H(gamma - gamma_N) <= 2 H(gamma) H(gamma_N) with H(gamma) <= H_max.
    // H(gamma_N) is bounded two ways and the smaller is used: the exact
    // partial product's own height, and the per-term chain prod 2H(a_n/b_n).
    const FieldPtr& f = inst.field();
    OrderElement num = OrderElement::from_int(f, Int(1));
    OrderElement den = OrderElement::from_int(f, Int(1));
    RealInterval chain_terms(1L, prec);
    for (long n = 1; n < N; ++n) {
        Term t = inst.term(n);
        num = num * (t.a + t.b);
        den = den * t.a;
        FieldElement ratio = FieldElement(t.a) / FieldElement(t.b);
        chain_terms = iv_mul(chain_terms,
                             iv_mul(RealInterval(2L, prec), element_height(ratio, bits), prec),
                             prec);
    }
    FieldElement gammaN = FieldElement(num) / FieldElement(den);
    RealInterval h_gammaN = element_height(gammaN, bits);
    Mpfr hbest(prec);
    mpfr_min(hbest.get(), h_gammaN.hi(), chain_terms.hi(), MPFR_RNDU);
    RealInterval hgn = RealInterval::from_mpfr(hbest, hbest);
    RealInterval chain = iv_mul(iv_mul(RealInterval(2L, prec), RealInterval(H_max, prec), prec),
                                hgn, prec);
    long d = f->degree();
    RealInterval floor = iv_pow(iv_mul(RealInterval(2L, prec), chain, prec), Rat(-d), prec);

    ExclusionCertificate cert;
    cert.instance_label = inst.label();
    cert.N = N;
    cert.bits = bits;
    cert.degree = d;
    cert.H_max = H_max;
    cert.gap_upper = gap_up.hi_rat();
    cert.height_chain_upper = chain.hi_rat();
    cert.liouville_floor = floor.lo_rat();
    cert.e_side = inst.meta().e;
    cert.strict_factor_index = N;
    cert.conclusion = "gamma lies outside {alpha in K : H(alpha) <= " + H_max.get_str() + "}";
    if (cert.gap_upper < cert.liouville_floor) return cert;
    return std::nullopt;
}

inline ExclusionCertificate exclusion_certificate(const SequenceInstance& inst, const Rat& H_max,
                                                  long N_lo, long N_hi, long bits) {
    if (H_max < 1) throw InputError("H_max must be at least 1");
    for (long N = std::max(N_lo, 2L); N <= N_hi; ++N) {
        auto cert = exclusion_at(inst, N, H_max, bits);
        if (cert) return *cert;
    }
    throw ExclusionNotFound(
        "no exclusion certificate in the given index range; a larger N or smaller height cap "
        "may be needed");
}

// Re-validation of a stored certificate: re-derive at the stored index and
// verify the stored bounds stay on the safe side at (typically doubled)
// precision, plus the strict stored inequality itself.
inline bool recheck_exclusion(const SequenceInstance& inst, const ExclusionCertificate& cert,
                              long bits) {
    if (!(cert.gap_upper < cert.liouville_floor)) return false;
    if (cert.degree != inst.field()->degree()) return false;
    auto fresh = exclusion_at(inst, cert.N, cert.H_max, bits);
    if (!fresh) return false;
    // sharper bounds must confirm the stored ones
    if (!(fresh->gap_upper <= cert.gap_upper)) return false;
    if (!(fresh->liouville_floor >= cert.liouville_floor)) return false;
    return true;
}

}  // namespace prodcert
