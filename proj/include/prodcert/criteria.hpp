#pragma once

#include <array>
#include <map>

#include "prodcert/evalprod.hpp"

namespace prodcert {

enum class CriterionId { T1_irr, T1_trans, T2_general, T2_broad, T2_ints, T3_trans, T4_trans };
enum class Mode { pi, single_product };

inline const char* to_string(CriterionId c) {
    switch (c) {
        case CriterionId::T1_irr:
            return "T1-irr";
        case CriterionId::T1_trans:
            return "T1-trans";
        case CriterionId::T2_general:
            return "T2-general";
        case CriterionId::T2_broad:
            return "T2-broad";
        case CriterionId::T2_ints:
            return "T2-ints";
        case CriterionId::T3_trans:
            return "T3-trans";
        default:
            return "T4-trans";
    }
}

inline const char* to_string(Mode m) { return m == Mode::pi ? "pi" : "single"; }

inline std::optional<CriterionId> criterion_from_string(const std::string& s) {
    static const std::map<std::string, CriterionId> table = {
        {"T1-irr", CriterionId::T1_irr},         {"T1-trans", CriterionId::T1_trans},
        {"T2-general", CriterionId::T2_general}, {"T2-broad", CriterionId::T2_broad},
        {"T2-ints", CriterionId::T2_ints},       {"T3-trans", CriterionId::T3_trans},
        {"T4-trans", CriterionId::T4_trans},     {"T1", CriterionId::T1_irr},
        {"T2", CriterionId::T2_general},         {"T3", CriterionId::T3_trans},
        {"T4", CriterionId::T4_trans}};
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// True for criteria whose growth condition carries an existential delta; those
// certify only with a strict schedule margin.
inline bool has_delta_margin(CriterionId c) {
    return c == CriterionId::T1_trans || c == CriterionId::T3_trans ||
           c == CriterionId::T4_trans;
}

enum class IneqId {
    an_increases,  // (3)
    bn_bound,      // (4)
    ain_bounds,    // (5)
    bin_bounds,    // (6)
    eta1,          // (7)
    eta2,          // (8)
    real_seq,      // (9), sequence form
    real_prod      // product form
};

inline const char* to_string(IneqId id) {
    switch (id) {
        case IneqId::an_increases:
            return "an_increases";
        case IneqId::bn_bound:
            return "bn_bound";
        case IneqId::ain_bounds:
            return "ain_bounds";
        case IneqId::bin_bounds:
            return "bin_bounds";
        case IneqId::eta1:
            return "eta1";
        case IneqId::eta2:
            return "eta2";
        case IneqId::real_seq:
            return "real_seq";
        default:
            return "real_prod";
    }
}

constexpr std::array<IneqId, 8> kAllInequalities = {
    IneqId::an_increases, IneqId::bn_bound, IneqId::bin_bounds, IneqId::ain_bounds,
    IneqId::eta1,         IneqId::eta2,     IneqId::real_seq,   IneqId::real_prod};

struct PrefixReport {
    long n_max = 0;
    long bits = 0;
    std::map<IneqId, Tri> verdicts;
    std::optional<std::pair<IneqId, long>> first_failure;
    std::vector<std::pair<IneqId, long>> undecided;  // precision-exhausted indices
    long not_half_count = 0;
    Tri kappa_consistent = Tri::Unknown;
};

namespace criteria_detail {

// slack 2^{log2^alpha |a_n|}; the clamp at zero is sound whenever |a_n| >= 1,
// which inequality (3) checks separately.
inline RealInterval slack(const RealInterval& abs_a, const Rat& alpha, long prec) {
    RealInterval l = iv_log2(iv_max(abs_a, RealInterval(1L, prec)), prec);
    l = iv_max(l, RealInterval(0L, prec));
    return iv_exp2(iv_pow(l, alpha, prec), prec);
}

struct TermData {
    Term t;
    RealInterval abs_a, abs_b;
    RealInterval slack_n;
    ComplexInterval ratio_ab;  // a_n / b_n
};

inline TermData term_data(const SequenceInstance& inst, long n, long bits) {
    long prec = bits + 16;
    TermData d{inst.term(n), RealInterval(), RealInterval(), RealInterval(), ComplexInterval()};
    d.abs_a = abs_value(d.t.a, bits);
    d.abs_b = abs_value(d.t.b, bits);
    d.slack_n = slack(d.abs_a, inst.meta().alpha, prec);
    ComplexInterval av = embed_value(d.t.a, bits);
    ComplexInterval bv = embed_value(d.t.b, bits);
    d.ratio_ab = cv_div(av, bv, prec);
    return d;
}

inline Tri check_one(const SequenceInstance& inst, IneqId id, long n, long bits,
                     const std::optional<TermData>& next) {
    const ExponentMeta& m = inst.meta();
    long prec = bits + 16;
    TermData d = term_data(inst, n, bits);
    auto rhs_pow = [&](const Rat& expo) {
        return iv_mul(iv_pow(d.abs_a, expo, prec), d.slack_n, prec);
    };
    switch (id) {
        case IneqId::an_increases: {
            RealInterval npow = iv_pow(RealInterval(Int(n), prec), Rat(1) + m.epsilon, prec);
            Tri lower = npow.less_equal(d.abs_a);
            if (!next) return lower;
            return tri_and(lower, d.abs_a.less_equal(next->abs_a));
        }
        case IneqId::bn_bound:
            return d.abs_b.less_than(rhs_pow(m.beta));
        case IneqId::ain_bounds:
            return house(d.t.a, bits).less_equal(rhs_pow(m.y1));
        case IneqId::bin_bounds:
            return house(d.t.b, bits).less_equal(rhs_pow(m.y2));
        case IneqId::eta1:
            return house_of_inverse(d.t.a, bits).less_equal(rhs_pow(m.z1));
        case IneqId::eta2: {
            OrderElement u = divide_exact(d.t.a, d.t.r);
            Int lhs = d.t.r * abs(norm_own_field(u));
            return RealInterval(lhs, prec).less_equal(rhs_pow(m.z2));
        }
        case IneqId::real_seq:
            if (m.e > 0) return d.ratio_ab.re.greater_equal(Rat(0));
            return d.ratio_ab.re.less_equal(Rat(-1, 2));
        case IneqId::real_prod: {
            if (m.e > 0) return d.ratio_ab.re.greater_equal(Rat(-1, 2));
            return d.ratio_ab.re.less_equal(Rat(-1, 2));
        }
    }
    return Tri::Unknown;
}

inline Tri check_refined(const SequenceInstance& inst, IneqId id, long n, long bits,
                         long cap) {
    std::optional<TermData> next;
    if (id == IneqId::an_increases) {
        try {
            next = term_data(inst, n + 1, bits);
        } catch (const TermSizeLimit&) {
        }
    }
    for (long b = bits;; b *= 2) {
        Tri v = check_one(inst, id, n, b, next);
        if (v != Tri::Unknown) return v;
        if (b >= cap) return Tri::Unknown;
        if (next) next = term_data(inst, n + 1, b * 2);
    }
}

}  // namespace criteria_detail

// Rigorous three-valued verification of hypotheses (3)-(9) on n = 1..n_max.
inline PrefixReport check_prefix(const SequenceInstance& inst, long n_max, long bits = 96) {
    if (n_max < 2) throw InputError("prefix length must be at least 2");
    long cap = default_precision_cap();
    PrefixReport rep;
    rep.n_max = n_max;
    rep.bits = bits;
    for (IneqId id : kAllInequalities) rep.verdicts[id] = Tri::True;

    for (long n = 1; n <= n_max; ++n) {
        for (IneqId id : kAllInequalities) {
            Tri v = criteria_detail::check_refined(inst, id, n, bits, cap);
            if (v == Tri::False) {
                if (rep.verdicts[id] != Tri::False && !rep.first_failure)
                    rep.first_failure = {id, n};
                rep.verdicts[id] = Tri::False;
            } else if (v == Tri::Unknown) {
                rep.undecided.emplace_back(id, n);
                if (rep.verdicts[id] == Tri::True) rep.verdicts[id] = Tri::Unknown;
            }
        }
        // Re(a_n/b_n) != -1/2 count
        criteria_detail::TermData d = criteria_detail::term_data(inst, n, bits);
        if (d.ratio_ab.re.not_equal(Rat(-1, 2)) == Tri::True) ++rep.not_half_count;
    }

    // declared growth slope consistency: |log2|a_n| - kappa2 h_n| <= tol (1 + log2 h_n)
    if (inst.schedule()) {
        const ExponentMeta& m = inst.meta();
        Tri all = Tri::True;
        for (long n = 1; n <= n_max; ++n) {
            Term t = inst.term(n);
            if (t.h < 1) continue;
            long prec = bits + 16;
            RealInterval la = iv_log2(abs_value(t.a, bits), prec);
            RealInterval dev = iv_abs(
                iv_sub(la, iv_mul(RealInterval(m.kappa2, prec), RealInterval(t.h, prec), prec),
                       prec));
            RealInterval tol = iv_mul(
                RealInterval(m.kappa2_tol, prec),
                iv_add(RealInterval(1L, prec), iv_log2(RealInterval(t.h, prec), prec), prec),
                prec);
            all = tri_and(all, dev.less_equal(tol));
        }
        rep.kappa_consistent = all;
    }
    return rep;
}

// ---- threshold engine -------------------------------------------------------

// Metadata describing what is structurally known about integrality.
struct IntegralityFlags {
    bool a_integers = false;
    bool b_integers = false;
};

// The exact growth base B for a criterion over a field of degree d: the
// theorem certifies its conclusion when limsup |a_n|^{B'^{-n}} diverges for
// B' = B (delta-free criteria) or any B' > B (delta criteria). Pi mode first
// applies the substitution floors y1 -> max(y1,1), z1 -> max(z1,-1),
// z2 -> max(z2,1); single-product mode keeps z2 >= 0 as declared.
inline Rat required_base(CriterionId crit, long d, const ExponentMeta& meta, Mode mode,
                         IntegralityFlags flags = {}) {
    const Rat& beta = meta.beta;
    if (d < 1) throw InputError("field degree must be positive");
    if (meta.epsilon <= 0) throw InputError("epsilon must be positive");
    if (meta.alpha <= 0 || meta.alpha >= 1) throw InputError("alpha must lie in (0,1)");
    if (beta < 0 || beta >= meta.epsilon / (1 + meta.epsilon))
        throw InputError("beta out of range [0, eps/(1+eps))");
    if (meta.y1 < 1) throw InputError("y1 must be at least 1");
    if (meta.y2 < beta) throw InputError("y2 must be at least beta");
    if (meta.z1 < -meta.y2) throw InputError("z1 must be at least -y2");
    if (meta.z2 < 0) throw InputError("z2 must be nonnegative");
    if (meta.d0 < 1) throw InputError("d0 must be positive");
    if (crit == CriterionId::T3_trans && meta.y2 < 1)
        throw InputError("T3 requires y2 >= 1");
    if ((crit == CriterionId::T1_irr || crit == CriterionId::T1_trans) &&
        !(flags.a_integers && flags.b_integers))
        throw InputError("T1 requires rational integer sequences");
    if (crit == CriterionId::T3_trans && !flags.a_integers)
        throw InputError("T3 requires a_n in Z");
    if (crit == CriterionId::T2_ints && !(flags.a_integers || flags.b_integers))
        throw InputError("T2-ints requires a_n in Z or b_n in Z at every index");

    Rat y1 = meta.y1, y2 = meta.y2, z1 = meta.z1, z2 = meta.z2;
    if (mode == Mode::pi) {
        y1 = std::max(y1, Rat(1));
        z1 = std::max(z1, Rat(-1));
        z2 = std::max(z2, Rat(1));
    }
    Rat inv1b = Rat(1) / (Rat(1) - beta);
    Rat dd(d);
    switch (crit) {
        case CriterionId::T1_irr:
            return inv1b + 1;
        case CriterionId::T1_trans:
            return Rat(2) * inv1b + 1;
        case CriterionId::T2_general:
            return dd * (y2 + z1 + z2 / Rat(meta.d0)) * inv1b + 1;
        case CriterionId::T2_broad:
            return dd * (y1 + y2) * inv1b + 1;
        case CriterionId::T2_ints:
            return dd * std::max(y1, y2) * inv1b + 1;
        case CriterionId::T3_trans:
            return (dd * y2 + 1) * inv1b + 1;
        case CriterionId::T4_trans:
            return (dd * (y2 + z1 + z2) + z2) * inv1b + 1;
    }
    throw InputError("unknown criterion");
}

// Inequalities a criterion relies on; the broad/ints conditions may skip
// (7)-(8) and the general condition may skip (5).
inline std::vector<IneqId> applicable_inequalities(CriterionId crit, Mode mode) {
    IneqId real = mode == Mode::pi ? IneqId::real_seq : IneqId::real_prod;
    switch (crit) {
        case CriterionId::T1_irr:
        case CriterionId::T1_trans:
            return {IneqId::an_increases, IneqId::bn_bound, IneqId::real_prod};
        case CriterionId::T2_general:
            return {IneqId::an_increases, IneqId::bn_bound, IneqId::bin_bounds, IneqId::eta1,
                    IneqId::eta2,         real};
        case CriterionId::T2_broad:
        case CriterionId::T2_ints:
            return {IneqId::an_increases, IneqId::bn_bound, IneqId::ain_bounds,
                    IneqId::bin_bounds,   real};
        case CriterionId::T3_trans:
            // stated with the product-form real condition in either mode
            return {IneqId::an_increases, IneqId::bn_bound, IneqId::bin_bounds,
                    IneqId::real_prod};
        case CriterionId::T4_trans:
            return {IneqId::an_increases, IneqId::bn_bound, IneqId::bin_bounds, IneqId::eta1,
                    IneqId::eta2,         real};
    }
    return {};
}

enum class CertifyStatus { certified, inconclusive, hypotheses_violated, undecidable };

inline const char* to_string(CertifyStatus s) {
    switch (s) {
        case CertifyStatus::certified:
            return "certified";
        case CertifyStatus::inconclusive:
            return "inconclusive";
        case CertifyStatus::hypotheses_violated:
            return "hypotheses_violated";
        default:
            return "undecidable-at-precision";
    }
}

struct CriterionVerdict {
    std::string instance_label;
    CriterionId criterion = CriterionId::T2_general;
    Mode mode = Mode::single_product;
    Rat base_B;
    Rat schedule_C;  // 0 for explicit schedules
    Rat margin;      // schedule_C - base_B
    bool g_unbounded = false;
    PrefixReport prefix;
    CertifyStatus status = CertifyStatus::inconclusive;
    std::vector<std::string> notes;
};

// Combines the prefix check with the threshold comparison. The limsup
// hypothesis is certified structurally: positive growth slope kappa2 plus a
// formula schedule with C > B, or C = B with unbounded g for delta-free
// criteria.
inline CriterionVerdict certify(const SequenceInstance& inst, CriterionId crit, Mode mode,
                                long n_max, long bits = 96) {
    CriterionVerdict v;
    v.instance_label = inst.label();
    v.criterion = crit;
    v.mode = mode;
    IntegralityFlags flags{inst.a_integers(), inst.b_integers()};
    v.base_B = required_base(crit, inst.field()->degree(), inst.meta(), mode, flags);
    v.prefix = check_prefix(inst, n_max, bits);

    bool violated = false, undecided = false;
    for (IneqId id : applicable_inequalities(crit, mode)) {
        Tri t = v.prefix.verdicts.at(id);
        if (t == Tri::False) {
            violated = true;
            v.notes.push_back(std::string("hypothesis ") + to_string(id) +
                              " fails on the checked prefix");
        } else if (t == Tri::Unknown) {
            undecided = true;
            v.notes.push_back(std::string("hypothesis ") + to_string(id) +
                              " undecided at the precision cap");
        }
    }
    if (crit == CriterionId::T3_trans)
        v.notes.push_back(std::string("real-part sequence form reported separately: ") +
                          to_string(v.prefix.verdicts.at(IneqId::real_seq)));
    if (v.prefix.kappa_consistent == Tri::False) {
        violated = true;
        v.notes.push_back("declared growth slope kappa2 inconsistent with the prefix");
    }
    if (v.prefix.not_half_count == 0)
        v.notes.push_back("no prefix index certifies Re(a_n/b_n) != -1/2");

    bool growth_ok = false;
    if (inst.schedule() && !inst.schedule()->is_explicit() && inst.meta().kappa2 > 0) {
        v.schedule_C = inst.schedule()->C;
        v.g_unbounded = inst.schedule()->g_unbounded();
        v.margin = v.schedule_C - v.base_B;
        if (v.margin > 0)
            growth_ok = true;
        else if (v.margin == 0 && v.g_unbounded && !has_delta_margin(crit))
            growth_ok = true;
    } else {
        v.notes.push_back("no formula schedule: the limsup growth condition is not certified");
    }
    if (!inst.factor_side_structural())
        v.notes.push_back("tail real-part side is not structurally guaranteed by the generator");

    if (violated)
        v.status = CertifyStatus::hypotheses_violated;
    else if (undecided)
        v.status = CertifyStatus::undecidable;
    else if (growth_ok && inst.factor_side_structural() && v.prefix.not_half_count > 0 &&
             v.prefix.kappa_consistent != Tri::False)
        v.status = CertifyStatus::certified;
    else
        v.status = CertifyStatus::inconclusive;
    return v;
}

// Diagnostic least-squares fits of the exponents against log|a_n|;
// never overrides declarations.
struct EmpiricalExponents {
    double beta_hat = 0, y1_hat = 0, y2_hat = 0, z1_hat = 0, z2_hat = 0, kappa_hat = 0;
    std::vector<std::string> warnings;
};

inline EmpiricalExponents estimate_exponents(const SequenceInstance& inst, long n_max,
                                             long bits = 96) {
    if (n_max < 4) throw InputError("exponent estimation needs n_max >= 4");
    std::vector<double> la, lh_a, lh_b, lh_inv, l_rn, lb, hs;
    for (long n = 1; n <= n_max; ++n) {
        Term t = inst.term(n);
        la.push_back(mpfr_get_d(iv_log2(abs_value(t.a, bits), bits).mid().get(), MPFR_RNDN));
        lh_a.push_back(mpfr_get_d(iv_log2(house(t.a, bits), bits).mid().get(), MPFR_RNDN));
        lh_b.push_back(mpfr_get_d(iv_log2(house(t.b, bits), bits).mid().get(), MPFR_RNDN));
        lh_inv.push_back(
            mpfr_get_d(iv_log2(house_of_inverse(t.a, bits), bits).mid().get(), MPFR_RNDN));
        OrderElement u = divide_exact(t.a, t.r);
        Int rn = t.r * abs(norm_own_field(u));
        l_rn.push_back(mpfr_get_d(iv_log2(RealInterval(rn, bits), bits).mid().get(), MPFR_RNDN));
        lb.push_back(mpfr_get_d(iv_log2(abs_value(t.b, bits), bits).mid().get(), MPFR_RNDN));
        hs.push_back(t.h > 0 ? t.h.get_d() : 0.0);
    }
    auto slope = [&](const std::vector<double>& y, const std::vector<double>& x) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t n = x.size();
        for (size_t i = 0; i < n; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        double den = n * sxx - sx * sx;
        return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
    };
    EmpiricalExponents e;
    e.beta_hat = slope(lb, la);
    e.y1_hat = slope(lh_a, la);
    e.y2_hat = slope(lh_b, la);
    e.z1_hat = slope(lh_inv, la);
    e.z2_hat = slope(l_rn, la);
    e.kappa_hat = slope(la, hs) * 0.6931471805599453;  // natural-log slope

    const ExponentMeta& m = inst.meta();
    double slack_exp = std::pow(std::max(la.back(), 2.0), m.alpha.get_d() - 1.0) + 0.05;
    auto warn = [&](const char* name, double hat, const Rat& declared) {
        if (hat > declared.get_d() + slack_exp)
            e.warnings.push_back(std::string(name) + " empirical " + std::to_string(hat) +
                                 " exceeds declared " + declared.get_str() + " beyond the slack");
    };
    warn("beta", e.beta_hat, m.beta);
    warn("y1", e.y1_hat, m.y1);
    warn("y2", e.y2_hat, m.y2);
    warn("z1", e.z1_hat, m.z1);
    warn("z2", e.z2_hat, m.z2);
    return e;
}

}  // namespace prodcert
