#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "prodcert/number_field.hpp"
#include "prodcert/schedule.hpp"

namespace prodcert {

// u_n for the integer linear recurrence u_{k+m} = sum_i rec[i] u_{k+m-1-i},
// 1-based, via companion-matrix powers (fast enough for indices ~10^7).
inline Int linear_recurrence_term(const std::vector<Int>& rec, const std::vector<Int>& init,
                                  const Int& n) {
    size_t m = rec.size();
    if (init.size() != m || m == 0) throw InputError("recurrence order mismatch");
    if (n < 1) throw InputError("recurrence index must be positive");
    if (n <= Int(static_cast<long>(m))) return init[static_cast<size_t>(n.get_ui()) - 1];

    using Mat = std::vector<std::vector<Int>>;
    auto mat_mul = [m](const Mat& a, const Mat& b) {
        Mat r(m, std::vector<Int>(m, Int(0)));
        for (size_t i = 0; i < m; ++i)
            for (size_t k = 0; k < m; ++k) {
                if (a[i][k] == 0) continue;
                for (size_t j = 0; j < m; ++j) {
                    if (b[k][j] == 0) continue;
                    r[i][j] += a[i][k] * b[k][j];
                }
            }
        return r;
    };
    Mat comp(m, std::vector<Int>(m, Int(0)));
    for (size_t j = 0; j < m; ++j) comp[0][j] = rec[j];
    for (size_t i = 1; i < m; ++i) comp[i][i - 1] = 1;

    Int e = n - Int(static_cast<long>(m));
    Mat acc(m, std::vector<Int>(m, Int(0)));
    for (size_t i = 0; i < m; ++i) acc[i][i] = 1;
    Mat base = comp;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = mat_mul(acc, base);
        e >>= 1;
        if (e > 0) base = mat_mul(base, base);
    }
    // state vector (u_m, ..., u_1)
    Int out(0);
    for (size_t j = 0; j < m; ++j) out += acc[0][j] * init[m - 1 - j];
    return out;
}

inline Int fibonacci(const Int& n) {
    return linear_recurrence_term({Int(1), Int(1)}, {Int(1), Int(1)}, n);
}

inline Int supergolden_fib(const Int& n) {
    return linear_recurrence_term({Int(1), Int(0), Int(1)}, {Int(1), Int(1), Int(1)}, n);
}

// Declared exponent metadata for the hypothesis inequalities. All rationals;
// kappa2 is an accurate dyadic approximation of the base-2 growth slope
// log2|a_n| / h_n and kappa2_tol the declared two-sided consistency slack.
struct ExponentMeta {
    Rat epsilon = Rat(1);
    Rat alpha = Rat(1, 2);
    Rat beta = Rat(0);
    Rat y1 = Rat(1);
    Rat y2 = Rat(0);
    Rat z1 = Rat(0);
    Rat z2 = Rat(0);
    long d0 = 1;
    int e = +1;
    Rat kappa2 = Rat(1);
    Rat kappa2_tol = Rat(2);
};

struct Term {
    Int h;  // schedule exponent driving the term (0 when no schedule applies)
    OrderElement a, b;
    Int r;  // positive integer dividing a
};

enum class RRule { one, content, custom };

inline const char* to_string(RRule r) {
    switch (r) {
        case RRule::one:
            return "one";
        case RRule::content:
            return "content";
        default:
            return "custom";
    }
}

class SequenceInstance;
using InstancePtr = std::shared_ptr<const SequenceInstance>;

// A generator pair {a_n}, {b_n} with divisor rule, declared exponent
// metadata and growth schedule. Terms are exact order elements, generated
// on demand and cached; instances are immutable and freely shared.
class SequenceInstance : public std::enable_shared_from_this<SequenceInstance> {
  public:
    // builds a(n, h), b(n, h) at the 1-based shifted index
    using PairFn = std::function<std::pair<OrderElement, OrderElement>(long, const Int&)>;

    static InstancePtr make(std::string label, FieldPtr field, std::optional<Schedule> sched,
                            ExponentMeta meta, PairFn fn, RRule rrule,
                            std::vector<Int> r_custom = {}, long shift = 0,
                            bool a_integers = false, bool b_integers = false,
                            bool factor_side_structural = false,
                            std::vector<std::string> warnings = {}) {
        auto p = InstancePtr(new SequenceInstance());
        auto* s = const_cast<SequenceInstance*>(p.get());
        s->label_ = std::move(label);
        s->field_ = std::move(field);
        s->schedule_ = std::move(sched);
        s->meta_ = std::move(meta);
        s->fn_ = std::move(fn);
        s->rrule_ = rrule;
        s->r_custom_ = std::move(r_custom);
        s->shift_ = shift;
        s->a_integers_ = a_integers;
        s->b_integers_ = b_integers;
        s->factor_side_structural_ = factor_side_structural;
        s->warnings_ = std::move(warnings);
        return p;
    }

    const std::string& label() const { return label_; }
    const FieldPtr& field() const { return field_; }
    const ExponentMeta& meta() const { return meta_; }
    const std::optional<Schedule>& schedule() const { return schedule_; }
    long shift() const { return shift_; }
    RRule r_rule() const { return rrule_; }
    bool a_integers() const { return a_integers_; }
    bool b_integers() const { return b_integers_; }
    bool factor_side_structural() const { return factor_side_structural_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Shifted copy: term'(n) = term(n + extra_shift).
    InstancePtr shifted(long extra_shift) const {
        auto p = make(label_, field_, schedule_, meta_, fn_, rrule_, r_custom_,
                      shift_ + extra_shift, a_integers_, b_integers_, factor_side_structural_,
                      warnings_);
        return p;
    }

    // Copy with replaced metadata (declared exponents are instance contract,
    // so overriding them yields a distinct instance).
    static InstancePtr with_meta(const InstancePtr& base, ExponentMeta meta,
                                 std::optional<bool> structural = std::nullopt) {
        auto p = make(base->label_, base->field_, base->schedule_, std::move(meta), base->fn_,
                      base->rrule_, base->r_custom_, base->shift_, base->a_integers_,
                      base->b_integers_, structural.value_or(base->factor_side_structural_),
                      base->warnings_);
        const_cast<SequenceInstance*>(p.get())->overrides_ = base->overrides_;
        return p;
    }

    // Copy with the leading terms replaced (used by the c_n absorption
    // transform); indices beyond the override list fall through to the base
    // generator.
    static InstancePtr with_overrides(const InstancePtr& base, std::vector<Term> overrides,
                                      ExponentMeta meta, std::string label) {
        auto p = make(std::move(label), base->field_, base->schedule_, std::move(meta), base->fn_,
                      base->rrule_, base->r_custom_, base->shift_, base->a_integers_,
                      base->b_integers_, base->factor_side_structural_, base->warnings_);
        const_cast<SequenceInstance*>(p.get())->overrides_ = std::move(overrides);
        return p;
    }

    // Intersects the running enclosure of the full product with a fresh one;
    // every certified enclosure contains the same limit, so the intersection
    // is again a valid (and monotonically tightening) enclosure.
    ComplexInterval tighten_gamma(const ComplexInterval& fresh) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (!gamma_cache_) {
            gamma_cache_ = fresh;
        } else {
            gamma_cache_ = ComplexInterval{iv_intersect(gamma_cache_->re, fresh.re),
                                           iv_intersect(gamma_cache_->im, fresh.im)};
        }
        return *gamma_cache_;
    }

    Term term(long n) const {
        if (n < 1) throw InputError("term index must be positive");
        if (!overrides_.empty() && n <= static_cast<long>(overrides_.size()))
            return overrides_[static_cast<size_t>(n - 1)];
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(n);
            if (it != cache_.end()) return it->second;
        }
        long idx = n + shift_;
        Int h(0);
        if (schedule_) {
            std::lock_guard<std::mutex> lock(mu_);
            if (static_cast<long>(h_cache_.size()) < idx)
                h_cache_ = schedule_terms(*schedule_, idx);
            h = h_cache_[static_cast<size_t>(idx - 1)];
        }
        auto [a, b] = fn_(idx, h);
        if (a.is_zero() || b.is_zero())
            throw InputError(label_ + ": generated a zero term at n=" + std::to_string(n));
        Int r(1);
        switch (rrule_) {
            case RRule::one:
                break;
            case RRule::content:
                r = content_divisor(a);
                break;
            case RRule::custom:
                if (static_cast<size_t>(idx) > r_custom_.size())
                    throw InputError(label_ + ": custom r list exhausted at n=" + std::to_string(n));
                r = r_custom_[static_cast<size_t>(idx - 1)];
                if (r < 1 || !divides(r, a))
                    throw InputError(label_ + ": custom r does not divide a_n");
                break;
        }
        Term t{h, std::move(a), std::move(b), std::move(r)};
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(n, t);
        return t;
    }

  private:
    SequenceInstance() = default;
    std::string label_;
    FieldPtr field_;
    std::optional<Schedule> schedule_;
    ExponentMeta meta_;
    PairFn fn_;
    RRule rrule_ = RRule::one;
    std::vector<Int> r_custom_;
    long shift_ = 0;
    bool a_integers_ = false;
    bool b_integers_ = false;
    bool factor_side_structural_ = false;
    std::vector<std::string> warnings_;
    std::vector<Term> overrides_;
    mutable std::mutex mu_;
    mutable std::map<long, Term> cache_;
    mutable std::vector<Int> h_cache_;
    mutable std::optional<ComplexInterval> gamma_cache_;
};

// ---- instance families -----------------------------------------------------

enum class UnitPowerVariant { plain, integer_weighted };

namespace seq_detail {

inline Rat dyadic_log2(const RealInterval& x, long mant_bits = 60) {
    RealInterval l = iv_log2(x, mant_bits + 16);
    Mpfr m = l.mid();
    mpfr_prec_round(m.get(), mant_bits, MPFR_RNDN);
    Rat q;
    mpfr_get_q(q.get_mpq_t(), m.get());
    return q;
}

inline bool is_fibonacci_field(const IntPolynomial& m) {
    return m.coeffs() == std::vector<Int>{Int(-1), Int(-1), Int(1)};
}
inline bool is_supergolden_field(const IntPolynomial& m) {
    return m.coeffs() == std::vector<Int>{Int(-1), Int(0), Int(-1), Int(1)};
}

// Certified z with house(x^{-1}) = x^z for the supported unit shapes.
inline Rat certified_inverse_house_exponent(const FieldPtr& f) {
    const IntPolynomial& m = f->minpoly();
    if (abs(m.constant_term()) != 1) throw InputError("generator is not a unit (|norm| != 1)");
    if (!f->generator_real() || !f->generator().enclosure(64).re.is_positive() ||
        f->generator().enclosure(64).re.greater_equal(Rat(1)) != Tri::True)
        throw InputError("unit power instances need a real generator > 1");
    long d = f->degree();
    if (d == 2) return Rat(1);
    if (d == 3) {
        auto cs = conjugates(f->generator(), 64);
        int nreal = 0;
        for (bool r : cs.real) nreal += r ? 1 : 0;
        if (nreal == 1) return Rat(1, 2);
        throw InputError("totally real cubic units have no certified house exponent");
    }
    throw InputError("house exponent certification covers degrees 2 and 3 only");
}

// ceil(x^e) for the field generator x > 1 and rational e > 0; irrational
// powers make the ceiling decidable by refinement.
inline Int ceil_generator_power(const FieldPtr& f, const Rat& e, long cap_bits) {
    for (long prec = 96;; prec *= 2) {
        if (prec > cap_bits) throw PrecisionExhausted("integer weight ceiling undecided");
        long w = prec + 16;
        RealInterval b = cv_abs(f->generator().enclosure(prec), w);
        RealInterval v = iv_exp2(iv_mul(iv_log2(b, w), RealInterval(e, w), w), w);
        Int clo = ceil_rat(v.lo_rat());
        Int chi = ceil_rat(v.hi_rat());
        if (clo == chi) return clo;
    }
}

}  // namespace seq_detail

// a_n = x^{h_n} (plain) or a_n = w_n x^{h_n} with the paper's integer weights
// (F_{h} for the golden ratio, supergolden F-hat at ceil(h/2) for psi,
// ceil(x^{z h}) otherwise), b_n = 1.
inline InstancePtr unit_power_instance(const FieldPtr& f, const Schedule& sched,
                                       UnitPowerVariant variant, std::string label = {}) {
    Rat z = seq_detail::certified_inverse_house_exponent(f);
    long d = f->degree();
    ExponentMeta meta;
    meta.epsilon = Rat(1, 2);  // eases n^{1+eps} <= |a_n| on the first terms
    meta.alpha = Rat(1, 2);
    meta.beta = 0;
    meta.y1 = 1;
    meta.y2 = 0;
    meta.d0 = d;
    meta.e = +1;
    meta.kappa2_tol = Rat(2);
    RealInterval xval = cv_abs(f->generator().enclosure(96), 112);

    SequenceInstance::PairFn fn;
    RRule rrule;
    if (variant == UnitPowerVariant::plain) {
        meta.z1 = z;
        meta.z2 = 0;
        meta.kappa2 = seq_detail::dyadic_log2(xval);
        rrule = RRule::one;
        fn = [f](long, const Int& h) {
            OrderElement a = pow(OrderElement::generator(f), h.get_ui());
            return std::make_pair(a, OrderElement::from_int(f, Int(1)));
        };
    } else {
        meta.z1 = 0;
        meta.z2 = z / (1 + z);
        meta.kappa2 = seq_detail::dyadic_log2(xval) * (1 + z);
        rrule = RRule::content;
        bool fib = seq_detail::is_fibonacci_field(f->minpoly());
        bool sg = seq_detail::is_supergolden_field(f->minpoly());
        Rat zz = z;
        fn = [f, fib, sg, zz](long, const Int& h) {
            Int w;
            if (fib)
                w = fibonacci(h);
            else if (sg)
                w = supergolden_fib(Int((h + 1) / 2));
            else
                w = seq_detail::ceil_generator_power(f, zz * Rat(h), default_precision_cap());
            OrderElement a = pow(OrderElement::generator(f), h.get_ui()) * w;
            return std::make_pair(a, OrderElement::from_int(f, Int(1)));
        };
    }
    if (label.empty())
        label = std::string(variant == UnitPowerVariant::plain ? "unit-plain-" : "unit-weighted-") +
                f->minpoly().str();
    return SequenceInstance::make(std::move(label), f, sched, meta, std::move(fn), rrule, {}, 0,
                                  /*a_int=*/false, /*b_int=*/true,
                                  /*factor_side_structural=*/true);
}

// a_n = base^{h_n} + theta^n in Q(theta), theta = root_deg-th root of base;
// b_n from a supplied generator (default 1). The bounds 0 < b_n < 2^{h^alpha}
// and house(b_n) <= base^{h_n} are checked on a short prefix and reported,
// not enforced.
inline InstancePtr cube_root_instance(const FieldPtr& f, const Schedule& sched,
                                      std::function<OrderElement(long, const Int&)> b_gen = {},
                                      std::string label = {}) {
    long d = f->degree();
    // generator must be the real positive root of x^d - base
    const auto& c = f->minpoly().coeffs();
    for (size_t i = 1; i + 1 < c.size(); ++i)
        if (c[i] != 0) throw InputError("cube root instances need a pure power generator");
    Int base = -c.front();
    if (base < 2) throw InputError("cube root instances need x^d - m with m >= 2");

    ExponentMeta meta;
    meta.epsilon = 1;
    meta.alpha = Rat(1, 2);
    meta.beta = 0;
    meta.y1 = 1;
    meta.y2 = 1;
    meta.z1 = 0;
    meta.z2 = d;
    meta.d0 = d;
    meta.e = +1;
    meta.kappa2 = seq_detail::dyadic_log2(RealInterval(base, 96));
    meta.kappa2_tol = Rat(2);

    bool b_const_one = !b_gen;
    if (!b_gen)
        b_gen = [f](long, const Int&) { return OrderElement::from_int(f, Int(1)); };
    auto fn = [f, base, b_gen](long n, const Int& h) {
        OrderElement a = OrderElement::from_int(f, Int(1));
        {
            Int p2;
            mpz_pow_ui(p2.get_mpz_t(), base.get_mpz_t(), h.get_ui());
            OrderElement tn = pow(OrderElement::generator(f), static_cast<unsigned long>(n));
            a = OrderElement::from_int(f, p2) + tn;
        }
        return std::make_pair(a, b_gen(n, h));
    };
    if (label.empty()) label = "root-power-" + f->minpoly().str();

    // short-prefix diagnostic for the declared b bounds
    std::vector<std::string> warnings;
    if (!b_const_one) {
        try {
            auto hs = schedule_terms(sched, 4);
            for (long n = 1; n <= 4; ++n) {
                OrderElement b = b_gen(n, hs[static_cast<size_t>(n - 1)]);
                if (b.is_zero()) {
                    warnings.push_back("b-bound-violation: b_" + std::to_string(n) + " = 0");
                    continue;
                }
                RealInterval hb = house(b, 64);
                RealInterval cap = iv_pow(RealInterval(base, 96),
                                          Rat(hs[static_cast<size_t>(n - 1)]), 96);
                if (hb.less_equal(cap) == Tri::False)
                    warnings.push_back("b-bound-violation: house(b_" + std::to_string(n) +
                                       ") exceeds base^h");
            }
        } catch (const Error&) {
        }
    }
    return SequenceInstance::make(std::move(label), f, sched, meta, std::move(fn), RRule::one, {},
                                  0, false, b_const_one, b_const_one, std::move(warnings));
}

// d = 1 family: a_n = 2^{h_n}, b_n = 1, r_n = a_n.
inline InstancePtr pow2_instance(const Schedule& sched, std::string label = {},
                                 Rat eps = Rat(1)) {
    FieldPtr q = NumberField::rationals();
    ExponentMeta meta;
    meta.epsilon = eps;
    meta.alpha = Rat(1, 2);
    meta.beta = 0;
    meta.y1 = 1;
    meta.y2 = 0;
    meta.z1 = 0;
    meta.z2 = 1;
    meta.d0 = 1;
    meta.e = +1;
    meta.kappa2 = 1;
    meta.kappa2_tol = Rat(1, 64);
    auto fn = [q](long, const Int& h) {
        Int v;
        mpz_ui_pow_ui(v.get_mpz_t(), 2, h.get_ui());
        return std::make_pair(OrderElement::from_int(q, v), OrderElement::from_int(q, Int(1)));
    };
    if (label.empty()) label = "pow2";
    return SequenceInstance::make(std::move(label), q, sched, meta, std::move(fn), RRule::content,
                                  {}, 0, true, true, true);
}

// ex 3.4 style: a_n = F_{h_n} (a rational integer), b_n = 1 + phi^{-h_n}.
inline InstancePtr fib_ratio_instance(const FieldPtr& phi_field, const Schedule& sched,
                                      std::string label = {}) {
    if (!seq_detail::is_fibonacci_field(phi_field->minpoly()))
        throw InputError("fib ratio instance requires the golden ratio field");
    ExponentMeta meta;
    meta.epsilon = 1;
    meta.alpha = Rat(1, 2);
    meta.beta = 0;
    meta.y1 = 1;
    meta.y2 = 1;
    meta.z1 = 0;
    meta.z2 = 1;
    meta.d0 = 2;
    meta.e = +1;
    RealInterval phi_v = cv_abs(phi_field->generator().enclosure(96), 112);
    meta.kappa2 = seq_detail::dyadic_log2(phi_v);
    meta.kappa2_tol = Rat(2);
    auto fn = [phi_field](long, const Int& h) {
        OrderElement a = OrderElement::from_int(phi_field, fibonacci(h));
        // phi^{-1} = phi - 1 is a unit, so phi^{-h} stays in the order
        OrderElement invphi(phi_field, {Int(-1), Int(1)});
        OrderElement b = OrderElement::from_int(phi_field, Int(1)) + pow(invphi, h.get_ui());
        return std::make_pair(a, b);
    };
    if (label.empty()) label = "fib-ratio";
    return SequenceInstance::make(std::move(label), phi_field, sched, meta, std::move(fn),
                                  RRule::content, {}, 0, true, false, true);
}

}  // namespace prodcert
