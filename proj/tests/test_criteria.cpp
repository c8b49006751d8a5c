#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "prodcert/fixtures.hpp"

using namespace prodcert;

namespace {

const Fixture& fx(const std::string& label) { return find_fixture(label); }

ExponentMeta meta_of(const std::string& label) { return fx(label).instance->meta(); }

IntegralityFlags flags_of(const std::string& label) {
    return {fx(label).instance->a_integers(), fx(label).instance->b_integers()};
}

}  // namespace

TEST_CASE("threshold table matches the worked examples exactly") {
    // phi weighted units, single product: B = 2(0 + 0 + (1/2)/2) + 1 = 3/2
    CHECK(required_base(CriterionId::T2_general, 2, meta_of("ex3.2-phi-prod"),
                        Mode::single_product, flags_of("ex3.2-phi-prod")) == Rat(3, 2));
    // psi weighted units: B = 3(0 + 0 + (1/3)/3) + 1 = 4/3
    CHECK(required_base(CriterionId::T2_general, 3, meta_of("ex3.2-psi-prod"),
                        Mode::single_product, flags_of("ex3.2-psi-prod")) == Rat(4, 3));
    // phi weighted units, Pi transcendence with floors: B = (2(0+0+1)+1)+1 = 4
    CHECK(required_base(CriterionId::T4_trans, 2, meta_of("ex3.5"), Mode::pi,
                        flags_of("ex3.5")) == Rat(4));
    // psi plain units, Pi transcendence: B = (3(0+1/2+1)+1)+1 = 13/2
    CHECK(required_base(CriterionId::T4_trans, 3, meta_of("ex3.6-pi"), Mode::pi,
                        flags_of("ex3.6-pi")) == Rat(13, 2));
    // psi plain units, fixed product: B = (3(0+1/2+0)+0)+1 = 5/2
    CHECK(required_base(CriterionId::T4_trans, 3, meta_of("ex3.6-prod"), Mode::single_product,
                        flags_of("ex3.6-prod")) == Rat(5, 2));
    // Erdos degeneration: d = 1, beta = 0 gives 2
    CHECK(required_base(CriterionId::T1_irr, 1, meta_of("erdos"), Mode::pi, flags_of("erdos")) ==
          Rat(2));
    // plain phi units under the integer condition: B = 2 max(1,0) + 1 = 3
    CHECK(required_base(CriterionId::T2_ints, 2, meta_of("ex3.1"), Mode::pi, flags_of("ex3.1")) ==
          Rat(3));
    // cube-root family: B = 3(1 + 0 + 3/3) + 1 = 7 = 2d+1
    CHECK(required_base(CriterionId::T2_general, 3, meta_of("ex3.3"), Mode::pi,
                        flags_of("ex3.3")) == Rat(7));
    // simple transcendence: B = (2*1 + 1) + 1 = 4
    CHECK(required_base(CriterionId::T3_trans, 2, meta_of("ex3.4"), Mode::pi, flags_of("ex3.4")) ==
          Rat(4));
}

TEST_CASE("every fixture threshold sits at or below the quoted schedule constant") {
    for (const auto& f : fixture_catalog()) {
        if (f.quoted_schedule_base == 0) continue;  // evaluation-only fixture
        if (f.label == "dexp-neg") continue;        // deliberate negative control
        Rat B = required_base(f.criterion, f.instance->field()->degree(), f.instance->meta(),
                              f.mode, {f.instance->a_integers(), f.instance->b_integers()});
        CHECK(B <= f.quoted_schedule_base);
    }
}

TEST_CASE("required base is monotone in the exponent metadata") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<long> num(0, 8), den(1, 4), dd(1, 5);
    auto rnd_meta = [&]() {
        ExponentMeta m;
        m.epsilon = Rat(2);
        m.alpha = Rat(1, 2);
        m.beta = Rat(num(rng), 24);  // < eps/(1+eps) = 2/3
        m.y1 = Rat(1) + Rat(num(rng), den(rng));
        m.y2 = m.beta + Rat(1, 50) + Rat(num(rng), den(rng));  // slack keeps beta bumps valid
        m.z1 = Rat(num(rng), den(rng)) - std::min(m.y2, Rat(1));
        m.z2 = Rat(num(rng), den(rng));
        m.d0 = dd(rng);
        return m;
    };
    IntegralityFlags both{true, true};
    for (int i = 0; i < 200; ++i) {
        ExponentMeta m = rnd_meta();
        long d = dd(rng);
        for (auto crit : {CriterionId::T2_general, CriterionId::T2_broad, CriterionId::T2_ints,
                          CriterionId::T4_trans}) {
            Rat b0 = required_base(crit, d, m, Mode::single_product, both);

            ExponentMeta up = m;
            up.y2 += Rat(1, 3);
            CHECK(required_base(crit, d, up, Mode::single_product, both) >= b0);
            up = m;
            up.z2 += Rat(1, 2);
            CHECK(required_base(crit, d, up, Mode::single_product, both) >= b0);
            up = m;
            up.y1 += Rat(1);
            CHECK(required_base(crit, d, up, Mode::single_product, both) >= b0);
            up = m;
            up.z1 += Rat(1, 4);
            CHECK(required_base(crit, d, up, Mode::single_product, both) >= b0);
            up = m;
            up.beta += Rat(1, 100);
            CHECK(required_base(crit, d, up, Mode::single_product, both) >= b0);
            CHECK(required_base(crit, d + 1, m, Mode::single_product, both) >= b0);
            if (m.d0 > 1) {
                up = m;
                up.d0 -= 1;
                CHECK(required_base(crit, d, up, Mode::single_product, both) >= b0);
            }
            // Pi floors never lower the threshold
            CHECK(required_base(crit, d, m, Mode::pi, both) >= b0);
        }
    }
}

TEST_CASE("required base rejects out-of-range parameters") {
    ExponentMeta m = meta_of("ex3.5");
    m.beta = Rat(2, 3);  // >= eps/(1+eps) = 1/2
    CHECK_THROWS_AS(required_base(CriterionId::T2_general, 2, m, Mode::pi, {false, true}),
                    InputError);
    m = meta_of("ex3.5");
    m.y1 = Rat(1, 2);
    CHECK_THROWS_AS(required_base(CriterionId::T2_general, 2, m, Mode::pi, {false, true}),
                    InputError);
    // T1 on non-integer sequences
    CHECK_THROWS_AS(
        required_base(CriterionId::T1_irr, 2, meta_of("ex3.5"), Mode::pi, {false, false}),
        InputError);
}

TEST_CASE("check_prefix on the weighted phi instance") {
    const auto& f = fx("ex3.2-phi-prod");
    PrefixReport rep = check_prefix(*f.instance, 12, 96);
    CHECK(rep.verdicts.at(IneqId::an_increases) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::bn_bound) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::bin_bounds) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::eta1) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::eta2) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::real_seq) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::real_prod) == Tri::True);
    CHECK(rep.verdicts.at(IneqId::ain_bounds) == Tri::True);  // y1 = 1 also holds
    CHECK(rep.not_half_count == 12);
    CHECK(!rep.first_failure.has_value());
    CHECK(rep.kappa_consistent == Tri::True);
    CHECK(rep.undecided.empty());
}

TEST_CASE("check_prefix flags a forced violation with its first index") {
    // b_n = a_n violates (4) once |a_n| exceeds the slack
    FieldPtr q = NumberField::rationals();
    ExponentMeta meta;
    meta.epsilon = 1;
    meta.beta = 0;
    meta.alpha = Rat(1, 2);
    meta.d0 = 1;
    meta.z2 = 1;
    meta.kappa2 = 1;
    meta.kappa2_tol = Rat(1, 16);
    auto fn = [q](long, const Int& h) {
        Int v;
        mpz_ui_pow_ui(v.get_mpz_t(), 2, h.get_ui());
        OrderElement a = OrderElement::from_int(q, v);
        return std::make_pair(a, a);
    };
    auto inst = SequenceInstance::make("b-equals-a", q,
                                       Schedule::formula(Rat(2), GrowthKind::constant), meta, fn,
                                       RRule::content, {}, 0, true, true, true);
    PrefixReport rep = check_prefix(*inst, 6, 96);
    CHECK(rep.verdicts.at(IneqId::bn_bound) == Tri::False);
    REQUIRE(rep.first_failure.has_value());
    CHECK(rep.first_failure->first == IneqId::bn_bound);
    CHECK(rep.first_failure->second >= 1);
}

TEST_CASE("certify reproduces the worked conclusions") {
    // margin 0 with unbounded g on a delta-free criterion: certified
    {
        const auto& f = fx("ex3.2-phi-prod");
        CriterionVerdict v = certify(*f.instance, f.criterion, f.mode, 12, 96);
        CHECK(v.status == CertifyStatus::certified);
        CHECK(v.base_B == Rat(3, 2));
        CHECK(v.margin == 0);
        CHECK(v.g_unbounded);
    }
    // same instance below the threshold: the theorem is silent
    {
        auto slow = unit_power_instance(fixtures_detail::golden_field(),
                                        Schedule::formula(Rat(10, 7), GrowthKind::log),
                                        UnitPowerVariant::integer_weighted, "slow")
                        ->shifted(1);
        CriterionVerdict v = certify(*slow, CriterionId::T2_general, Mode::single_product, 10, 96);
        CHECK(v.status == CertifyStatus::inconclusive);
        CHECK(v.margin < 0);
    }
    // strict margin for a delta criterion: ex3.5 at C = 17/4 > B = 4
    {
        const auto& f = fx("ex3.5");
        CriterionVerdict v = certify(*f.instance, f.criterion, f.mode, 8, 96);
        CHECK(v.status == CertifyStatus::certified);
        CHECK(v.base_B == Rat(4));
        CHECK(v.margin == Rat(1, 4));
    }
    // delta criterion at margin 0 must NOT certify even with unbounded g
    {
        auto edge = unit_power_instance(fixtures_detail::golden_field(),
                                        Schedule::formula(Rat(4), GrowthKind::log),
                                        UnitPowerVariant::integer_weighted, "edge");
        CriterionVerdict v = certify(*edge, CriterionId::T4_trans, Mode::pi, 8, 96);
        CHECK(v.status == CertifyStatus::inconclusive);
        CHECK(v.margin == 0);
    }
    // negative control
    {
        const auto& f = fx("dexp-neg");
        CriterionVerdict v = certify(*f.instance, f.criterion, f.mode, 8, 96);
        CHECK(v.status == CertifyStatus::inconclusive);
    }
    // Erdos degeneration certifies at margin 0 with g = linear
    {
        const auto& f = fx("erdos");
        CriterionVerdict v = certify(*f.instance, f.criterion, f.mode, 10, 96);
        CHECK(v.status == CertifyStatus::certified);
    }
}

TEST_CASE("certify is deterministic") {
    const auto& f = fx("ex3.6-prod");
    CriterionVerdict a = certify(*f.instance, f.criterion, f.mode, 8, 96);
    CriterionVerdict b = certify(*f.instance, f.criterion, f.mode, 8, 96);
    CHECK(a.status == b.status);
    CHECK(a.base_B == b.base_B);
    CHECK(a.margin == b.margin);
    CHECK(a.prefix.not_half_count == b.prefix.not_half_count);
}

TEST_CASE("every certified fixture reproduces its claim") {
    for (const auto& f : fixture_catalog()) {
        if (f.quoted_schedule_base == 0 || f.label == "dexp-neg") continue;
        CriterionVerdict v =
            certify(*f.instance, f.criterion, f.mode, std::min(f.default_prefix, 8L), 96);
        INFO(f.label);
        CHECK(v.status == CertifyStatus::certified);
    }
}

TEST_CASE("exponent estimates match the structural slopes") {
    // phi plain: z1 -> 1, kappa -> log phi
    {
        const auto& f = fx("ex3.1");
        EmpiricalExponents e = estimate_exponents(*f.instance, 8, 96);
        CHECK(std::abs(e.z1_hat - 1.0) < 0.05);
        CHECK(std::abs(e.kappa_hat - 0.4812118250596035) < 0.01);
        CHECK(std::abs(e.y1_hat - 1.0) < 0.05);
    }
    // psi plain: z1 -> 1/2
    {
        const auto& f = fx("ex3.6-prod");
        EmpiricalExponents e = estimate_exponents(*f.instance, 8, 96);
        CHECK(std::abs(e.z1_hat - 0.5) < 0.05);
    }
    // rational a_n = n^2 + 1: y1 = 1, z2 = 1
    {
        FieldPtr q = NumberField::rationals();
        ExponentMeta meta;
        meta.epsilon = Rat(1, 2);
        meta.beta = 0;
        meta.alpha = Rat(1, 2);
        meta.d0 = 1;
        meta.z2 = 1;
        auto fn = [q](long n, const Int&) {
            return std::make_pair(OrderElement::from_int(q, Int(n * n + 1)),
                                  OrderElement::from_int(q, Int(1)));
        };
        auto inst = SequenceInstance::make("n2p1", q, std::nullopt, meta, fn, RRule::content, {},
                                           0, true, true, true);
        EmpiricalExponents e = estimate_exponents(*inst, 24, 96);
        CHECK(std::abs(e.y1_hat - 1.0) < 0.02);
        CHECK(std::abs(e.z2_hat - 1.0) < 0.02);
    }
    // a declared exponent that is too small triggers a warning
    {
        const auto& f = fx("ex3.1");
        auto lying = SequenceInstance::make(
            "lying", f.instance->field(), f.instance->schedule(),
            [&] {
                ExponentMeta m = f.instance->meta();
                m.z1 = 0;  // house(a^{-1}) really grows like |a|^1
                return m;
            }(),
            [inst = f.instance](long n, const Int&) {
                Term t = inst->term(n);
                return std::make_pair(t.a, t.b);
            },
            RRule::one, {}, 0, false, true, true);
        EmpiricalExponents e = estimate_exponents(*lying, 8, 96);
        CHECK(!e.warnings.empty());
    }
}
