#pragma once

#include "prodcert/criteria.hpp"

namespace prodcert {

// Catalog row: an instance together with the criterion invoked for it and
// the schedule constant quoted alongside its conclusion.
struct Fixture {
    std::string label;
    InstancePtr instance;
    CriterionId criterion;
    Mode mode;
    std::string claim;
    Rat quoted_schedule_base;
    long default_prefix = 8;
};

namespace fixtures_detail {

inline FieldPtr golden_field() {
    static FieldPtr f = NumberField::make(
        AlgebraicNumber::largest_real_root(IntPolynomial({Int(-1), Int(-1), Int(1)})));
    return f;
}
inline FieldPtr supergolden_field() {
    static FieldPtr f = NumberField::make(
        AlgebraicNumber::largest_real_root(IntPolynomial({Int(-1), Int(0), Int(-1), Int(1)})));
    return f;
}
inline FieldPtr cbrt2_field() {
    static FieldPtr f = NumberField::make(
        AlgebraicNumber::largest_real_root(IntPolynomial({Int(-2), Int(0), Int(0), Int(1)})));
    return f;
}

}  // namespace fixtures_detail

inline const std::vector<Fixture>& fixture_catalog() {
    static const std::vector<Fixture> rows = [] {
        using fixtures_detail::cbrt2_field;
        using fixtures_detail::golden_field;
        using fixtures_detail::supergolden_field;
        std::vector<Fixture> v;

        v.push_back({"ex3.1",
                     unit_power_instance(golden_field(),
                                         Schedule::formula(Rat(3), GrowthKind::linear),
                                         UnitPowerVariant::plain, "ex3.1"),
                     CriterionId::T2_ints, Mode::pi, "Pi_{Q(phi)}-irrational", Rat(3), 12});

        v.push_back({"ex3.2-phi-pi",
                     unit_power_instance(golden_field(),
                                         Schedule::formula(Rat(2), GrowthKind::log),
                                         UnitPowerVariant::integer_weighted, "ex3.2-phi-pi"),
                     CriterionId::T2_general, Mode::pi, "Pi_{Q(phi)}-irrational", Rat(2), 12});
        v.push_back({"ex3.2-psi-pi",
                     unit_power_instance(supergolden_field(),
                                         Schedule::formula(Rat(2), GrowthKind::log),
                                         UnitPowerVariant::integer_weighted, "ex3.2-psi-pi"),
                     CriterionId::T2_general, Mode::pi, "Pi_{Q(psi)}-irrational", Rat(2), 12});
        // the first term has h too small for inequality (7); certify the
        // shifted tail, which carries the same conclusion
        v.push_back({"ex3.2-phi-prod",
                     unit_power_instance(golden_field(),
                                         Schedule::formula(Rat(3, 2), GrowthKind::log),
                                         UnitPowerVariant::integer_weighted, "ex3.2-phi-prod")
                         ->shifted(1),
                     CriterionId::T2_general, Mode::single_product,
                     "prod (1 + F^{-1} phi^{-h}) outside Q(phi)", Rat(3, 2), 12});
        v.push_back({"ex3.2-psi-prod",
                     unit_power_instance(supergolden_field(),
                                         Schedule::formula(Rat(4, 3), GrowthKind::log),
                                         UnitPowerVariant::integer_weighted, "ex3.2-psi-prod"),
                     CriterionId::T2_general, Mode::single_product,
                     "prod (1 + Fhat^{-1} psi^{-h}) outside Q(psi)", Rat(4, 3), 12});

        v.push_back({"ex3.3",
                     cube_root_instance(cbrt2_field(),
                                        Schedule::formula(Rat(7), GrowthKind::log), {}, "ex3.3"),
                     CriterionId::T2_general, Mode::pi, "(Pi, Q(cbrt2))-irrational", Rat(7), 6});

        v.push_back({"ex3.4",
                     fib_ratio_instance(golden_field(),
                                        Schedule::formula(Rat(17, 4), GrowthKind::constant),
                                        "ex3.4"),
                     CriterionId::T3_trans, Mode::pi, "Pi-transcendental", Rat(17, 4), 10});

        v.push_back({"ex3.5",
                     unit_power_instance(golden_field(),
                                         Schedule::formula(Rat(17, 4), GrowthKind::constant),
                                         UnitPowerVariant::integer_weighted, "ex3.5"),
                     CriterionId::T4_trans, Mode::pi, "Pi-transcendental", Rat(17, 4), 10});

        v.push_back({"ex3.6-pi",
                     unit_power_instance(supergolden_field(),
                                         Schedule::formula(Rat(20, 3), GrowthKind::constant),
                                         UnitPowerVariant::plain, "ex3.6-pi"),
                     CriterionId::T4_trans, Mode::pi, "Pi-transcendental", Rat(20, 3), 6});
        v.push_back({"ex3.6-prod",
                     unit_power_instance(supergolden_field(),
                                         Schedule::formula(Rat(8, 3), GrowthKind::constant),
                                         UnitPowerVariant::plain, "ex3.6-prod"),
                     CriterionId::T4_trans, Mode::single_product,
                     "prod (1 + psi^{-h}) transcendental", Rat(8, 3), 12});

        v.push_back({"erdos",
                     pow2_instance(Schedule::formula(Rat(2), GrowthKind::linear), "erdos"),
                     CriterionId::T1_irr, Mode::pi, "Pi-irrational (Erdos degeneration)", Rat(2),
                     12});
        v.push_back({"dexp",
                     pow2_instance(Schedule::formula(Rat(7, 2), GrowthKind::constant), "dexp"),
                     CriterionId::T1_trans, Mode::pi, "Pi-transcendental", Rat(7, 2), 12});
        v.push_back({"dexp-neg",
                     pow2_instance(Schedule::formula(Rat(5, 2), GrowthKind::constant),
                                   "dexp-neg"),
                     CriterionId::T1_trans, Mode::pi, "negative control (below threshold)",
                     Rat(5, 2), 12});
        {
            std::vector<Int> hs;
            for (long i = 1; i <= 4200; ++i) hs.emplace_back(i);
            v.push_back({"geometric",
                         pow2_instance(Schedule::explicit_list(std::move(hs)), "geometric",
                                       Rat(1, 2)),
                         CriterionId::T1_irr, Mode::pi, "evaluation fixture (no growth claim)",
                         Rat(0), 12});
        }
        return v;
    }();
    return rows;
}

inline const Fixture& find_fixture(const std::string& label) {
    for (const auto& f : fixture_catalog()) {
        if (f.label == label) return f;
    }
    // bare ex3.2 and ex3.6 resolve to the single-product variants the text
    // works through
    if (label == "ex3.2") return find_fixture("ex3.2-phi-prod");
    if (label == "ex3.6") return find_fixture("ex3.6-prod");
    throw InputError("fixture not found: " + label);
}

}  // namespace prodcert
