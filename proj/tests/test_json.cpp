#include <catch2/catch_amalgamated.hpp>

#include "prodcert/json_io.hpp"

using namespace prodcert;

TEST_CASE("algebraic numbers round trip through JSON") {
    auto psi = AlgebraicNumber::largest_real_root(IntPolynomial({Int(-1), Int(0), Int(-1), Int(1)}));
    json j = algebraic_number_json(psi);
    CHECK(j.at("minpoly").size() == 4);
    AlgebraicNumber back = algebraic_number_from_json(j);
    CHECK(back.minpoly() == psi.minpoly());
    CHECK(back.root_box().overlaps(psi.root_box()));
    CHECK(back.is_real());

    auto r = AlgebraicNumber::from_rational(Rat(-7, 3));
    AlgebraicNumber r2 = algebraic_number_from_json(algebraic_number_json(r));
    CHECK(r2.rational_value() == Rat(-7, 3));
}

TEST_CASE("field shorthands") {
    CHECK(field_from_json(json("phi"))->degree() == 2);
    CHECK(field_from_json(json("psi"))->degree() == 3);
    CHECK(field_from_json(json("cbrt2"))->degree() == 3);
    CHECK(field_from_json(json("Q"))->degree() == 1);
    CHECK_THROWS_AS(field_from_json(json("octonions")), InputError);
}

TEST_CASE("meta and schedule round trips") {
    ExponentMeta m;
    m.epsilon = Rat(1, 2);
    m.z2 = Rat(1, 3);
    m.d0 = 3;
    m.e = -1;
    ExponentMeta back = meta_from_json(meta_json(m));
    CHECK(back.epsilon == m.epsilon);
    CHECK(back.z2 == m.z2);
    CHECK(back.d0 == 3);
    CHECK(back.e == -1);

    Schedule s = Schedule::formula(Rat(17, 4), GrowthKind::log, 3);
    Schedule sb = schedule_from_json(schedule_json(s));
    CHECK(sb.C == s.C);
    CHECK(sb.g == s.g);
    CHECK(sb.start == 3);

    Schedule ex = Schedule::explicit_list({Int(2), Int(5), Int(9)}, {2, 3});
    Schedule exb = schedule_from_json(schedule_json(ex));
    CHECK(exb.explicit_terms == ex.explicit_terms);
    CHECK(exb.witness_indices == ex.witness_indices);
}

TEST_CASE("instances load from descriptions and fixture references") {
    json desc{{"label", "user-phi"},
              {"field", "phi"},
              {"a", json{{"kind", "unit_power"}, {"variant", "integer_weighted"}}},
              {"schedule", json{{"C", "17/4"}, {"g", "const"}}}};
    InstancePtr inst = instance_from_json(desc);
    CHECK(inst->label() == "user-phi");
    CHECK(inst->meta().z2 == Rat(1, 2));
    CHECK(inst->term(1).h == 5);

    InstancePtr fx = instance_from_json(json{{"fixture", "ex3.5"}});
    CHECK(fx->label() == "ex3.5");

    // meta override replaces the declared exponents but keeps the generator
    json desc2 = desc;
    desc2["meta"] = json{{"z2", "1"}};
    InstancePtr overridden = instance_from_json(desc2);
    CHECK(overridden->meta().z2 == Rat(1));
    CHECK(overridden->term(2).a == inst->term(2).a);
    CHECK(overridden->term(2).r == inst->term(2).r);
}

TEST_CASE("certificates round trip and canonical dumps are stable") {
    const Fixture& f = find_fixture("dexp");
    ExclusionCertificate cert = exclusion_certificate(*f.instance, Rat(1), 2, 8, 128);
    json ref{{"fixture", "dexp"}};
    json j = certificate_json(cert, ref);
    ExclusionCertificate back = certificate_from_json(j);
    CHECK(back.N == cert.N);
    CHECK(back.gap_upper == cert.gap_upper);
    CHECK(back.liouville_floor == cert.liouville_floor);
    CHECK(canonical_dump(j) == canonical_dump(certificate_json(back, ref)));
}

TEST_CASE("interval json uses outward decimal endpoints") {
    RealInterval third(Rat(1, 3), 96);
    json j = interval_json(third, 10);
    Rat lo = parse_rational(j.at("lo").get<std::string>());
    Rat hi = parse_rational(j.at("hi").get<std::string>());
    CHECK(lo < Rat(1, 3));
    CHECK(hi > Rat(1, 3));
    CHECK(hi - lo < Rat(1, 100000000));
}
