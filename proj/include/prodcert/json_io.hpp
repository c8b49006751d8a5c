#pragma once

#include <json.hpp>

#include "prodcert/approx.hpp"
#include "prodcert/fixtures.hpp"

namespace prodcert {

using nlohmann::json;

// ---- primitive encodings -----------------------------------------------------

inline json interval_json(const RealInterval& x, int digits = 40) {
    auto [lo, hi] = outward_decimal(x, digits);
    return json{{"lo", lo.str()}, {"hi", hi.str()}};
}

inline json complex_interval_json(const ComplexInterval& z, int digits = 40) {
    return json{{"re", interval_json(z.re, digits)}, {"im", interval_json(z.im, digits)}};
}

inline std::string tri_json(Tri t) { return to_string(t); }

// root boxes use decimal-string endpoints, lo/hi pairs per component
inline json root_box_json(const ComplexInterval& z) {
    auto enc = [](const RealInterval& iv) {
        Rat lo = iv.lo_rat(), hi = iv.hi_rat();
        auto lod = rat_to_decimal_exact(lo);
        auto hid = rat_to_decimal_exact(hi);
        // dyadic endpoints always render exactly
        return json::array({lod ? *lod : rat_to_string(lo), hid ? *hid : rat_to_string(hi)});
    };
    return json{{"re", enc(z.re)}, {"im", enc(z.im)}};
}

inline json algebraic_number_json(const AlgebraicNumber& a) {
    json coeffs = json::array();
    for (const auto& c : a.minpoly().coeffs()) coeffs.push_back(c.get_str());
    return json{{"minpoly", coeffs}, {"root", root_box_json(a.root_box())}};
}

inline RealInterval interval_from_json(const json& j, long prec) {
    if (!j.is_array() || j.size() != 2) throw InputError("interval must be a [lo, hi] pair");
    Rat lo = parse_rational(j[0].get<std::string>());
    Rat hi = parse_rational(j[1].get<std::string>());
    return RealInterval(lo, hi, prec);
}

inline AlgebraicNumber algebraic_number_from_json(const json& j) {
    if (!j.contains("minpoly")) throw InputError("algebraic number needs a minpoly");
    std::vector<Int> coeffs;
    for (const auto& c : j.at("minpoly")) {
        if (c.is_string())
            coeffs.emplace_back(c.get<std::string>());
        else
            coeffs.emplace_back(c.get<long>());
    }
    IntPolynomial m(std::move(coeffs));
    if (m.degree() == 1) {
        Rat r(-m.coeffs()[0], m.coeffs()[1]);
        r.canonicalize();
        return AlgebraicNumber::from_rational(r);
    }
    if (!j.contains("root")) {
        // conventional default: the largest real root
        return AlgebraicNumber::largest_real_root(m);
    }
    const json& root = j.at("root");
    ComplexInterval box{interval_from_json(root.at("re"), 96),
                        interval_from_json(root.at("im"), 96)};
    return AlgebraicNumber::select(std::move(m), box);
}

inline FieldPtr field_from_json(const json& j) {
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        // named fields are shared so separately loaded instances interoperate
        if (name == "rationals" || name == "Q") {
            static FieldPtr q = NumberField::rationals();
            return q;
        }
        if (name == "phi" || name == "golden") return fixtures_detail::golden_field();
        if (name == "psi" || name == "supergolden") return fixtures_detail::supergolden_field();
        if (name == "cbrt2") return fixtures_detail::cbrt2_field();
        throw InputError("unknown field name: " + name);
    }
    return NumberField::make(algebraic_number_from_json(j));
}

// ---- metadata and schedule ---------------------------------------------------

inline json meta_json(const ExponentMeta& m) {
    return json{{"epsilon", rat_to_string(m.epsilon)},
                {"alpha", rat_to_string(m.alpha)},
                {"beta", rat_to_string(m.beta)},
                {"y1", rat_to_string(m.y1)},
                {"y2", rat_to_string(m.y2)},
                {"z1", rat_to_string(m.z1)},
                {"z2", rat_to_string(m.z2)},
                {"d0", m.d0},
                {"e", m.e},
                {"kappa2", rat_to_string(m.kappa2)},
                {"kappa2_tol", rat_to_string(m.kappa2_tol)}};
}

inline ExponentMeta meta_from_json(const json& j, ExponentMeta base = {}) {
    auto rat = [&](const char* key, Rat& slot) {
        if (j.contains(key)) slot = parse_rational(j.at(key).get<std::string>());
    };
    rat("epsilon", base.epsilon);
    rat("alpha", base.alpha);
    rat("beta", base.beta);
    rat("y1", base.y1);
    rat("y2", base.y2);
    rat("z1", base.z1);
    rat("z2", base.z2);
    rat("kappa2", base.kappa2);
    rat("kappa2_tol", base.kappa2_tol);
    if (j.contains("d0")) base.d0 = j.at("d0").get<long>();
    if (j.contains("e")) base.e = j.at("e").get<int>();
    return base;
}

inline json schedule_json(const Schedule& s) {
    if (s.is_explicit()) {
        json terms = json::array();
        for (const auto& t : s.explicit_terms) terms.push_back(t.get_str());
        json w = json::array();
        for (long i : s.witness_indices) w.push_back(i);
        return json{{"terms", terms}, {"witnesses", w}};
    }
    return json{{"C", rat_to_string(s.C)}, {"g", to_string(s.g)}, {"start", s.start}};
}

inline Schedule schedule_from_json(const json& j) {
    if (j.contains("terms")) {
        std::vector<Int> terms;
        for (const auto& t : j.at("terms")) {
            if (t.is_string())
                terms.emplace_back(t.get<std::string>());
            else
                terms.emplace_back(t.get<long>());
        }
        std::vector<long> wit;
        if (j.contains("witnesses"))
            for (const auto& w : j.at("witnesses")) wit.push_back(w.get<long>());
        return Schedule::explicit_list(std::move(terms), std::move(wit));
    }
    Rat C = parse_rational(j.at("C").get<std::string>());
    GrowthKind g = GrowthKind::constant;
    if (j.contains("g")) {
        auto gk = growth_from_string(j.at("g").get<std::string>());
        if (!gk) throw InputError("unknown growth kind");
        g = *gk;
    }
    long start = j.contains("start") ? j.at("start").get<long>() : 0;
    return Schedule::formula(C, g, start);
}

// ---- instance descriptions ----------------------------------------------------

// Loads an instance from a description object or a fixture reference
// {"fixture": "ex3.5"}.
inline InstancePtr instance_from_json(const json& j) {
    if (j.contains("fixture")) return find_fixture(j.at("fixture").get<std::string>()).instance;

    FieldPtr field = field_from_json(j.at("field"));
    Schedule sched = schedule_from_json(j.at("schedule"));
    long shift = j.contains("shift") ? j.at("shift").get<long>() : 0;
    std::string label = j.contains("label") ? j.at("label").get<std::string>() : "instance";

    const json& a = j.at("a");
    std::string kind = a.at("kind").get<std::string>();
    InstancePtr inst;
    if (kind == "unit_power") {
        std::string variant = a.contains("variant") ? a.at("variant").get<std::string>() : "plain";
        inst = unit_power_instance(field, sched,
                                   variant == "integer_weighted"
                                       ? UnitPowerVariant::integer_weighted
                                       : UnitPowerVariant::plain,
                                   label);
    } else if (kind == "power_plus_root") {
        std::function<OrderElement(long, const Int&)> b_gen;
        if (j.contains("b")) {
            const json& b = j.at("b");
            std::string bk = b.at("kind").get<std::string>();
            if (bk == "const_int") {
                Int v(b.at("value").get<std::string>());
                b_gen = [field, v](long, const Int&) { return OrderElement::from_int(field, v); };
            } else if (bk == "int_list") {
                auto vals = std::make_shared<std::vector<Int>>();
                for (const auto& t : b.at("values")) vals->emplace_back(t.get<std::string>());
                b_gen = [field, vals](long n, const Int&) {
                    if (static_cast<size_t>(n) > vals->size())
                        throw TermSizeLimit("b list exhausted");
                    return OrderElement::from_int(field, (*vals)[static_cast<size_t>(n - 1)]);
                };
            } else {
                throw InputError("unsupported b generator for power_plus_root: " + bk);
            }
        }
        inst = cube_root_instance(field, sched, b_gen, label);
    } else if (kind == "pow_of_h") {
        Rat eps = j.contains("meta") && j.at("meta").contains("epsilon")
                      ? parse_rational(j.at("meta").at("epsilon").get<std::string>())
                      : Rat(1);
        inst = pow2_instance(sched, label, eps);
    } else if (kind == "fib_of_h") {
        inst = fib_ratio_instance(field, sched, label);
    } else {
        throw InputError("unknown generator kind: " + kind);
    }
    if (j.contains("meta")) {
        ExponentMeta overridden = meta_from_json(j.at("meta"), inst->meta());
        std::optional<bool> structural;
        if (j.contains("flags") && j.at("flags").contains("factor_side_structural"))
            structural = j.at("flags").at("factor_side_structural").get<bool>();
        inst = SequenceInstance::with_meta(inst, overridden, structural);
    }
    if (shift != 0) inst = inst->shifted(shift);
    return inst;
}

// ---- reports -------------------------------------------------------------------

inline json prefix_report_json(const PrefixReport& rep) {
    json verdicts;
    for (const auto& [id, v] : rep.verdicts) verdicts[to_string(id)] = tri_json(v);
    json undecided = json::array();
    for (const auto& [id, n] : rep.undecided)
        undecided.push_back(json{{"inequality", to_string(id)}, {"n", n}});
    json j{{"n_max", rep.n_max},
           {"bits", rep.bits},
           {"verdicts", verdicts},
           {"not_half_count", rep.not_half_count},
           {"kappa_consistent", tri_json(rep.kappa_consistent)},
           {"undecided", undecided}};
    if (rep.first_failure)
        j["first_failure"] =
            json{{"inequality", to_string(rep.first_failure->first)},
                 {"n", rep.first_failure->second}};
    return j;
}

inline json verdict_json(const CriterionVerdict& v) {
    return json{{"instance", v.instance_label},
                {"criterion", to_string(v.criterion)},
                {"mode", to_string(v.mode)},
                {"base_B", rat_to_string(v.base_B)},
                {"schedule_C", rat_to_string(v.schedule_C)},
                {"margin", rat_to_string(v.margin)},
                {"g_unbounded", v.g_unbounded},
                {"status", to_string(v.status)},
                {"prefix", prefix_report_json(v.prefix)},
                {"notes", v.notes}};
}

inline json enclosure_json(const ProductEnclosure& pe) {
    return json{{"N", pe.N},
                {"bits", pe.bits},
                {"partial", complex_interval_json(pe.partial)},
                {"tail_sum", rat_to_string(pe.tail_sum)},
                {"modulus_factor", rat_to_string(pe.modulus_factor)},
                {"full", complex_interval_json(pe.full)},
                {"certified", pe.certified},
                {"tail_series", pe.tail_series}};
}

inline json approximant_json(const ApproximantRecord& rec, const std::vector<Tri>& pi_ok,
                             Tri hns, const LemmaParams& params) {
    json atilde = json::array();
    for (const auto& a : rec.atilde) atilde.push_back(a.get_str());
    json t = json::array();
    for (const auto& x : rec.t) t.push_back(x.get_str());
    json p = json::array();
    for (const auto& x : rec.p) p.push_back(x.get_str());
    json pib = json::array();
    for (Tri v : pi_ok) pib.push_back(tri_json(v));
    return json{{"N", rec.N},
                {"bits", rec.bits},
                {"atilde", atilde},
                {"t", t},
                {"qN", rec.qN.get_str()},
                {"p", p},
                {"qN_gt_2N", rec.qN_gt_2N},
                {"gap", interval_json(rec.gap)},
                {"tail_sum", rat_to_string(rec.tail_sum)},
                {"params",
                 json{{"y", rat_to_string(params.y)},
                      {"z1", rat_to_string(params.z1)},
                      {"z2", rat_to_string(params.z2)},
                      {"M", rat_to_string(params.M)},
                      {"delta", rat_to_string(params.delta)}}},
                {"piBound", pib},
                {"hns", tri_json(hns)}};
}

inline json certificate_json(const ExclusionCertificate& cert, const json& instance_ref) {
    return json{{"format", "prodcert-exclusion-v1"},
                {"instance", instance_ref},
                {"instance_label", cert.instance_label},
                {"N", cert.N},
                {"bits", cert.bits},
                {"degree", cert.degree},
                {"H_max", rat_to_string(cert.H_max)},
                {"gap_upper", rat_to_string(cert.gap_upper)},
                {"height_chain_upper", rat_to_string(cert.height_chain_upper)},
                {"liouville_floor", rat_to_string(cert.liouville_floor)},
                {"e_side", cert.e_side},
                {"strict_factor_index", cert.strict_factor_index},
                {"conclusion", cert.conclusion}};
}

inline ExclusionCertificate certificate_from_json(const json& j) {
    if (!j.contains("format") || j.at("format") != "prodcert-exclusion-v1")
        throw InputError("not a prodcert exclusion certificate");
    ExclusionCertificate c;
    c.instance_label = j.at("instance_label").get<std::string>();
    c.N = j.at("N").get<long>();
    c.bits = j.at("bits").get<long>();
    c.degree = j.at("degree").get<long>();
    c.H_max = parse_rational(j.at("H_max").get<std::string>());
    c.gap_upper = parse_rational(j.at("gap_upper").get<std::string>());
    c.height_chain_upper = parse_rational(j.at("height_chain_upper").get<std::string>());
    c.liouville_floor = parse_rational(j.at("liouville_floor").get<std::string>());
    c.e_side = j.at("e_side").get<int>();
    c.strict_factor_index = j.at("strict_factor_index").get<long>();
    c.conclusion = j.at("conclusion").get<std::string>();
    return c;
}

// canonical text rendering: two-space indent, keys sorted (nlohmann objects
// already iterate in key order)
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace prodcert
