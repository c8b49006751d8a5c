// Batch front door: instance ingestion, fixture catalog, pipeline
// orchestration (check -> certify -> eval -> approx -> exclude -> recheck)
// and deterministic JSON report emission.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "prodcert/json_io.hpp"

using namespace prodcert;

namespace {

struct LoadedInstance {
    InstancePtr instance;
    json ref;  // {"fixture": label} or the inline description
};

LoadedInstance load_instance(const std::string& spec) {
    if (std::filesystem::exists(spec)) {
        std::ifstream in(spec);
        if (!in) throw InputError("cannot open " + spec);
        json j = json::parse(in);
        return {instance_from_json(j), j};
    }
    const Fixture& f = find_fixture(spec);
    return {f.instance, json{{"fixture", f.label}}};
}

void emit(const json& j, const std::string& out_path) {
    std::string text = canonical_dump(j);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InputError("cannot write " + out_path);
        out << text;
    }
}

long check_bits(long bits) {
    if (bits < 32 || bits > default_precision_cap())
        throw InputError("bits must lie in [32, " + std::to_string(default_precision_cap()) + "]");
    return bits;
}

// run one job per instance, at most `jobs` in flight, output in input order
template <typename Fn>
int run_over(const std::vector<std::string>& instances, long jobs, Fn&& fn) {
    int rc = 0;
    size_t i = 0;
    while (i < instances.size()) {
        size_t batch = std::min<size_t>(static_cast<size_t>(std::max(jobs, 1L)),
                                        instances.size() - i);
        std::vector<std::future<std::pair<bool, std::string>>> futs;
        for (size_t k = 0; k < batch; ++k) {
            std::string spec = instances[i + k];
            futs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred,
                                      [spec, &fn] { return fn(spec); }));
        }
        for (auto& f : futs) {
            auto [ok, text] = f.get();
            std::cout << text;
            if (!ok) rc = 1;
        }
        i += batch;
    }
    return rc;
}

std::string describe_verdict(const CriterionVerdict& v) {
    std::ostringstream os;
    os << v.instance_label << ": " << to_string(v.criterion) << " (" << to_string(v.mode)
       << " mode) -> " << to_string(v.status) << "  [B = " << v.base_B;
    if (v.schedule_C != 0) os << ", C = " << v.schedule_C << ", margin = " << v.margin;
    os << "]\n";
    for (const auto& n : v.notes) os << "    note: " << n << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic certification of growth criteria for infinite products"};
    app.require_subcommand(1);

    std::vector<std::string> instances;
    std::string out_path, criterion_name = "T2-general", mode_name = "single", cert_path;
    std::string format = "text";
    long prefix = 8, bits = 96, terms = 8, approx_n = 4, n_min = 2, n_max = 12, jobs = 1;
    std::string hmax_str = "1000000", delta_str = "1/4", ccap_str = "8";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--instance,-i", instances, "fixture label or instance JSON path")
            ->required();
        cmd->add_option("--bits,-b", bits, "working precision in bits");
        cmd->add_option("--out,-o", out_path, "write the JSON report to this path");
        cmd->add_option("--jobs,-j", jobs, "process instances concurrently");
    };

    app.add_subcommand("list", "catalog of shipped instances");

    auto* check_cmd = app.add_subcommand("check", "verify hypothesis inequalities on a prefix");
    add_common(check_cmd);
    check_cmd->add_option("--prefix,-n", prefix, "prefix length");
    check_cmd->add_option("--format", format, "text or json");

    auto* certify_cmd = app.add_subcommand("certify", "criterion threshold + prefix verdict");
    add_common(certify_cmd);
    certify_cmd->add_option("--criterion,-c", criterion_name, "T1-irr ... T4-trans");
    certify_cmd->add_option("--mode,-m", mode_name, "pi or single");
    certify_cmd->add_option("--prefix,-n", prefix, "prefix length");
    certify_cmd->add_option("--format", format, "text or json");

    auto* eval_cmd = app.add_subcommand("eval", "rigorous enclosure of the infinite product");
    add_common(eval_cmd);
    eval_cmd->add_option("--terms,-t", terms, "number of exact factors");
    eval_cmd->add_option("--format", format, "text or json");

    auto* approx_cmd = app.add_subcommand("approx", "integer approximants and their bounds");
    add_common(approx_cmd);
    approx_cmd->add_option("--n,-N", approx_n, "approximant index");
    approx_cmd->add_option("--mode,-m", mode_name, "pi or single");
    approx_cmd->add_option("--delta", delta_str, "delta margin (rational)");
    approx_cmd->add_option("--ccap", ccap_str, "|p_i| <= q^C cap for the linear form");

    auto* exclude_cmd = app.add_subcommand("exclude", "finite height-exclusion certificate");
    add_common(exclude_cmd);
    exclude_cmd->add_option("--hmax", hmax_str, "height cap (rational)");
    exclude_cmd->add_option("--nmin", n_min, "first index to try");
    exclude_cmd->add_option("--nmax", n_max, "last index to try");

    auto* recheck_cmd = app.add_subcommand("recheck", "re-validate a stored certificate");
    recheck_cmd->add_option("certificate", cert_path, "certificate JSON path")->required();
    recheck_cmd->add_option("--bits,-b", bits, "re-validation precision (default 2x stored)");

    auto* estimate_cmd = app.add_subcommand("estimate", "diagnostic exponent fits");
    add_common(estimate_cmd);
    estimate_cmd->add_option("--prefix,-n", prefix, "prefix length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) {
            std::cout << "label            criterion    mode    schedule   claim\n";
            for (const auto& f : fixture_catalog()) {
                std::ostringstream os;
                os << f.label << std::string(f.label.size() < 17 ? 17 - f.label.size() : 1, ' ');
                std::string cn = to_string(f.criterion);
                os << cn << std::string(cn.size() < 13 ? 13 - cn.size() : 1, ' ');
                std::string mn = to_string(f.mode);
                os << mn << std::string(mn.size() < 8 ? 8 - mn.size() : 1, ' ');
                std::string sched =
                    f.quoted_schedule_base != 0 ? "(" + f.quoted_schedule_base.get_str() + ")^n"
                                                : "-";
                os << sched << std::string(sched.size() < 11 ? 11 - sched.size() : 1, ' ');
                os << f.claim;
                std::cout << os.str() << "\n";
            }
            return 0;
        }

        if (app.got_subcommand("check")) {
            check_bits(bits);
            return run_over(instances, jobs, [&](const std::string& spec) {
                LoadedInstance li = load_instance(spec);
                PrefixReport rep = check_prefix(*li.instance, prefix, bits);
                bool ok = !rep.first_failure.has_value();
                std::ostringstream os;
                if (format == "json" || !out_path.empty()) {
                    json j = prefix_report_json(rep);
                    j["instance"] = li.instance->label();
                    emit(j, out_path);
                }
                if (format != "json") {
                    os << li.instance->label() << ": prefix " << prefix << " -> "
                       << (ok ? "all hypotheses hold" : "violation found") << "\n";
                    for (const auto& [id, v] : rep.verdicts)
                        os << "    " << to_string(id) << ": " << to_string(v) << "\n";
                    os << "    not_half_count: " << rep.not_half_count << "\n";
                }
                return std::make_pair(ok, os.str());
            });
        }

        if (app.got_subcommand("certify")) {
            check_bits(bits);
            auto crit = criterion_from_string(criterion_name);
            if (!crit) throw InputError("unknown criterion: " + criterion_name);
            Mode mode = mode_name == "pi" ? Mode::pi : Mode::single_product;
            return run_over(instances, jobs, [&, crit, mode](const std::string& spec) {
                LoadedInstance li = load_instance(spec);
                CriterionVerdict v = certify(*li.instance, *crit, mode, prefix, bits);
                if (format == "json" || !out_path.empty()) emit(verdict_json(v), out_path);
                std::string text = format == "json" ? "" : describe_verdict(v);
                return std::make_pair(v.status == CertifyStatus::certified, text);
            });
        }

        if (app.got_subcommand("eval")) {
            check_bits(bits);
            return run_over(instances, jobs, [&](const std::string& spec) {
                LoadedInstance li = load_instance(spec);
                ProductEnclosure pe = full_enclosure(*li.instance, terms + 1, bits);
                if (format == "json" || !out_path.empty()) emit(enclosure_json(pe), out_path);
                std::ostringstream os;
                if (format != "json") {
                    auto [lo, hi] = outward_decimal(pe.full.re, 40);
                    Decimal tail = decimal_round(RealInterval(pe.tail_sum, 64).hi(), 4, true);
                    os << li.instance->label() << ": gamma in [" << lo.str() << ", " << hi.str()
                       << "]\n    exact factors: " << terms
                       << ", certified tail bound: " << tail.str() << "\n";
                }
                return std::make_pair(true, os.str());
            });
        }

        if (app.got_subcommand("approx")) {
            check_bits(bits);
            Mode mode = mode_name == "pi" ? Mode::pi : Mode::single_product;
            Rat delta = parse_rational(delta_str);
            Rat ccap = parse_rational(ccap_str);
            return run_over(instances, jobs, [&, mode, delta, ccap](const std::string& spec) {
                LoadedInstance li = load_instance(spec);
                LemmaParams params = LemmaParams::from(*li.instance, mode, delta);
                ApproximantRecord rec = build_approximant(*li.instance, approx_n, bits, params);
                auto pib = verify_piBound(rec, *li.instance, params);
                Tri hns = verify_hns(rec, *li.instance, params);
                LinearFormReport lf =
                    verify_linear_form(rec, *li.instance, delta / params.z2, ccap);
                json j = approximant_json(rec, pib, hns, params);
                j["linear_form"] = json{{"holds", tri_json(lf.holds)},
                                        {"pi_cap_ok", lf.pi_cap_ok},
                                        {"lhs", interval_json(lf.lhs)},
                                        {"rhs", interval_json(lf.rhs)}};
                j["instance"] = li.instance->label();
                if (!out_path.empty()) emit(j, out_path);
                bool pi_all = true;
                for (Tri v : pib) pi_all &= (v == Tri::True);
                std::ostringstream os;
                os << li.instance->label() << ": N = " << rec.N
                   << ", q_N > 2^N: " << (rec.qN_gt_2N ? "yes" : "no")
                   << ", piBound: " << (pi_all ? "holds" : "not all hold")
                   << ", gap bound: " << to_string(hns)
                   << ", linear form: " << to_string(lf.holds) << "\n";
                return std::make_pair(true, os.str());
            });
        }

        if (app.got_subcommand("exclude")) {
            check_bits(bits);
            Rat hmax = parse_rational(hmax_str);
            return run_over(instances, jobs, [&, hmax](const std::string& spec) {
                LoadedInstance li = load_instance(spec);
                ExclusionCertificate cert =
                    exclusion_certificate(*li.instance, hmax, n_min, n_max, bits);
                emit(certificate_json(cert, li.ref), out_path);
                std::ostringstream os;
                if (!out_path.empty())
                    os << li.instance->label() << ": excluded heights <= " << hmax
                       << " at N = " << cert.N << "\n";
                return std::make_pair(true, os.str());
            });
        }

        if (app.got_subcommand("recheck")) {
            std::ifstream in(cert_path);
            if (!in) throw InputError("cannot open " + cert_path);
            json stored = json::parse(in);
            ExclusionCertificate cert = certificate_from_json(stored);
            LoadedInstance li{instance_from_json(stored.at("instance")), stored.at("instance")};
            // byte-exact re-derivation at the stored precision
            auto fresh = exclusion_at(*li.instance, cert.N, cert.H_max, cert.bits);
            if (!fresh) {
                std::cout << "recheck FAILED: certificate does not re-derive\n";
                return 1;
            }
            std::string a = canonical_dump(certificate_json(*fresh, li.ref));
            std::string b = canonical_dump(certificate_json(cert, li.ref));
            if (a != b) {
                std::cout << "recheck FAILED: stored certificate differs from the re-derivation\n";
                return 1;
            }
            // numerical re-validation at (by default) doubled precision
            long recheck_bits = recheck_cmd->count("--bits") ? bits : 2 * cert.bits;
            if (!recheck_exclusion(*li.instance, cert, recheck_bits)) {
                std::cout << "recheck FAILED: bounds do not re-validate at " << recheck_bits
                          << " bits\n";
                return 1;
            }
            std::cout << "recheck OK: " << cert.conclusion << " (re-validated at " << recheck_bits
                      << " bits)\n";
            return 0;
        }

        if (app.got_subcommand("estimate")) {
            check_bits(bits);
            return run_over(instances, jobs, [&](const std::string& spec) {
                LoadedInstance li = load_instance(spec);
                EmpiricalExponents e = estimate_exponents(*li.instance, prefix, bits);
                std::ostringstream os;
                os << li.instance->label() << ": beta^ = " << e.beta_hat << ", y1^ = " << e.y1_hat
                   << ", y2^ = " << e.y2_hat << ", z1^ = " << e.z1_hat << ", z2^ = " << e.z2_hat
                   << ", kappa^ = " << e.kappa_hat << "\n";
                for (const auto& w : e.warnings) os << "    warning: " << w << "\n";
                return std::make_pair(true, os.str());
            });
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
