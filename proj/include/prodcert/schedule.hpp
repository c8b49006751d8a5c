#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prodcert/interval.hpp"

namespace prodcert {

inline long default_term_cap() {
    static long cap = [] {
        if (const char* s = std::getenv("PRODCERT_TERM_CAP")) {
            long v = std::strtol(s, nullptr, 10);
            if (v >= 16) return v;
        }
        return 10000000L;
    }();
    return cap;
}

enum class GrowthKind { constant, log, linear, n_log };

inline const char* to_string(GrowthKind g) {
    switch (g) {
        case GrowthKind::constant:
            return "const";
        case GrowthKind::log:
            return "log";
        case GrowthKind::linear:
            return "linear";
        default:
            return "n_log";
    }
}

inline std::optional<GrowthKind> growth_from_string(const std::string& s) {
    if (s == "const" || s == "constant" || s == "1") return GrowthKind::constant;
    if (s == "log") return GrowthKind::log;
    if (s == "linear" || s == "n") return GrowthKind::linear;
    if (s == "n_log" || s == "nlog") return GrowthKind::n_log;
    return std::nullopt;
}

// Exponent schedule h_n = ceil(C^m g(m)) at m = n + start - 1, post-processed
// to be strictly increasing; generated schedules satisfy h_n >= C^m g(m) at
// every index, which is stronger than the "infinitely often" the criteria
// need. Explicit term lists carry a witness index set instead.
struct Schedule {
    Rat C;
    GrowthKind g = GrowthKind::constant;
    long start = 1;
    std::vector<Int> explicit_terms;
    std::vector<long> witness_indices;  // for explicit lists; 1-based

    bool is_explicit() const { return !explicit_terms.empty(); }
    bool g_unbounded() const { return !is_explicit() && g != GrowthKind::constant; }

    static Schedule formula(const Rat& growth_base, GrowthKind kind, long start_at = 0) {
        if (growth_base <= 1) throw InputError("schedule base C must exceed 1");
        Schedule s;
        s.C = growth_base;
        s.g = kind;
        s.start = start_at > 0 ? start_at
                               : ((kind == GrowthKind::log || kind == GrowthKind::n_log) ? 2 : 1);
        return s;
    }

    static Schedule explicit_list(std::vector<Int> terms, std::vector<long> witnesses = {}) {
        if (terms.empty()) throw InputError("empty explicit schedule");
        for (size_t i = 0; i + 1 < terms.size(); ++i)
            if (terms[i] >= terms[i + 1])
                throw InputError("explicit schedule must be strictly increasing");
        if (terms.front() < 1) throw InputError("schedule terms must be positive");
        Schedule s;
        s.C = 0;
        s.explicit_terms = std::move(terms);
        s.witness_indices = std::move(witnesses);
        return s;
    }
};

namespace schedule_detail {

// ceil of C^m * g(m), decided rigorously.
inline Int ceil_term(const Schedule& s, long m, long cap_bits) {
    Rat cp = pow_rat(s.C, m);
    if (s.g == GrowthKind::constant) return ceil_rat(cp);
    if (s.g == GrowthKind::linear) return ceil_rat(cp * Rat(m));
    // log factors: refine until the ceiling is unambiguous
    for (long prec = 96; prec <= cap_bits; prec *= 2) {
        RealInterval ln = iv_log(RealInterval(Int(m), prec), prec);
        if (s.g == GrowthKind::n_log) ln = iv_mul(ln, RealInterval(Int(m), prec), prec);
        RealInterval v = iv_mul(ln, RealInterval(cp, prec), prec);
        Int clo = ceil_rat(v.lo_rat());
        Int chi = ceil_rat(v.hi_rat());
        if (clo == chi) return clo;
    }
    throw PrecisionExhausted("schedule ceiling ambiguous at the precision cap");
}

}  // namespace schedule_detail

// First `count` schedule values; strictly increasing, each >= C^m g(m).
inline std::vector<Int> schedule_terms(const Schedule& s, long count, long term_cap = 0) {
    if (count < 1) throw InputError("schedule term count must be positive");
    if (term_cap == 0) term_cap = default_term_cap();
    std::vector<Int> out;
    out.reserve(static_cast<size_t>(count));
    if (s.is_explicit()) {
        if (static_cast<size_t>(count) > s.explicit_terms.size())
            throw TermSizeLimit("explicit schedule has only " +
                                std::to_string(s.explicit_terms.size()) + " terms");
        out.assign(s.explicit_terms.begin(), s.explicit_terms.begin() + count);
    } else {
        Int prev(0);
        for (long n = 1; n <= count; ++n) {
            Int h = schedule_detail::ceil_term(s, n + s.start - 1, default_precision_cap());
            if (h <= prev) h = prev + 1;
            if (h <= 0) h = prev + 1;
            out.push_back(h);
            prev = h;
        }
    }
    if (out.back() > term_cap)
        throw TermSizeLimit("schedule term exceeds the desk-scale cap (" +
                            out.back().get_str() + " > " + std::to_string(term_cap) + ")");
    return out;
}

}  // namespace prodcert
