#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prodcert {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
// An interval comparison or ceiling stayed ambiguous at the precision cap.
struct PrecisionExhausted : Error {
    using Error::Error;
};
struct DivergentMajorant : Error {
    using Error::Error;
};
struct TermSizeLimit : Error {
    using Error::Error;
};

// Three-valued verdict for rigorous comparisons.
enum class Tri : int8_t { False = 0, True = 1, Unknown = 2 };

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::True:
            return "holds";
        case Tri::False:
            return "fails";
        default:
            return "undecided";
    }
}

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::True;
}

// Default auto-refinement cap, overridable via PRODCERT_PRECISION_CAP.
inline long default_precision_cap() {
    static long cap = [] {
        if (const char* s = std::getenv("PRODCERT_PRECISION_CAP")) {
            long v = std::strtol(s, nullptr, 10);
            if (v >= 64) return v;
        }
        return 1L << 16;
    }();
    return cap;
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat r;
    unsigned long a = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), a);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), a);
    r.canonicalize();
    if (e < 0) {
        if (r == 0) throw DomainError("pow_rat: zero base with negative exponent");
        return Rat(1) / r;
    }
    return r;
}

inline Int ceil_rat(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
    return r;
}

inline Int floor_rat(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
    return r;
}

// Bit length of |n|; 0 for n == 0.
inline long bit_length(const Int& n) {
    if (n == 0) return 0;
    return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
}

// Parses "p", "p/q", or a decimal string like "-12.34" or "5e-7" into an
// exact rational.
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw InputError("empty rational string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
            throw InputError("bad rational: " + s);
        if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0) throw InputError("zero denominator: " + s);
        r.canonicalize();
        return r;
    }
    std::string body = s;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        body = s.substr(0, epos);
        std::string es = s.substr(epos + 1);
        if (es.empty()) throw InputError("bad exponent: " + s);
        exp10 = std::strtol(es.c_str(), nullptr, 10);
    }
    auto dot = body.find('.');
    std::string digits = body;
    size_t frac_len = 0;
    if (dot != std::string::npos) {
        frac_len = body.size() - dot - 1;
        digits = body.substr(0, dot) + body.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+") throw InputError("bad decimal: " + s);
    }
    Int num;
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
        throw InputError("bad number: " + s);
    Rat r(num);
    long e = exp10 - static_cast<long>(frac_len);
    if (e > 0) r *= Rat(pow_int(Int(10), e));
    if (e < 0) r /= Rat(pow_int(Int(10), -e));
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

// Exact decimal rendering; only valid when the denominator is of the form 2^a 5^b.
inline std::optional<std::string> rat_to_decimal_exact(const Rat& q) {
    Int den = q.get_den();
    unsigned long two = 0, five = 0;
    Int d = den;
    while (mpz_even_p(d.get_mpz_t())) {
        d /= 2;
        ++two;
    }
    while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) {
        d /= 5;
        ++five;
    }
    if (d != 1) return std::nullopt;
    unsigned long k = std::max(two, five);
    Int scaled = q.get_num() * pow_int(Int(2), k - two) * pow_int(Int(5), k - five);
    std::string body = scaled.get_str();
    bool neg = !body.empty() && body[0] == '-';
    if (neg) body = body.substr(1);
    if (k == 0) return (neg ? "-" : "") + body;
    if (body.size() <= k) body.insert(0, std::string(k - body.size() + 1, '0'));
    body.insert(body.size() - k, ".");
    return (neg ? "-" : "") + body;
}

}  // namespace prodcert
