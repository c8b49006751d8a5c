#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "prodcert/intpoly.hpp"

namespace prodcert {
namespace modular {

using u64 = uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>((static_cast<__uint128_t>(a) * b) % p);
}

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }

// Dense polynomial over F_p, constant term first, normalized.
struct PolyP {
    std::vector<u64> c;
    u64 p;

    void norm() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    long deg() const { return static_cast<long>(c.size()) - 1; }
};

inline PolyP reduce(const IntPolynomial& f, u64 p) {
    PolyP r;
    r.p = p;
    r.c.resize(f.coeffs().size());
    for (size_t i = 0; i < r.c.size(); ++i) {
        Int m = f.coeffs()[i] % Int(static_cast<unsigned long>(p));
        if (m < 0) m += Int(static_cast<unsigned long>(p));
        r.c[i] = m.get_ui();
    }
    r.norm();
    return r;
}

inline PolyP mul(const PolyP& a, const PolyP& b) {
    if (a.zero() || b.zero()) return {{}, a.p};
    PolyP r{std::vector<u64>(a.c.size() + b.c.size() - 1, 0), a.p};
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = (r.c[i + j] + static_cast<__uint128_t>(a.c[i]) * b.c[j]) % a.p;
    }
    r.norm();
    return r;
}

inline PolyP mod(PolyP a, const PolyP& m) {
    u64 inv_lc = invmod(m.c.back(), m.p);
    while (!a.zero() && a.deg() >= m.deg()) {
        u64 f = mulmod(a.c.back(), inv_lc, m.p);
        size_t off = a.c.size() - m.c.size();
        for (size_t i = 0; i < m.c.size(); ++i) {
            u64 sub = mulmod(f, m.c[i], m.p);
            a.c[off + i] = (a.c[off + i] + m.p - sub) % m.p;
        }
        a.norm();
    }
    return a;
}

inline PolyP mulmod_poly(const PolyP& a, const PolyP& b, const PolyP& m) {
    return mod(mul(a, b), m);
}

inline PolyP gcd(PolyP a, PolyP b) {
    while (!b.zero()) {
        PolyP r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.zero()) {
        u64 inv = invmod(a.c.back(), a.p);
        for (auto& x : a.c) x = mulmod(x, inv, a.p);
    }
    return a;
}

inline PolyP x_pow_p_mod(const PolyP& m) {
    // x^p mod m by binary exponentiation
    PolyP x{{0, 1}, m.p};
    PolyP r{{1}, m.p};
    u64 e = m.p;
    PolyP base = mod(x, m);
    while (e) {
        if (e & 1) r = mulmod_poly(r, base, m);
        base = mulmod_poly(base, base, m);
        e >>= 1;
    }
    return r;
}

// Degrees (with multiplicity) of the irreducible factors of f mod p.
// Requires f squarefree mod p. Uses distinct-degree factorization.
inline std::vector<long> factor_degrees(PolyP f) {
    std::vector<long> degs;
    u64 p = f.p;
    u64 inv = invmod(f.c.back(), p);
    for (auto& x : f.c) x = mulmod(x, inv, p);

    PolyP h = mod(PolyP{{0, 1}, p}, f);  // x mod f
    long i = 0;
    while (f.deg() > 0) {
        ++i;
        if (2 * i > f.deg()) {
            degs.push_back(f.deg());  // what is left is irreducible
            break;
        }
        // h = x^{p^i} mod f
        {
            PolyP r{{1}, p};
            u64 e = p;
            PolyP base = h;
            while (e) {
                if (e & 1) r = mulmod_poly(r, base, f);
                base = mulmod_poly(base, base, f);
                e >>= 1;
            }
            h = std::move(r);
        }
        PolyP diff = h;
        // diff = h - x
        if (diff.c.size() < 2) diff.c.resize(2, 0);
        diff.c[1] = (diff.c[1] + p - 1) % p;
        diff.norm();
        PolyP g = gcd(f, diff);
        if (g.deg() > 0) {
            long count = g.deg() / i;
            for (long k = 0; k < count; ++k) degs.push_back(i);
            // f /= g
            // exact division via repeated mod-free long division
            PolyP q{std::vector<u64>(f.c.size() - g.c.size() + 1, 0), p};
            PolyP rem = f;
            u64 ginv = invmod(g.c.back(), p);
            while (!rem.zero() && rem.deg() >= g.deg()) {
                long k = rem.deg() - g.deg();
                u64 fac = mulmod(rem.c.back(), ginv, p);
                q.c[k] = fac;
                for (size_t j = 0; j < g.c.size(); ++j) {
                    u64 sub = mulmod(fac, g.c[j], p);
                    rem.c[k + j] = (rem.c[k + j] + p - sub) % p;
                }
                rem.norm();
            }
            f = std::move(q);
            f.norm();
            h = mod(h, f);
        }
    }
    return degs;
}

}  // namespace modular

// Certifies irreducibility over Q via rational-root exclusion plus factor
// degree patterns modulo small primes. Returns true only when certified;
// false means "could not certify" (the polynomial may or may not factor).
inline bool certify_irreducible(const IntPolynomial& f, int max_primes = 25) {
    long d = f.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    if (f.constant_term() == 0) return false;  // X divides
    if (!f.is_squarefree()) return false;

    // Rational-root test with a small divisor budget; a root p/q needs
    // p | c_0 and q | c_d.
    auto small_divisors = [](const Int& n, size_t cap) {
        std::vector<Int> divs;
        Int a = abs(n);
        for (Int i(1); i * i <= a; ++i) {
            if (mpz_divisible_p(a.get_mpz_t(), i.get_mpz_t())) {
                divs.push_back(i);
                divs.push_back(a / i);
                if (divs.size() > cap) return std::vector<Int>{};
            }
        }
        return divs;
    };
    if (bit_length(f.constant_term()) <= 24 && bit_length(f.leading()) <= 24) {
        auto ps = small_divisors(f.constant_term(), 256);
        auto qs = small_divisors(f.leading(), 256);
        if (!ps.empty() && !qs.empty()) {
            for (const auto& pp : ps)
                for (const auto& qq : qs) {
                    Rat r(pp, qq);
                    r.canonicalize();
                    if (f.eval(r) == 0 || f.eval(-r) == 0) return false;
                }
            if (d <= 3) return true;  // cubics and quadratics factor only with a root
        }
    }

    static const unsigned long primes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                           47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};
    // possible degrees of a proper factor, as a bitset; intersect over primes
    std::vector<bool> possible(static_cast<size_t>(d) + 1, true);
    int used = 0;
    for (unsigned long p : primes) {
        if (used >= max_primes) break;
        if (mpz_divisible_ui_p(f.leading().get_mpz_t(), p)) continue;
        modular::PolyP fp = modular::reduce(f, p);
        if (fp.deg() != d) continue;
        // skip primes where f mod p is not squarefree
        modular::PolyP der{std::vector<modular::u64>(fp.c.size() - 1, 0), p};
        for (size_t i = 1; i < fp.c.size(); ++i)
            der.c[i - 1] = modular::mulmod(fp.c[i], i % p, p);
        der.norm();
        if (modular::gcd(fp, der).deg() != 0) continue;
        ++used;

        auto degs = modular::factor_degrees(fp);
        if (degs.size() == 1) return true;  // irreducible mod p
        // subset sums of factor degrees
        std::vector<bool> sums(static_cast<size_t>(d) + 1, false);
        sums[0] = true;
        for (long g : degs)
            for (long s = d - g; s >= 0; --s)
                if (sums[static_cast<size_t>(s)]) sums[static_cast<size_t>(s + g)] = true;
        for (long k = 0; k <= d; ++k)
            if (!sums[static_cast<size_t>(k)]) possible[static_cast<size_t>(k)] = false;
        bool any_proper = false;
        for (long k = 1; k < d; ++k) any_proper |= possible[static_cast<size_t>(k)];
        if (!any_proper) return true;
    }
    return false;
}

}  // namespace prodcert
