#pragma once

#include <vector>

#include "prodcert/complex_interval.hpp"
#include "prodcert/numeric.hpp"

namespace prodcert {

// Polynomial over Q, constant term first. Degree = index of last nonzero
// coefficient; the zero polynomial has an empty coefficient vector.
struct QPoly {
    std::vector<Rat> c;

    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { normalize(); }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const Rat& lc() const {
        if (is_zero()) throw DomainError("leading coefficient of zero polynomial");
        return c.back();
    }
    Rat coeff(size_t i) const { return i < c.size() ? c[i] : Rat(0); }

    QPoly derivative() const {
        if (c.size() <= 1) return QPoly{};
        std::vector<Rat> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * Rat(static_cast<long>(i));
        return QPoly(std::move(d));
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    bool operator==(const QPoly& o) const { return c == o.c; }
};

inline QPoly operator+(const QPoly& a, const QPoly& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return QPoly(std::move(r));
}

inline QPoly operator-(const QPoly& a, const QPoly& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return QPoly(std::move(r));
}

inline QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly{};
    std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return QPoly(std::move(r));
}

inline QPoly operator*(const QPoly& a, const Rat& s) {
    QPoly r = a;
    for (auto& x : r.c) x *= s;
    r.normalize();
    return r;
}

// Division with remainder over Q.
inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    QPoly rem = a;
    std::vector<Rat> q;
    long db = b.degree();
    while (!rem.is_zero() && rem.degree() >= db) {
        long k = rem.degree() - db;
        Rat f = rem.lc() / b.lc();
        if (static_cast<long>(q.size()) < k + 1) q.resize(k + 1, Rat(0));
        q[k] += f;
        for (long i = 0; i <= db; ++i) rem.c[i + k] -= f * b.c[i];
        rem.normalize();
    }
    return {QPoly(std::move(q)), rem};
}

inline QPoly poly_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * (Rat(1) / a.lc());  // monic normal form
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic (or zero).
inline std::tuple<QPoly, QPoly, QPoly> poly_xgcd(const QPoly& a, const QPoly& b) {
    QPoly r0 = a, r1 = b;
    QPoly s0{{Rat(1)}}, s1{};
    QPoly t0{}, t1{{Rat(1)}};
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        QPoly s = s0 - q * s1;
        QPoly t = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
        t0 = std::move(t1);
        t1 = std::move(t);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Rat inv = Rat(1) / r0.lc();
    return {r0 * inv, s0 * inv, t0 * inv};
}

// Largest squarefree divisor: p / gcd(p, p').
inline QPoly squarefree_part(const QPoly& p) {
    if (p.is_zero() || p.degree() == 0) return p;
    QPoly g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p;
    return divmod(p, g).first;
}

// Primitive integer polynomial with positive leading coefficient.
class IntPolynomial {
  public:
    IntPolynomial() = default;

    // Normalizes: strips trailing zeros, divides by content, flips sign so
    // the leading coefficient is positive.
    explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (c_.empty()) throw InputError("zero polynomial");
        Int g(0);
        for (const auto& x : c_) g = gcd(g, x);
        if (c_.back() < 0) g = -g;
        if (g != 1)
            for (auto& x : c_) x /= g;
    }

    static IntPolynomial from_rationals(const std::vector<Rat>& coeffs) {
        Int den(1);
        for (const auto& q : coeffs) {
            Int d = q.get_den();
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
        }
        std::vector<Int> z(coeffs.size());
        for (size_t i = 0; i < coeffs.size(); ++i) {
            Rat scaled = coeffs[i] * Rat(den);
            z[i] = scaled.get_num();  // exact: den is a common denominator
        }
        return IntPolynomial(std::move(z));
    }

    static IntPolynomial from_qpoly(const QPoly& p) { return from_rationals(p.c); }

    // x - r as a degree-1 minimal polynomial of the rational r (primitive).
    static IntPolynomial linear_for(const Rat& r) {
        return IntPolynomial({-r.get_num(), r.get_den()});
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& constant_term() const { return c_.front(); }
    const Int& leading() const { return c_.back(); }

    bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

    QPoly to_qpoly() const {
        std::vector<Rat> q(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) q[i] = Rat(c_[i]);
        return QPoly(std::move(q));
    }

    IntPolynomial derivative() const {
        if (c_.size() <= 1) throw DomainError("derivative of constant is zero");
        std::vector<Int> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Int(static_cast<long>(i));
        return IntPolynomial(std::move(d));
    }

    // Minimal polynomial of 1/a from that of a (reverse the coefficients).
    IntPolynomial reversed() const {
        if (c_.front() == 0) throw DomainError("cannot invert a root at zero");
        std::vector<Int> r(c_.rbegin(), c_.rend());
        return IntPolynomial(std::move(r));
    }

    // Polynomial with roots r/k for roots r of *this (substitute k X).
    IntPolynomial roots_scaled_down(const Int& k) const {
        std::vector<Int> r = c_;
        Int p(1);
        for (size_t i = 0; i < r.size(); ++i) {
            r[i] *= p;
            p *= k;
        }
        return IntPolynomial(std::move(r));
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + Rat(c_[i]);
        return acc;
    }

    Int eval(const Int& x) const {
        Int acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    RealInterval eval(const RealInterval& x, long prec) const {
        RealInterval acc(c_.back(), prec);
        for (size_t i = c_.size() - 1; i-- > 0;)
            acc = iv_add(iv_mul(acc, x, prec), RealInterval(c_[i], prec), prec);
        return acc;
    }

    ComplexInterval eval(const ComplexInterval& x, long prec) const {
        ComplexInterval acc = ComplexInterval::real(RealInterval(c_.back(), prec));
        for (size_t i = c_.size() - 1; i-- > 0;) {
            acc = cv_mul(acc, x, prec);
            acc.re = iv_add(acc.re, RealInterval(c_[i], prec), prec);
        }
        return acc;
    }

    bool is_squarefree() const {
        if (degree() <= 1) return true;
        return poly_gcd(to_qpoly(), to_qpoly().derivative()).degree() == 0;
    }

    // Cauchy-style bound: all roots have |r| <= 1 + max |c_i| / c_d.
    Rat root_bound() const {
        Int m(0);
        for (size_t i = 0; i + 1 < c_.size(); ++i) {
            Int a = abs(c_[i]);
            if (a > m) m = a;
        }
        return Rat(1) + Rat(m) / Rat(c_.back());
    }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += c_[i].get_str();
            if (i >= 1) s += "*x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

  private:
    std::vector<Int> c_;
};

}  // namespace prodcert
