#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "prodcert/algebraic.hpp"

namespace prodcert {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// A number field Q(theta) together with the monogenic order Z[theta].
// The generator must be an algebraic integer (monic primitive minimal
// polynomial); every sequence element is represented in its power basis.
class NumberField : public std::enable_shared_from_this<NumberField> {
  public:
    static FieldPtr make(AlgebraicNumber theta) {
        if (theta.minpoly().leading() != 1)
            throw InputError("order generator must be an algebraic integer (monic minimal polynomial)");
        return FieldPtr(new NumberField(std::move(theta)));
    }

    static FieldPtr rationals() {
        return make(AlgebraicNumber::from_rational(Rat(0)));
    }

    long degree() const { return theta_.degree(); }
    const AlgebraicNumber& generator() const { return theta_; }
    const IntPolynomial& minpoly() const { return theta_.minpoly(); }
    bool generator_real() const { return theta_.is_real(); }

    // All d embeddings of theta as certified disjoint boxes of width
    // <= 2^{-bits}; index distinguished_index() is the selected root.
    std::vector<ComplexInterval> embeddings(long bits) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (bits <= emb_bits_ && !emb_.empty()) return emb_;
        long d = degree();
        std::vector<ComplexInterval> out;
        if (d == 1) {
            out.push_back(theta_.enclosure(bits));
            dist_ = 0;
        } else {
            long b = bits;
            while (true) {
                auto cs = conjugates(theta_, b);
                if (emb_.empty()) {
                    out = cs.boxes;
                    dist_ = cs.self_index;
                    break;
                }
                // keep the established embedding order: match by overlap
                out.assign(static_cast<size_t>(d), ComplexInterval{});
                std::vector<int> hits(static_cast<size_t>(d), 0);
                bool ok = true;
                for (const auto& box : cs.boxes) {
                    int match = -1;
                    for (size_t i = 0; i < emb_.size(); ++i)
                        if (box.overlaps(emb_[i])) {
                            if (match >= 0) {
                                ok = false;
                                break;
                            }
                            match = static_cast<int>(i);
                        }
                    if (!ok || match < 0) {
                        ok = false;
                        break;
                    }
                    out[static_cast<size_t>(match)] = box;
                    ++hits[static_cast<size_t>(match)];
                }
                if (ok)
                    for (int h : hits)
                        if (h != 1) ok = false;
                if (ok) {
                    for (size_t i = 0; i < out.size(); ++i)
                        out[i] = ComplexInterval{iv_intersect(out[i].re, emb_[i].re),
                                                 iv_intersect(out[i].im, emb_[i].im)};
                    break;
                }
                if (b >= default_precision_cap())
                    throw PrecisionExhausted("embedding refinement could not re-match conjugates");
                b *= 2;
            }
        }
        emb_ = out;
        emb_bits_ = bits;
        return emb_;
    }

    size_t distinguished_index() const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (!emb_.empty()) return dist_;
        }
        embeddings(96);
        std::lock_guard<std::mutex> lock(mu_);
        return dist_;
    }

  private:
    explicit NumberField(AlgebraicNumber theta) : theta_(std::move(theta)) {}
    AlgebraicNumber theta_;
    mutable std::mutex mu_;
    mutable std::vector<ComplexInterval> emb_;
    mutable long emb_bits_ = 0;
    mutable size_t dist_ = 0;
};

// Exact element of Z[theta], as integer coordinates in the power basis.
class OrderElement {
  public:
    OrderElement() = default;
    OrderElement(FieldPtr field, std::vector<Int> coords)
        : field_(std::move(field)), coords_(std::move(coords)) {
        if (!field_) throw InputError("order element without a field");
        coords_.resize(static_cast<size_t>(field_->degree()), Int(0));
    }

    static OrderElement from_int(const FieldPtr& f, const Int& n) {
        std::vector<Int> c(static_cast<size_t>(f->degree()), Int(0));
        c[0] = n;
        return OrderElement(f, std::move(c));
    }
    static OrderElement generator(const FieldPtr& f) {
        if (f->degree() < 2) throw DomainError("generator of a rational field is 1-dimensional");
        std::vector<Int> c(static_cast<size_t>(f->degree()), Int(0));
        c[1] = 1;
        return OrderElement(f, std::move(c));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Int>& coords() const { return coords_; }
    long dim() const { return field_->degree(); }
    bool is_zero() const {
        for (const auto& c : coords_)
            if (c != 0) return false;
        return true;
    }
    bool operator==(const OrderElement& o) const {
        return field_ == o.field_ && coords_ == o.coords_;
    }

    long max_coord_bits() const {
        long m = 0;
        for (const auto& c : coords_) m = std::max(m, bit_length(c));
        return m;
    }

  private:
    FieldPtr field_;
    std::vector<Int> coords_;
};

namespace field_detail {

inline void check_same_field(const OrderElement& a, const OrderElement& b) {
    if (a.field() != b.field()) throw InputError("field mismatch between order elements");
}

// reduce a coordinate vector of length <= 2d-1 modulo the monic minimal
// polynomial of theta
inline std::vector<Int> reduce_mod_minpoly(std::vector<Int> v, const IntPolynomial& m) {
    size_t d = static_cast<size_t>(m.degree());
    for (size_t i = v.size(); i-- > d;) {
        if (v[i] == 0) continue;
        Int f = v[i];
        v[i] = 0;
        for (size_t j = 0; j < d; ++j) v[i - d + j] -= f * m.coeffs()[j];
    }
    v.resize(d);
    return v;
}

}  // namespace field_detail

inline OrderElement operator+(const OrderElement& a, const OrderElement& b) {
    field_detail::check_same_field(a, b);
    std::vector<Int> c(a.coords());
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords()[i];
    return OrderElement(a.field(), std::move(c));
}

inline OrderElement operator-(const OrderElement& a, const OrderElement& b) {
    field_detail::check_same_field(a, b);
    std::vector<Int> c(a.coords());
    for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coords()[i];
    return OrderElement(a.field(), std::move(c));
}

inline OrderElement operator-(const OrderElement& a) {
    std::vector<Int> c(a.coords());
    for (auto& x : c) x = -x;
    return OrderElement(a.field(), std::move(c));
}

inline OrderElement operator*(const OrderElement& a, const OrderElement& b) {
    field_detail::check_same_field(a, b);
    size_t d = static_cast<size_t>(a.dim());
    if (d == 1) return OrderElement(a.field(), {a.coords()[0] * b.coords()[0]});
    std::vector<Int> prod(2 * d - 1, Int(0));
    for (size_t i = 0; i < d; ++i) {
        if (a.coords()[i] == 0) continue;
        for (size_t j = 0; j < d; ++j) {
            if (b.coords()[j] == 0) continue;
            prod[i + j] += a.coords()[i] * b.coords()[j];
        }
    }
    return OrderElement(a.field(),
                        field_detail::reduce_mod_minpoly(std::move(prod), a.field()->minpoly()));
}

inline OrderElement operator*(const OrderElement& a, const Int& s) {
    std::vector<Int> c(a.coords());
    for (auto& x : c) x *= s;
    return OrderElement(a.field(), std::move(c));
}

inline OrderElement pow(const OrderElement& a, unsigned long e) {
    OrderElement acc = OrderElement::from_int(a.field(), Int(1));
    OrderElement base = a;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        if (e >>= 1) base = base * base;
    }
    return acc;
}

// Largest positive integer r with x/r still in the order (gcd of coordinates).
inline Int content_divisor(const OrderElement& x) {
    if (x.is_zero()) throw DomainError("content of zero");
    Int g(0);
    for (const auto& c : x.coords()) g = gcd(g, c);
    return abs(g);
}

inline bool divides(const Int& r, const OrderElement& x) {
    for (const auto& c : x.coords())
        if (!mpz_divisible_p(c.get_mpz_t(), r.get_mpz_t())) return false;
    return true;
}

inline OrderElement divide_exact(const OrderElement& x, const Int& r) {
    if (r == 0) throw DomainError("division by zero integer");
    if (!divides(r, x)) throw DomainError("integer does not divide the order element");
    std::vector<Int> c(x.coords());
    for (auto& v : c) v /= r;
    return OrderElement(x.field(), std::move(c));
}

// Quotient of an order element by a positive integer denominator, kept in
// lowest terms with the denominator minimal.
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(OrderElement num, Int den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw DomainError("zero denominator");
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        if (!num_.is_zero()) {
            Int g = gcd(content_divisor(num_), den_);
            if (g > 1) {
                num_ = divide_exact(num_, g);
                den_ /= g;
            }
        } else {
            den_ = 1;
        }
    }
    explicit FieldElement(OrderElement num) : FieldElement(std::move(num), Int(1)) {}

    const OrderElement& num() const { return num_; }
    const Int& den() const { return den_; }
    const FieldPtr& field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }

    Rat coordinate(size_t i) const {
        Rat r(num_.coords().at(i), den_);
        r.canonicalize();
        return r;
    }

    bool operator==(const FieldElement& o) const {
        return den_ == o.den_ && num_ == o.num_;
    }

  private:
    OrderElement num_;
    Int den_ = 1;
};

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    return FieldElement(a.num() * b.num(), a.den() * b.den());
}
inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return FieldElement(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return FieldElement(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
}

// pi_i coordinate map on order elements (always an integer).
inline Int coordinate(const OrderElement& x, size_t i) { return x.coords().at(i); }

// Multiplication-by-x matrix on the power basis, column j = coords(x theta^j).
inline std::vector<std::vector<Int>> multiplication_matrix(const OrderElement& x) {
    size_t d = static_cast<size_t>(x.dim());
    std::vector<std::vector<Int>> m(d, std::vector<Int>(d));
    OrderElement v = x;
    for (size_t j = 0; j < d; ++j) {
        for (size_t i = 0; i < d; ++i) m[i][j] = v.coords()[i];
        if (j + 1 < d) {
            std::vector<Int> shifted(d + 1, Int(0));
            for (size_t i = 0; i < d; ++i) shifted[i + 1] = v.coords()[i];
            v = OrderElement(x.field(), field_detail::reduce_mod_minpoly(
                                            std::move(shifted), x.field()->minpoly()));
        }
    }
    return m;
}

// Characteristic polynomial of the multiplication matrix via the
// Faddeev-LeVerrier recurrence; monic of degree d with integer coefficients.
inline QPoly char_poly(const OrderElement& x) {
    size_t d = static_cast<size_t>(x.dim());
    auto mi = multiplication_matrix(x);
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) m[i][j] = Rat(mi[i][j]);

    std::vector<Rat> c(d + 1, Rat(0));
    c[d] = 1;
    std::vector<std::vector<Rat>> a(d, std::vector<Rat>(d, Rat(0)));
    for (size_t i = 0; i < d; ++i) a[i][i] = Rat(1);
    for (size_t k = 1; k <= d; ++k) {
        // a = m * a
        std::vector<std::vector<Rat>> na(d, std::vector<Rat>(d, Rat(0)));
        for (size_t i = 0; i < d; ++i)
            for (size_t l = 0; l < d; ++l) {
                if (m[i][l] == 0) continue;
                for (size_t j = 0; j < d; ++j) na[i][j] += m[i][l] * a[l][j];
            }
        a = std::move(na);
        Rat tr(0);
        for (size_t i = 0; i < d; ++i) tr += a[i][i];
        Rat ck = -tr / Rat(static_cast<long>(k));
        c[d - k] = ck;
        for (size_t i = 0; i < d; ++i) a[i][i] += ck;
    }
    return QPoly(std::move(c));
}

// Minimal polynomial of an order element; the characteristic polynomial is
// minpoly^{d/deg}, so the squarefree part recovers it exactly.
inline IntPolynomial minimal_polynomial(const OrderElement& x) {
    if (x.dim() == 1) return IntPolynomial({-x.coords()[0], Int(1)});
    return IntPolynomial::from_qpoly(squarefree_part(char_poly(x)));
}

inline IntPolynomial minimal_polynomial(const FieldElement& x) {
    IntPolynomial m = minimal_polynomial(x.num());
    if (x.den() == 1) return m;
    return m.roots_scaled_down(x.den());
}

// Norm over Q(x) (the product of the conjugates of x itself).
inline Int norm_own_field(const OrderElement& x) {
    if (x.is_zero()) throw DomainError("norm of zero");
    IntPolynomial m = minimal_polynomial(x);
    if (m.leading() != 1) throw DomainError("order element with non-monic minimal polynomial");
    Int n = m.constant_term();
    if (m.degree() % 2 == 1) n = -n;
    return n;
}

// Field norm N_{K/Q}(x) = det of the multiplication matrix.
inline Int field_norm(const OrderElement& x) {
    QPoly cp = char_poly(x);
    Rat c0 = cp.coeff(0);
    Int n = c0.get_num();  // char poly of an integer matrix has integer coefficients
    if (x.dim() % 2 == 1) n = -n;
    return n;
}

// N(x)/x as an exact order element: with minimal polynomial
// x^k + e_{k-1} x^{k-1} + ... + e_0, N(x)/x = (-1)^{k+1}(x^{k-1} + e_{k-1} x^{k-2} + ... + e_1).
inline OrderElement norm_cofactor(const OrderElement& x) {
    if (x.is_zero()) throw DomainError("norm cofactor of zero");
    IntPolynomial m = minimal_polynomial(x);
    if (m.leading() != 1) throw DomainError("order element with non-monic minimal polynomial");
    long k = m.degree();
    OrderElement acc = OrderElement::from_int(x.field(), Int(1));  // x^{k-1} term
    for (long i = k - 1; i >= 1; --i) {
        acc = acc * x;
        acc = acc + OrderElement::from_int(x.field(), m.coeffs()[static_cast<size_t>(i)]);
    }
    if (k % 2 == 0) acc = -acc;
    return acc;
}

// Exact inverse via the extended Euclidean algorithm in Q[X].
inline FieldElement order_inverse(const OrderElement& x) {
    if (x.is_zero()) throw DomainError("division by zero in the order");
    if (x.dim() == 1) {
        OrderElement num = OrderElement::from_int(x.field(), Int(1));
        return FieldElement(num * (x.coords()[0] < 0 ? Int(-1) : Int(1)), abs(x.coords()[0]));
    }
    std::vector<Rat> xs(x.coords().size());
    for (size_t i = 0; i < xs.size(); ++i) xs[i] = Rat(x.coords()[i]);
    QPoly u(std::move(xs));
    auto [g, s, t] = poly_xgcd(u, x.field()->minpoly().to_qpoly());
    if (g.degree() != 0) throw DomainError("inverse failed: generator polynomial not irreducible?");
    // s * x = 1 mod minpoly; clear denominators
    Int den(1);
    for (const auto& q : s.c) {
        Int d = q.get_den();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<Int> coords(x.coords().size(), Int(0));
    for (size_t i = 0; i < s.c.size(); ++i) {
        Rat v = s.c[i] * Rat(den);
        coords[i] = v.get_num();
    }
    return FieldElement(OrderElement(x.field(), std::move(coords)), den);
}

inline FieldElement inverse(const FieldElement& x) {
    if (x.is_zero()) throw DomainError("division by zero");
    FieldElement inv_num = order_inverse(x.num());
    return FieldElement(inv_num.num() * x.den(), inv_num.den());
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return a * inverse(b);
}

// ---- embeddings and rigorous magnitudes ----------------------------------

// sigma_k(x) with mixed absolute/relative width target 2^{-bits}. With
// require_nonzero the absolute criterion is skipped, so the returned box
// certifies x != 0 at this embedding (needed for minimum-modulus bounds).
inline ComplexInterval embed(const OrderElement& x, size_t k, long bits,
                             bool require_nonzero = false) {
    const FieldPtr& f = x.field();
    if (x.is_zero()) {
        if (require_nonzero) throw DomainError("embed: zero element");
        return ComplexInterval::from_rat(Rat(0), Rat(0), bits);
    }
    long w = bits + 64;
    while (true) {
        ComplexInterval th = f->embeddings(w)[k];
        long prec = w + 32;
        ComplexInterval acc =
            ComplexInterval::real(RealInterval(x.coords().back(), prec));
        for (size_t i = x.coords().size() - 1; i-- > 0;) {
            acc = cv_mul(acc, th, prec);
            acc.re = iv_add(acc.re, RealInterval(x.coords()[i], prec), prec);
        }
        if (!require_nonzero && acc.width_below_2exp(-bits)) return acc;
        RealInterval m = cv_abs(acc, prec);
        if (!m.contains_zero()) {
            Mpfr target(prec);
            mpfr_mul_2si(target.get(), m.lo(), -bits, MPFR_RNDD);
            Mpfr wr = acc.re.width(), wi = acc.im.width();
            if (mpfr_cmp(wr.get(), target.get()) <= 0 && mpfr_cmp(wi.get(), target.get()) <= 0)
                return acc;
        }
        // |sigma(x)| can be as small as ~house^{-(d-1)}, so the cancellation
        // budget scales with (d+1) coordinate sizes
        if (w >= default_precision_cap() + (x.dim() + 1) * x.max_coord_bits())
            throw PrecisionExhausted("embedding evaluation exceeded the precision budget");
        w *= 2;
    }
}

inline ComplexInterval embed(const FieldElement& x, size_t k, long bits) {
    ComplexInterval n = embed(x.num(), k, bits + 2);
    if (x.den() == 1) return n;
    RealInterval d(x.den(), bits + 16);
    return {iv_div(n.re, d, bits + 16), iv_div(n.im, d, bits + 16)};
}

// Value at the field's distinguished embedding.
inline ComplexInterval embed_value(const OrderElement& x, long bits) {
    return embed(x, x.field()->distinguished_index(), bits);
}
inline ComplexInterval embed_value(const FieldElement& x, long bits) {
    return embed(x, x.field()->distinguished_index(), bits);
}

// |x| at the distinguished embedding.
inline RealInterval abs_value(const OrderElement& x, long bits) {
    return cv_abs(embed_value(x, bits), bits + 16);
}
inline RealInterval abs_value(const FieldElement& x, long bits) {
    return cv_abs(embed_value(x, bits), bits + 16);
}

// house(x): maximum modulus over all embeddings (= over the conjugates of x).
inline RealInterval house(const OrderElement& x, long bits) {
    long d = x.dim();
    RealInterval m = cv_abs(embed(x, 0, bits), bits + 16);
    for (long k = 1; k < d; ++k)
        m = iv_max(m, cv_abs(embed(x, static_cast<size_t>(k), bits), bits + 16));
    return m;
}
inline RealInterval house(const FieldElement& x, long bits) {
    RealInterval n = house(x.num(), bits);
    if (x.den() == 1) return n;
    return iv_div(n, RealInterval(x.den(), bits + 16), bits + 16);
}

// house(1/x) = 1 / min_k |sigma_k(x)| without forming the inverse element.
inline RealInterval house_of_inverse(const OrderElement& x, long bits) {
    if (x.is_zero()) throw DomainError("house of 1/0");
    long d = x.dim();
    RealInterval m = cv_abs(embed(x, 0, bits, /*require_nonzero=*/true), bits + 16);
    for (long k = 1; k < d; ++k) {
        RealInterval mk =
            cv_abs(embed(x, static_cast<size_t>(k), bits, /*require_nonzero=*/true), bits + 16);
        m = iv_neg(iv_max(iv_neg(m), iv_neg(mk)));  // interval min
    }
    return iv_div(RealInterval(1L, bits + 16), m, bits + 16);
}

// H(x) via M(minpoly) computed from embeddings: the d field embeddings list
// every conjugate of x exactly d/deg(x) times, so
// M(x) = |lc| (prod_k max(1,|sigma_k x|))^{deg(x)/d} and H(x) = M(x)^{1/deg x}.
inline RealInterval element_height(const FieldElement& x, long bits) {
    if (x.is_zero()) throw DomainError("height of zero is excluded here");
    IntPolynomial m = minimal_polynomial(x);
    long dx = m.degree();
    long d = x.field()->degree();
    long w = bits + 16;
    while (true) {
        long prec = w + 16;
        RealInterval prod(m.leading(), prec);
        RealInterval one(1L, prec);
        for (long k = 0; k < d; ++k) {
            RealInterval mk = cv_abs(embed(x, static_cast<size_t>(k), w), prec);
            prod = iv_mul(prod, iv_pow(iv_max(one, mk), Rat(dx, d), prec), prec);
        }
        RealInterval h = iv_pow(prod, Rat(1, dx), prec);
        Mpfr target(prec);
        mpfr_mul_2si(target.get(), h.lo(), -bits, MPFR_RNDD);
        if (mpfr_cmp(h.width().get(), target.get()) <= 0) return h;
        if (w >= default_precision_cap()) throw PrecisionExhausted("height refinement exceeded cap");
        w *= 2;
    }
}

inline RealInterval element_height(const OrderElement& x, long bits) {
    return element_height(FieldElement(x), bits);
}

// ---- Lemma 4.7 constants ---------------------------------------------------

namespace field_detail {

// |det| and max column-absolute-sum data for the adjugate of a complex
// interval matrix, by cofactor expansion. Fine for the small d used here.
inline ComplexInterval det_rec(const std::vector<std::vector<ComplexInterval>>& m,
                               std::vector<size_t> rows, std::vector<size_t> cols, long prec) {
    size_t n = rows.size();
    if (n == 1) return m[rows[0]][cols[0]];
    ComplexInterval acc = ComplexInterval::from_rat(Rat(0), Rat(0), prec);
    for (size_t j = 0; j < n; ++j) {
        std::vector<size_t> sub_rows(rows.begin() + 1, rows.end());
        std::vector<size_t> sub_cols;
        for (size_t k = 0; k < n; ++k)
            if (k != j) sub_cols.push_back(cols[k]);
        ComplexInterval minor = det_rec(m, sub_rows, sub_cols, prec);
        ComplexInterval term = cv_mul(m[rows[0]][cols[j]], minor, prec);
        acc = (j % 2 == 0) ? cv_add(acc, term, prec) : cv_sub(acc, term, prec);
    }
    return acc;
}

}  // namespace field_detail

struct BasisConstants {
    RealInterval c1;  // upper constant: sum of houses of the basis
    RealInterval c2;  // certified positive lower constant, 1/||V^{-1}||_inf
};

// Two-sided comparison constants between coordinates and the house
// (C2 max|c_i| <= house(sum c_i x_i) <= C1 max|c_i| for the power basis).
inline BasisConstants basis_constants(const FieldPtr& f, long bits = 64) {
    long d = f->degree();
    if (d == 1)
        return {RealInterval(1L, bits + 32), RealInterval(1L, bits + 32)};

    long w = bits + 32;
    while (true) {
        long prec = w + 32;
        auto th = f->embeddings(w);
        // C1 = sum_i max_k |theta_k|^i
        RealInterval c1(0L, prec);
        for (long i = 0; i < d; ++i) {
            RealInterval hi = cv_abs(th[0], prec);
            for (long k = 1; k < d; ++k) hi = iv_max(hi, cv_abs(th[static_cast<size_t>(k)], prec));
            c1 = iv_add(c1, iv_pow(hi, Rat(i), prec), prec);
        }

        // Vandermonde V[k][i] = theta_k^i
        std::vector<std::vector<ComplexInterval>> v(static_cast<size_t>(d));
        for (long k = 0; k < d; ++k) {
            ComplexInterval p = ComplexInterval::from_rat(Rat(1), Rat(0), prec);
            for (long i = 0; i < d; ++i) {
                v[static_cast<size_t>(k)].push_back(p);
                if (i + 1 < d) p = cv_mul(p, th[static_cast<size_t>(k)], prec);
            }
        }
        std::vector<size_t> all(static_cast<size_t>(d));
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        ComplexInterval det = field_detail::det_rec(v, all, all, prec);
        RealInterval dabs = cv_abs(det, prec);
        if (dabs.contains_zero()) {
            if (w >= default_precision_cap())
                throw PrecisionExhausted(
                    "singular embedding matrix enclosure; root isolation is suspect");
            w *= 2;
            continue;
        }
        // ||V^{-1}||_inf = max_i sum_j |cof_ji| / |det|
        RealInterval max_row(0L, prec);
        for (long i = 0; i < d; ++i) {
            RealInterval row(0L, prec);
            for (long j = 0; j < d; ++j) {
                std::vector<size_t> rows, cols;
                for (long k = 0; k < d; ++k) {
                    if (k != j) rows.push_back(static_cast<size_t>(k));
                    if (k != i) cols.push_back(static_cast<size_t>(k));
                }
                ComplexInterval minor = field_detail::det_rec(v, rows, cols, prec);
                row = iv_add(row, cv_abs(minor, prec), prec);
            }
            max_row = iv_max(max_row, row);
        }
        RealInterval inv_norm = iv_div(max_row, dabs, prec);
        RealInterval c2 = iv_div(RealInterval(1L, prec), inv_norm, prec);
        if (!c2.is_positive()) {
            if (w >= default_precision_cap())
                throw PrecisionExhausted("could not certify a positive lower basis constant");
            w *= 2;
            continue;
        }
        return {c1, c2};
    }
}

}  // namespace prodcert
