#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gd/rational.hpp"

namespace gd {

// Exact rational interval, endpoints included. All operations are exact;
// this is intentionally rounding-free (tightness traded for simplicity).
struct QIv {
    Rational lo, hi;

    QIv() : lo(0), hi(0) {}
    QIv(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}
    explicit QIv(const Rational& p) : lo(p), hi(p) {}

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    Rational width() const { return hi - lo; }
};

QIv qiv_add(const QIv& a, const QIv& b);
QIv qiv_sub(const QIv& a, const QIv& b);
QIv qiv_neg(const QIv& a);
QIv qiv_mul(const QIv& a, const QIv& b);
QIv qiv_sq(const QIv& a); // tight: result >= 0
QIv qiv_abs(const QIv& a);
QIv qiv_div(const QIv& a, const QIv& b); // requires b.lo > 0
QIv qiv_min(const QIv& a, const QIv& b);
QIv qiv_max(const QIv& a, const QIv& b);

// Complex box with exact rational corners.
struct QBox {
    QIv re, im;

    QBox() = default;
    QBox(QIv r, QIv i) : re(std::move(r)), im(std::move(i)) {}
    explicit QBox(const GaussianRational& z) : re(z.re), im(z.im) {}

    QBox conj() const { return {re, qiv_neg(im)}; }
    bool contains(const GaussianRational& z) const { return re.contains(z.re) && im.contains(z.im); }
};

QBox qbox_add(const QBox& a, const QBox& b);
QBox qbox_mul(const QBox& a, const QBox& b);
QBox qbox_pow(const QBox& a, const Int& e); // e >= 0

// Commutative monomial in x_j and x_j^*. Each factor is keyed by
// kappa = 2*index + (starred ? 1 : 0); factors are strictly increasing in
// kappa and every exponent is >= 1, so representation equality is equality.
struct StarMonomial {
    // (kappa, exponent) pairs
    std::vector<std::pair<Int, Int>> factors;

    static Int kappa_of(const Int& index, bool starred) { return 2 * index + (starred ? 1 : 0); }
    static StarMonomial one() { return {}; }
    static StarMonomial variable(const Int& index, bool starred = false);
    // sorts, merges duplicate kappas, drops zero exponents
    static StarMonomial normalized(std::vector<std::pair<Int, Int>> raw);

    bool is_one() const { return factors.empty(); }
    Int degree() const;
    StarMonomial star() const;
    StarMonomial operator*(const StarMonomial& o) const;

    bool operator==(const StarMonomial& o) const { return factors == o.factors; }
    bool operator<(const StarMonomial& o) const { return factors < o.factors; }
};

inline Int kappa_index(const Int& kappa) { return kappa / 2; }
inline bool kappa_starred(const Int& kappa) { return mpz_odd_p(kappa.get_mpz_t()) != 0; }

// Element of the free commutative *-algebra over Q(i): a finite map from
// monomials to nonzero coefficients.
class StarPoly {
public:
    using Terms = std::map<StarMonomial, GaussianRational>;

    StarPoly() = default;

    static StarPoly zero() { return {}; }
    static StarPoly one() { return constant(GaussianRational(Rational(1))); }
    static StarPoly constant(const GaussianRational& c);
    static StarPoly constant(const Rational& c) { return constant(GaussianRational(c)); }
    static StarPoly variable(const Int& index, bool starred = false);
    static StarPoly from_terms(Terms t); // drops zero coefficients

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    GaussianRational constant_value() const; // 0 if zero, else requires is_constant

    StarPoly operator+(const StarPoly& o) const;
    StarPoly operator-(const StarPoly& o) const;
    StarPoly operator*(const StarPoly& o) const;
    StarPoly operator-() const;
    StarPoly star() const;
    StarPoly scale(const GaussianRational& c) const;
    bool operator==(const StarPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const StarPoly& o) const { return !(*this == o); }

    // substitute the constant c for x_index (starred occurrences get conj(c))
    StarPoly substitute(const Int& index, const GaussianRational& c) const;

    Int degree() const; // 0 for constants and zero
    // largest indeterminate index used, or nullopt for constant polynomials
    std::optional<Int> max_index() const;

    GaussianRational eval_exact(const std::map<Int, GaussianRational>& assignment) const;
    QBox eval_interval(const std::map<Int, QBox>& boxes) const;

private:
    void add_term(const StarMonomial& m, const GaussianRational& c);
    Terms terms_;
};

GaussianRational gaussian_pow(const GaussianRational& z, const Int& e);

} // namespace gd
