#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace gd {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("make_rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rational_from_long(long num, long den = 1) {
    return make_rational(Int(num), Int(den));
}

// Exact 2^e as a rational.
inline Rational pow2(long e) {
    Rational q(1);
    if (e >= 0)
        mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    else
        mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(-e));
    return q;
}

// Always "num/den", including integers ("3/1").
std::string rational_to_string(const Rational& q);
// Accepts "a" or "a/b"; nullopt on malformed input or zero denominator.
std::optional<Rational> rational_from_string(const std::string& s);

// Round q to a multiple of 2^-bits. dir < 0 floor, dir == 0 nearest
// (ties away from zero via the parity-free rule below), dir > 0 ceil.
Rational round_dyadic(const Rational& q, unsigned bits, int dir);

// Element of Q[i], kept exact.
struct GaussianRational {
    Rational re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit GaussianRational(Rational r) : re(std::move(r)), im(0) {}

    GaussianRational conj() const { return {re, Rational(-im)}; }
    Rational norm_sq() const { return re * re + im * im; }
    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator-() const { return {Rational(-re), Rational(-im)}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }
};

} // namespace gd
