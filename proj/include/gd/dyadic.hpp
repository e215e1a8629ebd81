#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gd/rational.hpp"

namespace gd {

// Dyadic number m * 2^e with arbitrary-precision mantissa. All arithmetic
// here takes an explicit mantissa precision and rounding direction
// (dir < 0 rounds down, dir > 0 rounds up), so callers can build certified
// enclosures without hidden error.
struct Dy {
    Int m;
    long e = 0;

    Dy() : m(0) {}
    Dy(Int mantissa, long exponent) : m(std::move(mantissa)), e(exponent) {}
    explicit Dy(long v) : m(v) {}

    bool is_zero() const { return m == 0; }
    int sgn() const { return mpz_sgn(m.get_mpz_t()); }
    size_t bits() const { return m == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2); }
    Dy operator-() const { return Dy(-m, e); }

    Rational to_rational() const;
    double to_double() const;
};

int dy_cmp(const Dy& a, const Dy& b);
inline bool operator<(const Dy& a, const Dy& b) { return dy_cmp(a, b) < 0; }
inline bool operator<=(const Dy& a, const Dy& b) { return dy_cmp(a, b) <= 0; }
inline bool operator==(const Dy& a, const Dy& b) { return dy_cmp(a, b) == 0; }

// Keep at most prec mantissa bits, rounding toward -inf (dir < 0) or +inf.
Dy dy_round(const Dy& x, unsigned prec, int dir);

Dy dy_add(const Dy& a, const Dy& b, unsigned prec, int dir);
Dy dy_sub(const Dy& a, const Dy& b, unsigned prec, int dir);
Dy dy_add_exact(const Dy& a, const Dy& b);
Dy dy_mul_exact(const Dy& a, const Dy& b);
Dy dy_mul(const Dy& a, const Dy& b, unsigned prec, int dir);
Dy dy_div(const Dy& a, const Dy& b, unsigned prec, int dir); // b != 0
Dy dy_sqrt(const Dy& x, unsigned prec, int dir);             // x >= 0
Dy dy_from_rational(const Rational& q, unsigned prec, int dir);
Dy dy_pow2(long e); // exact 2^e

// Closed interval [lo, hi] of dyadics. Operations round outward.
struct DyIv {
    Dy lo, hi;

    DyIv() = default;
    DyIv(Dy l, Dy h) : lo(std::move(l)), hi(std::move(h)) {}
    explicit DyIv(const Dy& p) : lo(p), hi(p) {}

    bool contains_zero() const { return lo.sgn() <= 0 && hi.sgn() >= 0; }
    Dy width(unsigned prec) const { return dy_sub(hi, lo, prec, +1); }
    Dy mid(unsigned prec) const {
        Dy s = dy_add(lo, hi, prec + 2, -1);
        return Dy(s.m, s.e - 1);
    }

    static DyIv from_rational(const Rational& q, unsigned prec);
    static DyIv hull(const Rational& a, const Rational& b, unsigned prec);
};

DyIv iv_add(const DyIv& a, const DyIv& b, unsigned prec);
DyIv iv_sub(const DyIv& a, const DyIv& b, unsigned prec);
DyIv iv_neg(const DyIv& a);
DyIv iv_mul(const DyIv& a, const DyIv& b, unsigned prec);
DyIv iv_div(const DyIv& a, const DyIv& b, unsigned prec); // requires b.lo > 0
DyIv iv_sqrt(const DyIv& a, unsigned prec);               // clips at 0
DyIv iv_sq(const DyIv& a, unsigned prec);                 // tight: result >= 0
DyIv iv_abs(const DyIv& a);
DyIv iv_min(const DyIv& a, const DyIv& b);
DyIv iv_max(const DyIv& a, const DyIv& b);
DyIv iv_union(const DyIv& a, const DyIv& b);
DyIv iv_scale(const DyIv& a, const Rational& c, unsigned prec);

// Axis-aligned box enclosing a complex value.
struct CBox {
    DyIv re, im;

    CBox() = default;
    CBox(DyIv r, DyIv i) : re(std::move(r)), im(std::move(i)) {}
    explicit CBox(DyIv r) : re(std::move(r)) {}

    static CBox from_gaussian(const GaussianRational& z, unsigned prec);
    CBox conj() const { return {re, iv_neg(im)}; }
    bool is_real_zero_im() const { return im.lo.is_zero() && im.hi.is_zero(); }
};

CBox cb_add(const CBox& a, const CBox& b, unsigned prec);
CBox cb_sub(const CBox& a, const CBox& b, unsigned prec);
CBox cb_mul(const CBox& a, const CBox& b, unsigned prec);
CBox cb_scale(const CBox& a, const GaussianRational& c, unsigned prec);
DyIv cb_abs(const CBox& a, unsigned prec); // encloses |z|
CBox cb_union(const CBox& a, const CBox& b);

} // namespace gd
