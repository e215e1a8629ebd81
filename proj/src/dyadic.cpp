#include "gd/dyadic.hpp"

#include <algorithm>

namespace gd {

Rational Dy::to_rational() const {
    Rational q(m);
    if (e >= 0)
        mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    else
        mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(-e));
    q.canonicalize();
    return q;
}

double Dy::to_double() const {
    return mpz_get_d(m.get_mpz_t()) * std::ldexp(1.0, static_cast<int>(std::max(-1060L, std::min(1060L, e))));
}

int dy_cmp(const Dy& a, const Dy& b) {
    int sa = a.sgn(), sb = b.sgn();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    // compare a.m * 2^a.e with b.m * 2^b.e exactly
    long d = a.e - b.e;
    Int x = a.m, y = b.m;
    if (d > 0)
        mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(d));
    else if (d < 0)
        mpz_mul_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(-d));
    return mpz_cmp(x.get_mpz_t(), y.get_mpz_t());
}

Dy dy_round(const Dy& x, unsigned prec, int dir) {
    if (x.m == 0) return Dy();
    size_t b = x.bits();
    if (b <= prec) return x;
    unsigned long shift = static_cast<unsigned long>(b - prec);
    Int q;
    if (dir < 0)
        mpz_fdiv_q_2exp(q.get_mpz_t(), x.m.get_mpz_t(), shift);
    else
        mpz_cdiv_q_2exp(q.get_mpz_t(), x.m.get_mpz_t(), shift);
    return Dy(std::move(q), x.e + static_cast<long>(shift));
}

Dy dy_add_exact(const Dy& a, const Dy& b) {
    if (a.m == 0) return b;
    if (b.m == 0) return a;
    long e = std::min(a.e, b.e);
    Int x = a.m, y = b.m;
    if (a.e > e) mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(a.e - e));
    if (b.e > e) mpz_mul_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(b.e - e));
    return Dy(x + y, e);
}

Dy dy_mul_exact(const Dy& a, const Dy& b) {
    if (a.m == 0 || b.m == 0) return Dy();
    return Dy(a.m * b.m, a.e + b.e);
}

Dy dy_add(const Dy& a, const Dy& b, unsigned prec, int dir) {
    return dy_round(dy_add_exact(a, b), prec, dir);
}

Dy dy_sub(const Dy& a, const Dy& b, unsigned prec, int dir) {
    return dy_add(a, -b, prec, dir);
}

Dy dy_mul(const Dy& a, const Dy& b, unsigned prec, int dir) {
    if (a.m == 0 || b.m == 0) return Dy();
    return dy_round(Dy(a.m * b.m, a.e + b.e), prec, dir);
}

Dy dy_div(const Dy& a, const Dy& b, unsigned prec, int dir) {
    if (a.m == 0) return Dy();
    // a.m * 2^s / b.m with enough bits, then exponent fix-up
    long s = static_cast<long>(prec) + static_cast<long>(b.bits()) - static_cast<long>(a.bits()) + 2;
    if (s < 0) s = 0;
    Int num = a.m;
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(s));
    Int q;
    if (dir < 0)
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.m.get_mpz_t());
    else
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.m.get_mpz_t());
    return dy_round(Dy(std::move(q), a.e - b.e - s), prec, dir);
}

Dy dy_sqrt(const Dy& x, unsigned prec, int dir) {
    int s = x.sgn();
    if (s < 0) throw std::domain_error("dy_sqrt: negative");
    if (s == 0) return Dy();
    // write x = n * 2^(2g), n integer with >= 2*prec+2 bits
    long need = 2L * prec + 4;
    long avail = static_cast<long>(x.bits()) + x.e; // ~ log2(x)
    (void)avail;
    long shift = need - (static_cast<long>(x.bits()) + (x.e % 2 == 0 ? 0 : 1));
    if (shift < 0) shift = 0;
    long total = shift + ((x.e - shift) % 2 == 0 ? 0 : 1); // make e - total even
    Int n = x.m;
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(total));
    long g = (x.e - total) / 2;
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (dir > 0 && r * r < n) r += 1;
    return dy_round(Dy(std::move(r), g), prec, dir);
}

Dy dy_from_rational(const Rational& q, unsigned prec, int dir) {
    if (q == 0) return Dy();
    const Int& num = q.get_num();
    const Int& den = q.get_den();
    if (den == 1) return dy_round(Dy(num, 0), prec, dir);
    long s = static_cast<long>(prec) + static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) + 2;
    if (s < 0) s = 0;
    Int scaled;
    mpz_mul_2exp(scaled.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(s));
    Int r;
    if (dir < 0)
        mpz_fdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    else
        mpz_cdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    return dy_round(Dy(std::move(r), -s), prec, dir);
}

Dy dy_pow2(long e) { return Dy(Int(1), e); }

DyIv DyIv::from_rational(const Rational& q, unsigned prec) {
    return DyIv(dy_from_rational(q, prec, -1), dy_from_rational(q, prec, +1));
}

DyIv DyIv::hull(const Rational& a, const Rational& b, unsigned prec) {
    const Rational& lo = a <= b ? a : b;
    const Rational& hi = a <= b ? b : a;
    return DyIv(dy_from_rational(lo, prec, -1), dy_from_rational(hi, prec, +1));
}

DyIv iv_add(const DyIv& a, const DyIv& b, unsigned prec) {
    return DyIv(dy_add(a.lo, b.lo, prec, -1), dy_add(a.hi, b.hi, prec, +1));
}

DyIv iv_sub(const DyIv& a, const DyIv& b, unsigned prec) {
    return DyIv(dy_sub(a.lo, b.hi, prec, -1), dy_sub(a.hi, b.lo, prec, +1));
}

DyIv iv_neg(const DyIv& a) { return DyIv(-a.hi, -a.lo); }

DyIv iv_mul(const DyIv& a, const DyIv& b, unsigned prec) {
    // exact endpoint products, then directed rounding of min/max
    Dy cands[4] = {
        Dy(a.lo.m * b.lo.m, a.lo.e + b.lo.e),
        Dy(a.lo.m * b.hi.m, a.lo.e + b.hi.e),
        Dy(a.hi.m * b.lo.m, a.hi.e + b.lo.e),
        Dy(a.hi.m * b.hi.m, a.hi.e + b.hi.e),
    };
    int lo_i = 0, hi_i = 0;
    for (int i = 1; i < 4; ++i) {
        if (dy_cmp(cands[i], cands[lo_i]) < 0) lo_i = i;
        if (dy_cmp(cands[i], cands[hi_i]) > 0) hi_i = i;
    }
    return DyIv(dy_round(cands[lo_i], prec, -1), dy_round(cands[hi_i], prec, +1));
}

DyIv iv_div(const DyIv& a, const DyIv& b, unsigned prec) {
    if (b.lo.sgn() <= 0) throw std::domain_error("iv_div: denominator not strictly positive");
    Dy lo = a.lo.sgn() >= 0 ? dy_div(a.lo, b.hi, prec, -1) : dy_div(a.lo, b.lo, prec, -1);
    Dy hi = a.hi.sgn() >= 0 ? dy_div(a.hi, b.lo, prec, +1) : dy_div(a.hi, b.hi, prec, +1);
    return DyIv(std::move(lo), std::move(hi));
}

DyIv iv_sqrt(const DyIv& a, unsigned prec) {
    Dy lo = a.lo.sgn() <= 0 ? Dy() : dy_sqrt(a.lo, prec, -1);
    Dy hi = a.hi.sgn() <= 0 ? Dy() : dy_sqrt(a.hi, prec, +1);
    return DyIv(std::move(lo), std::move(hi));
}

DyIv iv_sq(const DyIv& a, unsigned prec) {
    if (a.lo.sgn() >= 0)
        return DyIv(dy_mul(a.lo, a.lo, prec, -1), dy_mul(a.hi, a.hi, prec, +1));
    if (a.hi.sgn() <= 0)
        return DyIv(dy_mul(a.hi, a.hi, prec, -1), dy_mul(a.lo, a.lo, prec, +1));
    Dy c1 = dy_mul(a.lo, a.lo, prec, +1), c2 = dy_mul(a.hi, a.hi, prec, +1);
    return DyIv(Dy(), dy_cmp(c1, c2) >= 0 ? c1 : c2);
}

DyIv iv_abs(const DyIv& a) {
    if (a.lo.sgn() >= 0) return a;
    if (a.hi.sgn() <= 0) return iv_neg(a);
    Dy nlo = -a.lo;
    return DyIv(Dy(), dy_cmp(nlo, a.hi) >= 0 ? nlo : a.hi);
}

DyIv iv_min(const DyIv& a, const DyIv& b) {
    return DyIv(dy_cmp(a.lo, b.lo) <= 0 ? a.lo : b.lo, dy_cmp(a.hi, b.hi) <= 0 ? a.hi : b.hi);
}

DyIv iv_max(const DyIv& a, const DyIv& b) {
    return DyIv(dy_cmp(a.lo, b.lo) >= 0 ? a.lo : b.lo, dy_cmp(a.hi, b.hi) >= 0 ? a.hi : b.hi);
}

DyIv iv_union(const DyIv& a, const DyIv& b) {
    return DyIv(dy_cmp(a.lo, b.lo) <= 0 ? a.lo : b.lo, dy_cmp(a.hi, b.hi) >= 0 ? a.hi : b.hi);
}

DyIv iv_scale(const DyIv& a, const Rational& c, unsigned prec) {
    return iv_mul(a, DyIv::from_rational(c, prec), prec);
}

CBox CBox::from_gaussian(const GaussianRational& z, unsigned prec) {
    return CBox(DyIv::from_rational(z.re, prec), DyIv::from_rational(z.im, prec));
}

CBox cb_add(const CBox& a, const CBox& b, unsigned prec) {
    return {iv_add(a.re, b.re, prec), iv_add(a.im, b.im, prec)};
}

CBox cb_sub(const CBox& a, const CBox& b, unsigned prec) {
    return {iv_sub(a.re, b.re, prec), iv_sub(a.im, b.im, prec)};
}

CBox cb_mul(const CBox& a, const CBox& b, unsigned prec) {
    if (a.is_real_zero_im() && b.is_real_zero_im())
        return CBox(iv_mul(a.re, b.re, prec));
    DyIv re = iv_sub(iv_mul(a.re, b.re, prec), iv_mul(a.im, b.im, prec), prec);
    DyIv im = iv_add(iv_mul(a.re, b.im, prec), iv_mul(a.im, b.re, prec), prec);
    return {std::move(re), std::move(im)};
}

CBox cb_scale(const CBox& a, const GaussianRational& c, unsigned prec) {
    return cb_mul(a, CBox::from_gaussian(c, prec), prec);
}

DyIv cb_abs(const CBox& a, unsigned prec) {
    if (a.is_real_zero_im()) return iv_abs(a.re);
    return iv_sqrt(iv_add(iv_sq(a.re, prec), iv_sq(a.im, prec), prec), prec);
}

CBox cb_union(const CBox& a, const CBox& b) {
    return {iv_union(a.re, b.re), iv_union(a.im, b.im)};
}

} // namespace gd
