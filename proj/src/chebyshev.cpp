#include "gd/chebyshev.hpp"

#include <algorithm>
#include <queue>

#include "gd/errors.hpp"

namespace gd {

namespace {

constexpr long kFix = 64; // fixed-point fraction bits for certified Clenshaw

// nearest-below dyadic with exact leftover
Dy round_with_delta(const Rational& v, unsigned prec, Rational* delta) {
    Dy r = dy_from_rational(v, prec, -1);
    *delta += v - r.to_rational();
    return r;
}

void trim(std::vector<Dy>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

// coefficients of t * P where P is in shifted Chebyshev basis
std::vector<Rational> shift_mul_t(const std::vector<Rational>& p) {
    std::vector<Rational> out(p.size() + 1, Rational(0));
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        out[i] += p[i] / 2;
        out[i + 1] += p[i] / 4;
        out[i == 0 ? 1 : i - 1] += p[i] / 4;
    }
    return out;
}

} // namespace

ChebSeries ChebSeries::constant(const Rational& v, unsigned prec) {
    ChebSeries s;
    if (v == 0) return s;
    Rational delta = 0;
    s.c.push_back(round_with_delta(v, prec, &delta));
    s.err = delta;
    trim(s.c);
    return s;
}

ChebSeries ChebSeries::from_rationals(const std::vector<Rational>& cheb, unsigned prec) {
    ChebSeries s;
    Rational delta = 0;
    s.c.reserve(cheb.size());
    for (const Rational& q : cheb) s.c.push_back(round_with_delta(q, prec, &delta));
    s.err = delta;
    trim(s.c);
    return s;
}

ChebSeries ChebSeries::from_monomial(const std::vector<Rational>& mono, unsigned prec) {
    std::vector<Rational> acc;
    std::vector<Rational> power{Rational(1)}; // t^j in the shifted basis
    for (size_t j = 0; j < mono.size(); ++j) {
        if (mono[j] != 0) {
            if (acc.size() < power.size()) acc.resize(power.size(), Rational(0));
            for (size_t i = 0; i < power.size(); ++i) acc[i] += mono[j] * power[i];
        }
        if (j + 1 < mono.size()) power = shift_mul_t(power);
    }
    return from_rationals(acc, prec);
}

std::vector<Rational> ChebSeries::rational_coeffs() const {
    std::vector<Rational> out;
    out.reserve(c.size());
    for (const Dy& d : c) out.push_back(d.to_rational());
    return out;
}

std::vector<Rational> ChebSeries::monomial_coeffs() const {
    if (c.empty()) return {};
    std::vector<Rational> acc(c.size(), Rational(0));
    std::vector<Rational> prev{Rational(1)};          // T_0 in t
    std::vector<Rational> cur{Rational(-1), Rational(2)}; // T_1(2t-1)
    acc[0] = c[0].to_rational();
    for (size_t i = 1; i < c.size(); ++i) {
        Rational q = c[i].to_rational();
        if (q != 0)
            for (size_t j = 0; j < cur.size(); ++j) acc[j] += q * cur[j];
        if (i + 1 < c.size()) {
            // T_{i+1} = 2(2t-1) T_i - T_{i-1}
            std::vector<Rational> next(cur.size() + 1, Rational(0));
            for (size_t j = 0; j < cur.size(); ++j) {
                next[j + 1] += 4 * cur[j];
                next[j] -= 2 * cur[j];
            }
            for (size_t j = 0; j < prev.size(); ++j) next[j] -= prev[j];
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
    while (!acc.empty() && acc.back() == 0) acc.pop_back();
    return acc;
}

Rational ChebSeries::eval_stored(const Rational& t) const {
    if (c.empty()) return Rational(0);
    Rational x = 2 * t - 1;
    Rational b1 = 0, b2 = 0;
    for (size_t k = c.size() - 1; k >= 1; --k) {
        Rational b = 2 * x * b1 - b2 + c[k].to_rational();
        b2 = std::move(b1);
        b1 = std::move(b);
    }
    return c[0].to_rational() + x * b1 - b2;
}

Rational ChebSeries::coeff_abs_sum() const {
    Rational s = 0;
    for (const Dy& d : c) s += abs(d.to_rational());
    return s;
}

ChebSeries cheb_add(const ChebSeries& a, const ChebSeries& b) {
    ChebSeries out;
    out.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < out.c.size(); ++i) {
        const Dy& x = i < a.c.size() ? a.c[i] : Dy();
        const Dy& y = i < b.c.size() ? b.c[i] : Dy();
        out.c[i] = dy_add_exact(x, y);
    }
    out.err = a.err + b.err;
    trim(out.c);
    return out;
}

ChebSeries cheb_sub(const ChebSeries& a, const ChebSeries& b) {
    ChebSeries nb = b;
    for (Dy& d : nb.c) d = -d;
    return cheb_add(a, nb);
}

ChebSeries cheb_scale(const ChebSeries& a, const Rational& q, unsigned prec) {
    ChebSeries out;
    if (q == 0) {
        out.err = 0;
        return out;
    }
    Rational delta = 0;
    out.c.reserve(a.c.size());
    for (const Dy& d : a.c) out.c.push_back(round_with_delta(d.to_rational() * q, prec, &delta));
    out.err = abs(q) * a.err + delta;
    trim(out.c);
    return out;
}

ChebSeries cheb_add_const(const ChebSeries& a, const Rational& q, unsigned prec) {
    ChebSeries out = a;
    if (q == 0) return out;
    if (out.c.empty()) out.c.resize(1);
    Rational delta = 0;
    out.c[0] = round_with_delta(out.c[0].to_rational() + q, prec, &delta);
    out.err += delta;
    trim(out.c);
    return out;
}

ChebSeries cheb_mul(const ChebSeries& a, const ChebSeries& b) {
    ChebSeries out;
    if (a.c.empty() || b.c.empty()) {
        // stored part of one side vanishes; bound the product by sup bounds
        out.err = a.sup_upper() * b.err + b.sup_upper() * a.err;
        return out;
    }
    out.c.assign(a.c.size() + b.c.size() - 1, Dy());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j].is_zero()) continue;
            Dy prod = dy_mul_exact(a.c[i], b.c[j]);
            prod.e -= 1; // T_i T_j = (T_{i+j} + T_{|i-j|}) / 2
            size_t hi = i + j, lo = i >= j ? i - j : j - i;
            out.c[hi] = dy_add_exact(out.c[hi], prod);
            out.c[lo] = dy_add_exact(out.c[lo], prod);
        }
    }
    out.err = a.sup_upper() * b.err + b.coeff_abs_sum() * a.err;
    trim(out.c);
    return out;
}

ChebSeries cheb_truncate(const ChebSeries& a, size_t max_degree) {
    if (a.c.size() <= max_degree + 1) return a;
    ChebSeries out;
    out.c.assign(a.c.begin(), a.c.begin() + (long)max_degree + 1);
    Rational tail = 0;
    for (size_t i = max_degree + 1; i < a.c.size(); ++i) tail += abs(a.c[i].to_rational());
    out.err = a.err + tail;
    trim(out.c);
    return out;
}

ChebSeries cheb_round(const ChebSeries& a, unsigned prec) {
    ChebSeries out;
    out.c.reserve(a.c.size());
    Rational delta = 0;
    for (const Dy& d : a.c) {
        Dy r = dy_round(d, prec, -1);
        delta += d.to_rational() - r.to_rational();
        out.c.push_back(std::move(r));
    }
    out.err = a.err + delta;
    trim(out.c);
    return out;
}

ChebSeries cheb_derivative_stored(const ChebSeries& a) {
    ChebSeries out;
    if (a.c.size() <= 1) return out;
    size_t n = a.c.size() - 1;
    std::vector<Dy> d(n + 2);
    for (size_t k = n; k >= 1; --k) {
        // d_{k-1} = d_{k+1} + 2k c_k, then halve d_0; chain rule adds a
        // factor 2 for the shift to [0,1]
        Dy term(a.c[k].m * (long)(2 * k), a.c[k].e);
        d[k - 1] = dy_add_exact(k + 1 <= n ? d[k + 1] : Dy(), term);
    }
    d[0].e -= 1;
    d.resize(n);
    for (Dy& x : d) x.e += 1;
    out.c = std::move(d);
    trim(out.c);
    return out;
}

ChebSeries cheb_compose_univariate(const std::vector<Rational>& q, const ChebSeries& a,
                                   size_t max_degree, unsigned prec) {
    ChebSeries acc;
    if (q.empty()) return acc;
    acc = ChebSeries::constant(q.back(), prec);
    for (size_t i = q.size() - 1; i-- > 0;) {
        acc = cheb_mul(acc, a);
        acc = cheb_round(cheb_truncate(acc, max_degree), prec);
        acc = cheb_add_const(acc, q[i], prec);
    }
    return acc;
}

namespace {

// scaled integer floor(v * 2^kFix) for a dyadic v; the evaluator's a-priori
// bound already covers the truncation
Int to_fixed(const Dy& v) {
    Int out;
    long shift = v.e + kFix;
    if (shift >= 0)
        mpz_mul_2exp(out.get_mpz_t(), v.m.get_mpz_t(), (unsigned long)shift);
    else
        mpz_fdiv_q_2exp(out.get_mpz_t(), v.m.get_mpz_t(), (unsigned long)-shift);
    return out;
}

// Clenshaw on scaled integers; every shift truncates at most one unit in
// the last place and the a-priori bound in the evaluator covers it
Int clenshaw_fixed(const std::vector<Int>& cf, const Int& x) {
    if (cf.empty()) return Int(0);
    Int b1 = 0, b2 = 0, t;
    for (size_t k = cf.size() - 1; k >= 1; --k) {
        t = x * b1;
        mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), kFix - 1); // times 2x
        t -= b2;
        t += cf[k];
        b2 = std::move(b1);
        b1 = std::move(t);
    }
    t = x * b1;
    mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), kFix);
    return t - b2 + cf[0];
}

Rational fixed_error_bound(size_t terms) {
    // one truncated shift and one rounded coefficient per step, each at most
    // one scaled unit, amplified at most linearly by the remaining recurrence
    Rational ulp = pow2(-kFix);
    return 2 * Rational((long)(terms + 2)) * Rational((long)(terms + 2)) * ulp;
}

} // namespace

ChebEvaluator::ChebEvaluator(const ChebSeries& s) : err_(s.err) {
    cfix_.reserve(s.c.size());
    for (const Dy& d : s.c) cfix_.push_back(to_fixed(d));
    efix_ = fixed_error_bound(cfix_.size());

    // derivative data in x-units for mean-value tightening
    ChebSeries d1 = cheb_derivative_stored(s);
    for (Dy& v : d1.c) v.e -= 1; // back to x-units
    dfix_.reserve(d1.c.size());
    for (const Dy& v : d1.c) dfix_.push_back(to_fixed(v));
    efix1_ = fixed_error_bound(dfix_.size());

    ChebSeries d2 = cheb_derivative_stored(d1);
    second_sum_ = 0;
    for (Dy& v : d2.c) {
        v.e -= 1;
        second_sum_ += abs(v.to_rational());
    }
}

QIv ChebEvaluator::enclose(const QIv& box) const {
    if (cfix_.empty()) return QIv{-err_, err_};
    Rational mid = (box.lo + box.hi) / 2;
    Rational half_x = box.hi - box.lo; // x = 2t - 1 doubles widths
    // round the center to the fixed-point grid, widening the box to cover it
    Rational xm = 2 * mid - 1;
    Int xi;
    {
        Rational scaled = xm * pow2(kFix);
        mpz_fdiv_q(xi.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    }
    Rational xq = Rational(xi) * pow2(-kFix);
    half_x += abs(xm - xq) * 2; // conservative: both value and slope centers

    Rational v = Rational(clenshaw_fixed(cfix_, xi)) * pow2(-kFix);
    Rational slope = 0;
    if (!dfix_.empty() || second_sum_ != 0) {
        Rational d1 = Rational(clenshaw_fixed(dfix_, xi)) * pow2(-kFix);
        slope = abs(d1) + efix1_ + second_sum_ * half_x;
    }
    Rational radius = efix_ + err_ + slope * half_x;
    return QIv{v - radius, v + radius};
}

QIv ChebEvaluator::at_point(const Rational& t) const {
    return enclose(QIv{t, t});
}

SupEnclosure sup_bb(const QIv& domain, const BoxFn& fn, const Rational& tol, size_t budget) {
    struct Node {
        Rational hi;
        QIv box;
        bool operator<(const Node& o) const { return hi < o.hi; }
    };
    std::priority_queue<Node> queue;

    Rational lo;
    {
        Rational mid = (domain.lo + domain.hi) / 2;
        lo = fn(QIv{mid, mid}).lo;
        QIv whole = fn(domain);
        lo = std::max(lo, whole.lo);
        queue.push({whole.hi, domain});
    }
    while (budget-- > 0) {
        Node top = queue.top();
        if (top.hi - lo <= tol) return {lo, top.hi};
        queue.pop();
        Rational mid = (top.box.lo + top.box.hi) / 2;
        for (const QIv& half : {QIv{top.box.lo, mid}, QIv{mid, top.box.hi}}) {
            QIv e = fn(half);
            lo = std::max(lo, e.lo);
            Rational center = (half.lo + half.hi) / 2;
            lo = std::max(lo, fn(QIv{center, center}).lo);
            queue.push({e.hi, half});
        }
    }
    throw BudgetError("sup enclosure: subdivision budget exhausted");
}

} // namespace gd
