#include "gd/starpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace gd {

QIv qiv_add(const QIv& a, const QIv& b) { return {a.lo + b.lo, a.hi + b.hi}; }
QIv qiv_sub(const QIv& a, const QIv& b) { return {a.lo - b.hi, a.hi - b.lo}; }
QIv qiv_neg(const QIv& a) { return {Rational(-a.hi), Rational(-a.lo)}; }

QIv qiv_mul(const QIv& a, const QIv& b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

QIv qiv_sq(const QIv& a) {
    Rational ll = a.lo * a.lo, hh = a.hi * a.hi;
    if (sgn(a.lo) >= 0) return {std::move(ll), std::move(hh)};
    if (sgn(a.hi) <= 0) return {std::move(hh), std::move(ll)};
    return {Rational(0), std::max(ll, hh)};
}

QIv qiv_abs(const QIv& a) {
    if (sgn(a.lo) >= 0) return a;
    if (sgn(a.hi) <= 0) return qiv_neg(a);
    Rational nlo = -a.lo;
    return {Rational(0), std::max(nlo, a.hi)};
}

QIv qiv_div(const QIv& a, const QIv& b) {
    if (sgn(b.lo) <= 0) throw std::domain_error("qiv_div: denominator not strictly positive");
    Rational lo = sgn(a.lo) >= 0 ? a.lo / b.hi : a.lo / b.lo;
    Rational hi = sgn(a.hi) >= 0 ? a.hi / b.lo : a.hi / b.hi;
    return {std::move(lo), std::move(hi)};
}

QIv qiv_min(const QIv& a, const QIv& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

QIv qiv_max(const QIv& a, const QIv& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

QBox qbox_add(const QBox& a, const QBox& b) {
    return {qiv_add(a.re, b.re), qiv_add(a.im, b.im)};
}

QBox qbox_mul(const QBox& a, const QBox& b) {
    return {qiv_sub(qiv_mul(a.re, b.re), qiv_mul(a.im, b.im)),
            qiv_add(qiv_mul(a.re, b.im), qiv_mul(a.im, b.re))};
}

QBox qbox_pow(const QBox& a, const Int& e) {
    QBox acc{QIv(Rational(1)), QIv(Rational(0))};
    if (e == 0) return acc;
    long top = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1;
    for (long b = top; b >= 0; --b) {
        acc = qbox_mul(acc, acc);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<unsigned long>(b)))
            acc = qbox_mul(acc, a);
    }
    return acc;
}

GaussianRational gaussian_pow(const GaussianRational& z, const Int& e) {
    GaussianRational acc(Rational(1));
    if (e == 0) return acc;
    long top = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1;
    for (long b = top; b >= 0; --b) {
        acc = acc * acc;
        if (mpz_tstbit(e.get_mpz_t(), static_cast<unsigned long>(b))) acc = acc * z;
    }
    return acc;
}

StarMonomial StarMonomial::variable(const Int& index, bool starred) {
    StarMonomial m;
    m.factors.emplace_back(kappa_of(index, starred), Int(1));
    return m;
}

StarMonomial StarMonomial::normalized(std::vector<std::pair<Int, Int>> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    StarMonomial m;
    for (auto& [kappa, exp] : raw) {
        if (exp == 0) continue;
        if (exp < 0) throw std::domain_error("StarMonomial: negative exponent");
        if (!m.factors.empty() && m.factors.back().first == kappa)
            m.factors.back().second += exp;
        else
            m.factors.emplace_back(std::move(kappa), std::move(exp));
    }
    return m;
}

Int StarMonomial::degree() const {
    Int d = 0;
    for (const auto& [kappa, exp] : factors) d += exp;
    return d;
}

StarMonomial StarMonomial::star() const {
    std::vector<std::pair<Int, Int>> raw;
    raw.reserve(factors.size());
    for (const auto& [kappa, exp] : factors) {
        // toggle the starred bit
        Int flipped = kappa_starred(kappa) ? Int(kappa - 1) : Int(kappa + 1);
        raw.emplace_back(std::move(flipped), exp);
    }
    return normalized(std::move(raw));
}

StarMonomial StarMonomial::operator*(const StarMonomial& o) const {
    StarMonomial m;
    auto a = factors.begin(), b = o.factors.begin();
    while (a != factors.end() || b != o.factors.end()) {
        if (b == o.factors.end() || (a != factors.end() && a->first < b->first))
            m.factors.push_back(*a++);
        else if (a == factors.end() || b->first < a->first)
            m.factors.push_back(*b++);
        else {
            m.factors.emplace_back(a->first, a->second + b->second);
            ++a, ++b;
        }
    }
    return m;
}

void StarPoly::add_term(const StarMonomial& m, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

StarPoly StarPoly::constant(const GaussianRational& c) {
    StarPoly p;
    p.add_term(StarMonomial::one(), c);
    return p;
}

StarPoly StarPoly::variable(const Int& index, bool starred) {
    StarPoly p;
    p.add_term(StarMonomial::variable(index, starred), GaussianRational(Rational(1)));
    return p;
}

StarPoly StarPoly::from_terms(Terms t) {
    StarPoly p;
    for (auto& [m, c] : t)
        p.add_term(m, c);
    return p;
}

bool StarPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

GaussianRational StarPoly::constant_value() const {
    if (terms_.empty()) return {};
    if (!is_constant()) throw std::domain_error("constant_value: polynomial is not constant");
    return terms_.begin()->second;
}

StarPoly StarPoly::operator+(const StarPoly& o) const {
    StarPoly p = *this;
    for (const auto& [m, c] : o.terms_)
        p.add_term(m, c);
    return p;
}

StarPoly StarPoly::operator-(const StarPoly& o) const { return *this + (-o); }

StarPoly StarPoly::operator-() const {
    StarPoly p;
    for (const auto& [m, c] : terms_)
        p.terms_.emplace(m, -c);
    return p;
}

StarPoly StarPoly::operator*(const StarPoly& o) const {
    StarPoly p;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_)
            p.add_term(ma * mb, ca * cb);
    return p;
}

StarPoly StarPoly::star() const {
    StarPoly p;
    for (const auto& [m, c] : terms_)
        p.add_term(m.star(), c.conj());
    return p;
}

StarPoly StarPoly::scale(const GaussianRational& c) const {
    StarPoly p;
    for (const auto& [m, coef] : terms_)
        p.add_term(m, coef * c);
    return p;
}

StarPoly StarPoly::substitute(const Int& index, const GaussianRational& c) const {
    StarPoly p;
    for (const auto& [m, coef] : terms_) {
        GaussianRational value = coef;
        std::vector<std::pair<Int, Int>> kept;
        for (const auto& [kappa, exp] : m.factors) {
            if (kappa_index(kappa) == index)
                value = value * gaussian_pow(kappa_starred(kappa) ? c.conj() : c, exp);
            else
                kept.emplace_back(kappa, exp);
        }
        StarMonomial rest;
        rest.factors = std::move(kept);
        p.add_term(rest, value);
    }
    return p;
}

Int StarPoly::degree() const {
    Int d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max(d, m.degree());
    return d;
}

std::optional<Int> StarPoly::max_index() const {
    std::optional<Int> out;
    for (const auto& [m, c] : terms_)
        if (!m.factors.empty()) {
            Int idx = kappa_index(m.factors.back().first);
            if (!out || *out < idx) out = idx;
        }
    return out;
}

GaussianRational StarPoly::eval_exact(const std::map<Int, GaussianRational>& assignment) const {
    GaussianRational acc;
    for (const auto& [m, c] : terms_) {
        GaussianRational v = c;
        for (const auto& [kappa, exp] : m.factors) {
            auto it = assignment.find(kappa_index(kappa));
            if (it == assignment.end())
                throw std::out_of_range("eval_exact: no assignment for x" +
                                        kappa_index(kappa).get_str());
            v = v * gaussian_pow(kappa_starred(kappa) ? it->second.conj() : it->second, exp);
        }
        acc = acc + v;
    }
    return acc;
}

QBox StarPoly::eval_interval(const std::map<Int, QBox>& boxes) const {
    QBox acc;
    for (const auto& [m, c] : terms_) {
        QBox v{QBox(c)};
        for (const auto& [kappa, exp] : m.factors) {
            auto it = boxes.find(kappa_index(kappa));
            if (it == boxes.end())
                throw std::out_of_range("eval_interval: no box for x" +
                                        kappa_index(kappa).get_str());
            v = qbox_mul(v, qbox_pow(kappa_starred(kappa) ? it->second.conj() : it->second, exp));
        }
        acc = qbox_add(acc, v);
    }
    return acc;
}

} // namespace gd
