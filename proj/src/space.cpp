#include "gd/space.hpp"

#include <set>
#include <stdexcept>

#include "gd/dyadic.hpp"

namespace gd {

QIv sqrt_enclosure(const Rational& x, unsigned k) {
    if (sgn(x) < 0) throw std::domain_error("sqrt_enclosure: negative argument");
    if (sgn(x) == 0) return QIv{Rational(0), Rational(0)};
    Rational target = pow2(-(long)k - 1);
    for (unsigned prec = k + 8;; prec *= 2) {
        Dy lo = dy_sqrt(dy_from_rational(x, prec, -1), prec, -1);
        Dy hi = dy_sqrt(dy_from_rational(x, prec, +1), prec, +1);
        QIv out{lo.to_rational(), hi.to_rational()};
        if (sgn(out.lo) < 0) out.lo = 0;
        if (out.width() < 2 * target) return out;
        if (prec > 64 * (k + 8)) throw std::runtime_error("sqrt_enclosure: no convergence");
    }
}

namespace {

GaussianRational gr(long num, long den = 1) {
    return GaussianRational{rational_from_long(num, den), Rational(0)};
}

} // namespace

Space Space::point() {
    Space s;
    s.kind = Kind::Finite;
    s.name = "point";
    s.gen_count = 1;
    s.values = {{gr(1)}};
    return s;
}

Space Space::two_points() {
    Space s;
    s.kind = Kind::Finite;
    s.name = "two-point";
    s.gen_count = 2;
    s.values = {{gr(1), gr(0)}, {gr(1), gr(1)}};
    return s;
}

Space Space::three_points() {
    Space s;
    s.kind = Kind::Finite;
    s.name = "three-point";
    s.gen_count = 2;
    s.values = {{gr(1), gr(0)}, {gr(1), gr(1, 2)}, {gr(1), gr(1)}};
    return s;
}

Space Space::interval() {
    Space s;
    s.kind = Kind::Interval;
    s.name = "interval";
    s.gen_count = 2;
    return s;
}

Space Space::circle() {
    Space s;
    s.kind = Kind::Circle;
    s.name = "circle";
    s.gen_count = 2;
    return s;
}

const Space* Space::builtin(const std::string& name) {
    static const Space spaces[] = {point(), two_points(), three_points(), interval(), circle()};
    for (const Space& s : spaces)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<std::string> Space::builtin_names() {
    return {"point", "two-point", "three-point", "interval", "circle"};
}

size_t Space::chart_count() const {
    switch (kind) {
    case Kind::Finite: return values.size();
    case Kind::Interval: return 1;
    case Kind::Circle: return 2;
    }
    return 0;
}

QIv Space::chart_domain(size_t) const {
    switch (kind) {
    case Kind::Finite: return QIv{Rational(0), Rational(0)};
    case Kind::Interval: return QIv{Rational(0), Rational(1)};
    case Kind::Circle: return QIv{Rational(-1), Rational(1)};
    }
    return QIv{Rational(0), Rational(0)};
}

GaussianRational Space::gen_at(size_t chart, size_t gen, const Rational& param) const {
    if (gen % gen_count == 0) return gr(1);
    switch (kind) {
    case Kind::Finite:
        return values.at(chart).at(gen % gen_count);
    case Kind::Interval:
        return GaussianRational{param, Rational(0)};
    case Kind::Circle: {
        // rational points (1 - u^2, 2u) / (1 + u^2) on the right lobe,
        // mirrored real part on the left lobe
        Rational u2 = param * param;
        Rational den = 1 + u2;
        Rational re = (1 - u2) / den;
        if (chart == 1) re = -re;
        Rational im = 2 * param / den;
        return GaussianRational{re, im};
    }
    }
    throw std::logic_error("gen_at: bad space");
}

Rational Space::chart_metric_lip(size_t) const {
    switch (kind) {
    case Kind::Finite: return Rational(0);
    case Kind::Interval: return Rational(1);
    case Kind::Circle: return Rational(2);
    }
    return Rational(0);
}

namespace {

std::set<Int> var_indices(const StarPoly& p) {
    std::set<Int> out;
    for (const auto& [mono, coeff] : p.terms())
        for (const auto& [kappa, exp] : mono.factors) out.insert(kappa_index(kappa));
    return out;
}

} // namespace

std::vector<GaussianRational> Space::finite_values(const StarPoly& p) const {
    if (kind != Kind::Finite) throw std::logic_error("finite_values: not a finite space");
    std::vector<GaussianRational> out;
    out.reserve(values.size());
    std::set<Int> idx = var_indices(p);
    for (size_t pt = 0; pt < values.size(); ++pt) {
        std::map<Int, GaussianRational> assign;
        for (const Int& j : idx)
            assign.emplace(j, values[pt][mpz_class(j % (unsigned long)gen_count).get_ui()]);
        out.push_back(p.eval_exact(assign));
    }
    return out;
}

std::vector<GaussianRational> Space::interval_coeffs(const StarPoly& p) const {
    if (kind != Kind::Interval) throw std::logic_error("interval_coeffs: not the interval space");
    std::vector<GaussianRational> coeffs;
    for (const auto& [mono, coeff] : p.terms()) {
        unsigned long deg = 0;
        for (const auto& [kappa, exp] : mono.factors) {
            if (kappa_index(kappa) % 2 == 0) continue; // constant generator
            deg += mpz_class(Int(exp)).get_ui();
        }
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, GaussianRational{});
        coeffs[deg] = coeffs[deg] + coeff;
    }
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    return coeffs;
}

std::map<long, GaussianRational> Space::circle_laurent(const StarPoly& p) const {
    if (kind != Kind::Circle) throw std::logic_error("circle_laurent: not the circle space");
    std::map<long, GaussianRational> out;
    for (const auto& [mono, coeff] : p.terms()) {
        long net = 0;
        for (const auto& [kappa, exp] : mono.factors) {
            if (kappa_index(kappa) % 2 == 0) continue;
            long e = (long)mpz_class(Int(exp)).get_si();
            net += kappa_starred(kappa) ? -e : e;
        }
        auto [it, fresh] = out.emplace(net, coeff);
        if (!fresh) it->second = it->second + coeff;
        if (it->second.is_zero()) out.erase(it);
    }
    return out;
}

GaussianRational Space::value_at(const StarPoly& p, size_t chart, const Rational& param) const {
    std::map<Int, GaussianRational> assign;
    for (const Int& j : var_indices(p))
        assign.emplace(j, gen_at(chart, mpz_class(j % (unsigned long)gen_count).get_ui(), param));
    return p.eval_exact(assign);
}

std::vector<Space::GridPoint> Space::dense_grid(unsigned k) const {
    std::vector<GridPoint> out;
    switch (kind) {
    case Kind::Finite:
        for (size_t pt = 0; pt < values.size(); ++pt) out.push_back({pt, Rational(0)});
        break;
    case Kind::Interval: {
        Rational mesh = pow2(-(long)k);
        for (long i = 0; i <= (1L << k); ++i) out.push_back({0, i * mesh});
        break;
    }
    case Kind::Circle: {
        // parameter mesh 2^-(k+1) and |dz/du| <= 2 give a 2^-k net
        Rational mesh = pow2(-(long)k - 1);
        for (size_t chart = 0; chart < 2; ++chart)
            for (long i = 0; i <= (2L << (k + 1)); ++i) out.push_back({chart, -1 + i * mesh});
        break;
    }
    }
    return out;
}

} // namespace gd
