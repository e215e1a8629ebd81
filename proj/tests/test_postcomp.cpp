#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gd/codec.hpp"
#include "gd/errors.hpp"
#include "gd/postcomp.hpp"
#include "gd/space.hpp"

using namespace gd;

namespace {

Rational horner(const std::vector<Rational>& cs, const Rational& x) {
    Rational acc(0);
    for (size_t i = cs.size(); i-- > 0;) acc = acc * x + cs[i];
    return acc;
}

// coefficients of a polynomial that uses only plain powers of x_index
std::vector<Rational> plain_powers(const StarPoly& p, long index) {
    std::vector<Rational> out;
    for (const auto& [m, c] : p.terms()) {
        size_t deg = 0;
        if (!m.is_one()) {
            REQUIRE(m.factors.size() == 1);
            REQUIRE(m.factors[0].first == Int(2 * index));
            deg = m.factors[0].second.get_ui();
        }
        REQUIRE(c.im == 0);
        if (out.size() <= deg) out.resize(deg + 1, Rational(0));
        out[deg] = c.re;
    }
    return out;
}

// exact value of a code polynomial on the interval space at parameter t
Rational interval_value(const Space& iv, const StarPoly& p, const Rational& t) {
    std::vector<GaussianRational> cs = iv.interval_coeffs(p);
    GaussianRational acc;
    GaussianRational tv{t};
    for (size_t i = cs.size(); i-- > 0;) acc = acc * tv + cs[i];
    REQUIRE(acc.im == 0);
    return acc.re;
}

// exact values at the two points, where generator 1 is 0 and 1
std::pair<Rational, Rational> two_point_values(const StarPoly& p) {
    GaussianRational at0, at1;
    for (const auto& [m, c] : p.terms()) {
        bool vanishes = false;
        for (const auto& [kappa, e] : m.factors)
            if (kappa_index(kappa) % 2 != 0) vanishes = true;
        if (!vanishes) at0 = at0 + c;
        at1 = at1 + c;
    }
    REQUIRE(at0.im == 0);
    REQUIRE(at1.im == 0);
    return {at0.re, at1.re};
}

// exact value on the one-point space, where every generator is 1
Rational point_value(const StarPoly& p) {
    GaussianRational acc;
    for (const auto& [m, c] : p.terms()) acc = acc + c;
    REQUIRE(acc.im == 0);
    return acc.re;
}

} // namespace

TEST_CASE("exact names replay one code at every precision") {
    StarPoly x1 = StarPoly::variable(Int(1));
    VectorName e = exact_name(x1);
    CHECK(e.emit(0) == e.emit(9));
    CHECK(decode(e.emit(5)) == x1);
}

TEST_CASE("unit witness refinement squares its certified distance") {
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly w = StarPoly::one() + x1.scale(GaussianRational(rational_from_long(1, 8)));
    UnitWitness witness{encode(w), 2, rational_from_long(3, 16)};
    VectorName un = unit_name(witness);

    // 3/16 already meets 2^-2, one squaring meets 2^-3, two meet 2^-6
    CHECK(decode(un.emit(2)) == w);
    StarPoly v1 = w + w - w * w;
    CHECK(decode(un.emit(3)) == v1);
    StarPoly v2 = v1 + v1 - v1 * v1;
    CHECK(decode(un.emit(6)) == v2);

    const Space& iv = *Space::builtin("interval");
    for (long j = 0; j <= 4; ++j) {
        Rational t = make_rational(j, 4);
        Rational diff = abs(interval_value(iv, v2, t) - 1);
        CHECK(diff < pow2(-6));
    }

    UnitWitness coarse{encode(StarPoly::one()), 0, rational_from_long(1, 2)};
    CHECK_THROWS_AS(unit_name(coarse), std::domain_error);
}

TEST_CASE("square root approximants are certified on their boxes") {
    for (unsigned M : {1u, 2u}) {
        for (unsigned k : {2u, 4u, 6u}) {
            StarPoly s = approx_on_box(spec_sqrt(), M, k);
            std::vector<Rational> cs = plain_powers(s, 0);
            Rational m2((long)M * (long)M);
            const Rational xs[] = {Rational(0),          m2 / 16, m2 / 4,
                                   rational_from_long(1, 2), m2 / 2,  m2};
            for (const Rational& x : xs) {
                Rational val = horner(cs, x);
                QIv e = sqrt_enclosure(x, k + 8);
                Rational lo = e.lo - pow2(-(long)k);
                Rational hi = e.hi + pow2(-(long)k);
                CHECK(val > lo);
                CHECK(val < hi);
            }
        }
    }
}

TEST_CASE("absolute value approximants contract the complex disc") {
    StarPoly q = approx_on_box(spec_abs(), 1, 4);
    CHECK(q.terms().find(StarMonomial::one()) == q.terms().end());

    // |3/5 + 4/5 i| = 1 and |3/10 + 2/5 i| = 1/2, both exactly
    GaussianRational z1{rational_from_long(3, 5), rational_from_long(4, 5)};
    GaussianRational v1 = q.eval_exact({{Int(0), z1}});
    CHECK(v1.im == 0);
    Rational d1 = abs(v1.re - 1);
    CHECK(d1 < pow2(-4));

    GaussianRational z2{rational_from_long(3, 10), rational_from_long(2, 5)};
    GaussianRational v2 = q.eval_exact({{Int(0), z2}});
    Rational d2 = abs(v2.re - rational_from_long(1, 2));
    CHECK(d2 < pow2(-4));

    const long grid[] = {-16, -8, -3, 0, 5, 14, 16};
    for (long j : grid) {
        Rational x = make_rational(j, 16);
        GaussianRational v = q.eval_exact({{Int(0), GaussianRational(x)}});
        CHECK(v.im == 0);
        Rational ax = abs(x);
        Rational diff = abs(v.re - ax);
        CHECK(diff < pow2(-4));
    }
}

TEST_CASE("psi approximants track the profile on the symmetric box") {
    StarPoly r = approx_on_box(spec_psi_abs(), 1, 3);
    CHECK(r.terms().find(StarMonomial::one()) == r.terms().end());
    std::vector<Rational> cs = plain_powers(r, 0);
    const long grid[] = {-8, -5, -4, -2, 0, 2, 4, 5, 6, 8};
    for (long j : grid) {
        Rational t = make_rational(j, 8);
        Rational at = abs(t);
        Rational diff = abs(horner(cs, t) - psi(at));
        CHECK(diff < pow2(-3));
    }
}

TEST_CASE("post-composition by a polynomial is exact on exact names") {
    auto iv = from_space(*Space::builtin("interval"));
    StarPoly x0 = StarPoly::variable(Int(0));
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly two_t = x1.scale(GaussianRational(Rational(2))) - StarPoly::one();

    VectorName ident = post_poly(iv, std::nullopt, x0, {exact_name(two_t)});
    CHECK(decode(ident.emit(3)) == two_t);

    VectorName quint = post_poly(iv, std::nullopt, quintic(), {exact_name(x1)});
    StarPoly x2 = x1 * x1;
    StarPoly expected = (x2 * x2 * x1).scale(GaussianRational(Rational(16))) -
                        (x2 * x2).scale(GaussianRational(Rational(40))) +
                        (x2 * x1).scale(GaussianRational(Rational(32))) -
                        x2.scale(GaussianRational(Rational(8))) + x1;
    CHECK(decode(quint.emit(4)) == expected);
}

TEST_CASE("post-composition reads inputs deeply enough for its contract") {
    auto iv = from_space(*Space::builtin("interval"));
    const Space& ivs = *Space::builtin("interval");
    StarPoly x0 = StarPoly::variable(Int(0));
    StarPoly x1 = StarPoly::variable(Int(1));

    // a name of t whose emission at precision k is off by exactly 2^-(k+1)
    VectorName drift;
    drift.emit = [x1](unsigned k) {
        return encode(x1 + StarPoly::constant(pow2(-(long)k - 1)));
    };
    VectorName sq = post_poly(iv, std::nullopt, x0 * x0, {drift});
    StarPoly got = decode(sq.emit(3));
    for (long j = 0; j <= 4; ++j) {
        Rational t = make_rational(j, 4);
        Rational diff = abs(interval_value(ivs, got, t) - t * t);
        CHECK(diff < pow2(-3));
    }
}

TEST_CASE("idempotent defect of a refined unit name stays in contract") {
    auto iv = from_space(*Space::builtin("interval"));
    const Space& ivs = *Space::builtin("interval");
    StarPoly x0 = StarPoly::variable(Int(0));
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly w = StarPoly::one() + x1.scale(GaussianRational(rational_from_long(1, 8)));
    UnitWitness witness{encode(w), 2, rational_from_long(3, 16)};

    VectorName defect = post_poly(iv, std::nullopt, x0 * x0 - x0, {unit_name(witness)});
    StarPoly dp = decode(defect.emit(4));
    for (long j = 0; j <= 8; ++j) {
        Rational t = make_rational(j, 8);
        Rational val = abs(interval_value(ivs, dp, t));
        CHECK(val < pow2(-4));
    }
}

TEST_CASE("constant terms require and consume a unit witness") {
    auto iv = from_space(*Space::builtin("interval"));
    const Space& ivs = *Space::builtin("interval");
    StarPoly x0 = StarPoly::variable(Int(0));
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly two_t = x1.scale(GaussianRational(Rational(2))) - StarPoly::one();

    CHECK_THROWS_AS(post_poly(iv, std::nullopt, x0 + StarPoly::one(), {exact_name(two_t)}),
                    MissingUnitError);
    CHECK_THROWS_AS(post_poly(iv, std::nullopt, StarPoly::variable(Int(1)), {exact_name(x1)}),
                    std::domain_error);

    StarPoly w = StarPoly::one() + x1.scale(GaussianRational(rational_from_long(1, 8)));
    std::optional<UnitWitness> witness{{encode(w), 2, rational_from_long(3, 16)}};
    VectorName shifted = post_poly(iv, witness, x0 + StarPoly::one(), {exact_name(two_t)});
    StarPoly sp = decode(shifted.emit(3));
    for (long j = 0; j <= 4; ++j) {
        Rational t = make_rational(j, 4);
        Rational diff = abs(interval_value(ivs, sp, t) - 2 * t);
        CHECK(diff < pow2(-3));
    }
}

TEST_CASE("lattice operations on finite spaces match exact extrema") {
    auto pt = from_space(*Space::builtin("point"));
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> d(-16, 16);
    for (int i = 0; i < 50; ++i) {
        Rational a = make_rational(d(rng), 16);
        Rational b = make_rational(d(rng), 16);
        unsigned k = (i % 2) ? 3 : 2;
        VectorName f = exact_name(StarPoly::constant(a));
        VectorName g = exact_name(StarPoly::constant(b));
        Rational mx = point_value(decode(apply_max(pt, std::nullopt, f, g).emit(k)));
        Rational mn = point_value(decode(apply_min(pt, std::nullopt, f, g).emit(k)));
        Rational emax = std::max(a, b);
        Rational emin = std::min(a, b);
        Rational tol = pow2(-(long)k);
        Rational dmx = abs(mx - emax);
        Rational dmn = abs(mn - emin);
        CHECK(dmx < tol);
        CHECK(dmn < tol);
    }

    auto tp = from_space(*Space::builtin("two-point"));
    StarPoly xv = StarPoly::variable(Int(1));
    const long quads[][4] = {{1, -2, -1, 1}, {0, 1, 1, -1}, {2, 0, 0, 2},
                             {-2, 1, -2, 1}, {1, 1, 1, -2}, {-1, 2, 2, -3}};
    for (size_t i = 0; i < 6; ++i) {
        unsigned k = i < 4 ? 2 : 3;
        Rational af = make_rational(quads[i][0], 8);
        Rational bf = make_rational(quads[i][1], 8);
        Rational ag = make_rational(quads[i][2], 8);
        Rational bg = make_rational(quads[i][3], 8);
        StarPoly fp = StarPoly::constant(af) + xv.scale(GaussianRational(bf));
        StarPoly gp = StarPoly::constant(ag) + xv.scale(GaussianRational(bg));
        auto [m0, m1] =
            two_point_values(decode(apply_max(tp, std::nullopt, exact_name(fp), exact_name(gp)).emit(k)));
        auto [n0, n1] =
            two_point_values(decode(apply_min(tp, std::nullopt, exact_name(fp), exact_name(gp)).emit(k)));
        Rational f1 = af + bf;
        Rational g1 = ag + bg;
        Rational e0 = std::max(af, ag);
        Rational e1 = std::max(f1, g1);
        Rational u0 = std::min(af, ag);
        Rational u1 = std::min(f1, g1);
        Rational tol = pow2(-(long)k);
        Rational d0 = abs(m0 - e0);
        Rational d1 = abs(m1 - e1);
        Rational d2 = abs(n0 - u0);
        Rational d3 = abs(n1 - u1);
        CHECK(d0 < tol);
        CHECK(d1 < tol);
        CHECK(d2 < tol);
        CHECK(d3 < tol);
    }
}

TEST_CASE("lattice operations on the interval meet at the kink") {
    auto iv = from_space(*Space::builtin("interval"));
    const Space& ivs = *Space::builtin("interval");
    StarPoly x1 = StarPoly::variable(Int(1));
    VectorName f = exact_name(x1);
    VectorName g = exact_name(StarPoly::one() - x1);
    StarPoly mx = decode(apply_max(iv, std::nullopt, f, g).emit(2));
    for (long j = 0; j <= 8; ++j) {
        Rational t = make_rational(j, 8);
        Rational other = 1 - t;
        Rational expected = std::max(t, other);
        Rational diff = abs(interval_value(ivs, mx, t) - expected);
        CHECK(diff < pow2(-2));
    }
}

TEST_CASE("min of a name with itself is exact") {
    auto iv = from_space(*Space::builtin("interval"));
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly two_t = x1.scale(GaussianRational(Rational(2))) - StarPoly::one();
    VectorName f = exact_name(two_t);
    VectorName mn = apply_min(iv, std::nullopt, f, f);
    CHECK(decode(mn.emit(3)) == two_t);
}

TEST_CASE("absolute value names track the fold on the interval") {
    auto iv = from_space(*Space::builtin("interval"));
    const Space& ivs = *Space::builtin("interval");
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly two_t = x1.scale(GaussianRational(Rational(2))) - StarPoly::one();
    VectorName f = exact_name(two_t);
    for (unsigned k : {2u, 3u, 4u}) {
        VectorName af = apply_abs(iv, std::nullopt, f);
        Int c1 = af.emit(k);
        Int c2 = af.emit(k);
        CHECK(c1 == c2);
        StarPoly ap = decode(c1);
        for (long j = 0; j <= 8; ++j) {
            Rational t = make_rational(j, 8);
            Rational arg = 2 * t - 1;
            Rational expected = abs(arg);
            Rational diff = abs(interval_value(ivs, ap, t) - expected);
            CHECK(diff < pow2(-(long)k));
        }
    }
}

TEST_CASE("psi composed with the absolute value tracks the exact profile") {
    auto iv = from_space(*Space::builtin("interval"));
    const Space& ivs = *Space::builtin("interval");
    VectorName f = exact_name(StarPoly::variable(Int(1)));
    for (unsigned k : {2u, 3u}) {
        StarPoly r = decode(apply_psi_abs(iv, std::nullopt, f).emit(k));
        for (long j = 0; j <= 8; ++j) {
            Rational t = make_rational(j, 8);
            Rational diff = abs(interval_value(ivs, r, t) - psi(t));
            CHECK(diff < pow2(-(long)k));
        }
    }

    auto pt = from_space(*Space::builtin("point"));
    VectorName c = exact_name(StarPoly::constant(rational_from_long(3, 5)));
    Rational val = point_value(decode(apply_psi_abs(pt, std::nullopt, c).emit(2)));
    Rational diff = abs(val - rational_from_long(1, 2));
    CHECK(diff < pow2(-2));
}

TEST_CASE("psi branch values and both closed forms agree everywhere") {
    CHECK(psi(Rational(0)) == 0);
    CHECK(psi(rational_from_long(1, 2)) == rational_from_long(1, 4));
    CHECK(psi(rational_from_long(7, 12)) == rational_from_long(11, 24));
    CHECK(psi(rational_from_long(3, 5)) == rational_from_long(1, 2));
    CHECK(psi(rational_from_long(2, 3)) == rational_from_long(2, 3));
    CHECK(psi(Rational(1)) == 1);
    CHECK(psi(Rational(2)) == 2);
    CHECK_THROWS_AS(psi(Rational(-1)), std::domain_error);

    // the lattice form min(max(t/2, (5/2)t - 1), t) on [0, 2]
    for (long j = 0; j <= 1000; ++j) {
        Rational t = make_rational(j, 500);
        Rational a = t / 2;
        Rational b = rational_from_long(5, 2) * t - 1;
        Rational mx = std::max(a, b);
        Rational lattice = std::min(mx, t);
        CHECK(lattice == psi(t));
    }

    // the kink form sum gamma_i |t - kappa_i| on [-2, 2]
    const std::pair<Rational, Rational> kinks[] = {
        {rational_from_long(-3, 4), rational_from_long(-2, 3)},
        {Rational(1), rational_from_long(-1, 2)},
        {rational_from_long(1, 2), Rational(0)},
        {Rational(1), rational_from_long(1, 2)},
        {rational_from_long(-3, 4), rational_from_long(2, 3)},
    };
    for (long j = 0; j <= 1000; ++j) {
        Rational t = make_rational(j, 250) - 2;
        Rational sum(0);
        for (const auto& [gamma, kappa] : kinks) {
            Rational leg = abs(t - kappa);
            sum += gamma * leg;
        }
        Rational at = abs(t);
        CHECK(sum == psi(at));
    }
}

TEST_CASE("threshold polynomials cross one half exactly at their parameter") {
    CHECK(q_r(rational_from_long(1, 2)) == StarPoly::variable(Int(0)));
    StarPoly expected = StarPoly::constant(rational_from_long(1, 3)) +
                        StarPoly::variable(Int(0)).scale(GaussianRational(rational_from_long(2, 3)));
    CHECK(q_r(rational_from_long(1, 4)) == expected);

    CHECK_THROWS_AS(q_r(Rational(0)), std::domain_error);
    CHECK_THROWS_AS(q_r(Rational(1)), std::domain_error);
    CHECK_THROWS_AS(q_r(rational_from_long(3, 2)), std::domain_error);

    Rational half = rational_from_long(1, 2);
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> d(1, 999);
    for (int i = 0; i < 100; ++i) {
        Rational r = make_rational(d(rng), 1000);
        std::vector<Rational> cs = plain_powers(q_r(r), 0);
        REQUIRE(cs.size() == 2);
        CHECK(cs[1] > 0);
        CHECK(horner(cs, r) == half);
        Rational lo = r - make_rational(1, 1000);
        Rational hi = r + make_rational(1, 1000);
        CHECK(horner(cs, lo) < half);
        CHECK(horner(cs, hi) > half);
        Rational at0 = horner(cs, Rational(0));
        Rational at1 = horner(cs, Rational(1));
        CHECK(at0 >= 0);
        CHECK(at0 < half);
        CHECK(at1 > half);
        CHECK(at1 <= 1);
    }
}

TEST_CASE("quintic fixed points, factorization, and iteration") {
    StarPoly p = quintic();
    std::vector<Rational> cs = plain_powers(p, 0);
    CHECK(horner(cs, Rational(0)) == 0);
    CHECK(horner(cs, rational_from_long(1, 2)) == rational_from_long(1, 2));
    CHECK(horner(cs, Rational(1)) == 1);
    CHECK(horner(cs, rational_from_long(1, 4)) < rational_from_long(1, 4));
    CHECK(horner(cs, rational_from_long(3, 4)) > rational_from_long(3, 4));

    StarPoly x = StarPoly::variable(Int(0));
    StarPoly shifted = x - StarPoly::one();
    StarPoly steep = x.scale(GaussianRational(Rational(2))) - StarPoly::one();
    StarPoly rhs = (x * x).scale(GaussianRational(Rational(8))) * shifted * shifted * steep;
    CHECK(p - x == rhs);

    Rational c = rational_from_long(3, 5);
    CHECK(horner(cs, c) == rational_from_long(2163, 3125));
    Rational r = c;
    for (int i = 0; i < 5; ++i) r = horner(cs, r);
    Rational frozen = make_rational(Int(9713275050L), Int(10000000000L));
    Rational drift = abs(r - frozen);
    CHECK(drift < make_rational(1, 1000000000));

    auto pt = from_space(*Space::builtin("point"));
    VectorName it = iterate_quintic(pt, exact_name(StarPoly::constant(c)), 5);
    StarPoly res = decode(it.emit(2));
    REQUIRE(res.is_constant());
    CHECK(res.constant_value() == GaussianRational(r));
}

TEST_CASE("approximant construction rejects invalid boxes and depths") {
    CHECK_THROWS_AS(approx_on_box(spec_sqrt(), 0, 3), std::domain_error);
    CHECK_THROWS_AS(approx_on_box(spec_sqrt(), 1, 11), std::domain_error);
    CHECK_THROWS_AS(approx_on_box(spec_abs(), 1, 10), std::domain_error);

    StarPoly x = StarPoly::variable(Int(0));
    StarPoly qp = x * x - x;
    CHECK(approx_on_box(spec_poly(qp), 2, 9) == qp);
}
