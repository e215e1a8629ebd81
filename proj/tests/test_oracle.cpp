#include <random>
#include <sstream>

#include "doctest.h"
#include "gd/chebyshev.hpp"
#include "gd/codec.hpp"
#include "gd/errors.hpp"
#include "gd/oracle.hpp"
#include "gd/space.hpp"

using namespace gd;

namespace {

StarPoly random_poly(std::mt19937_64& rng, bool complex_coeffs) {
    std::uniform_int_distribution<int> nterms(1, 4), deg(0, 3), idx(0, 3), num(-8, 8), den(1, 8),
        starred(0, 1);
    StarPoly p;
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
        StarPoly m = StarPoly::one();
        int d = deg(rng);
        for (int f = 0; f < d; ++f) m = m * StarPoly::variable(Int(idx(rng)), starred(rng) == 1);
        Rational re = rational_from_long(num(rng), den(rng));
        Rational im = complex_coeffs ? rational_from_long(num(rng), den(rng)) : Rational(0);
        p = p + m.scale(GaussianRational(re, im));
    }
    return p;
}

// checks q against the exact squared sup: |q - sqrt(sup_sq)| < 2^-k
void check_norm_brackets(const PresentationHandle& p, const StarPoly& poly,
                         const Rational& sup_sq, unsigned k) {
    Rational q = p->norm_query(encode(poly), k);
    Rational up = q + pow2(-(long)k);
    Rational dn = q - pow2(-(long)k);
    CHECK(up * up > sup_sq);
    if (dn > 0) CHECK(dn * dn < sup_sq);
}

Rational grid_sup_sq(const Space& s, const StarPoly& p, unsigned k) {
    Rational best = 0;
    for (const auto& gp : s.dense_grid(k)) {
        Rational v = s.value_at(p, gp.chart, gp.param).norm_sq();
        best = std::max(best, v);
    }
    return best;
}

ChebSeries dyadic_series(std::initializer_list<Rational> cs) {
    return ChebSeries::from_rationals(std::vector<Rational>(cs), 96);
}

} // namespace

TEST_CASE("sqrt enclosures bracket the root and narrow as requested") {
    std::vector<Rational> xs = {Rational(0),
                                Rational(1),
                                Rational(2),
                                rational_from_long(1, 2),
                                Rational(9),
                                rational_from_long(10007, 4096),
                                rational_from_long(3, 7)};
    for (const Rational& x : xs)
        for (unsigned k : {1u, 4u, 10u, 24u}) {
            QIv s = sqrt_enclosure(x, k);
            CHECK(s.lo >= 0);
            CHECK(s.lo <= s.hi);
            CHECK(s.width() < pow2(-(long)k));
            CHECK(s.lo * s.lo <= x);
            CHECK(s.hi * s.hi >= x);
        }
}

TEST_CASE("finite spaces evaluate polynomials exactly") {
    const Space& two = *Space::builtin("two-point");
    StarPoly x1 = StarPoly::variable(Int(1));
    for (const GaussianRational& v : two.finite_values(x1 * x1 - x1)) CHECK(v.is_zero());

    const Space& three = *Space::builtin("three-point");
    auto vals = three.finite_values(StarPoly::constant(Rational(2)) * x1 - StarPoly::one());
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == GaussianRational(Rational(-1)));
    CHECK(vals[1] == GaussianRational(Rational(0)));
    CHECK(vals[2] == GaussianRational(Rational(1)));

    // starred generators coincide with unstarred ones on real spaces
    auto starred = three.finite_values(x1.star());
    auto plain = three.finite_values(x1);
    CHECK(starred == plain);
}

TEST_CASE("interval reduction agrees with pointwise evaluation") {
    const Space& iv = *Space::builtin("interval");
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 20; ++trial) {
        StarPoly p = random_poly(rng, true);
        std::vector<GaussianRational> cs = iv.interval_coeffs(p);
        for (const Rational& t :
             {Rational(0), rational_from_long(1, 3), rational_from_long(1, 2), Rational(1)}) {
            GaussianRational direct = iv.value_at(p, 0, t);
            GaussianRational horner;
            for (size_t i = cs.size(); i-- > 0;)
                horner = horner * GaussianRational(t) + cs[i];
            CHECK(horner == direct);
        }
    }
}

TEST_CASE("circle reduction agrees with pointwise evaluation") {
    const Space& ci = *Space::builtin("circle");
    std::mt19937_64 rng(1312);
    for (int trial = 0; trial < 20; ++trial) {
        StarPoly p = random_poly(rng, true);
        auto laurent = ci.circle_laurent(p);
        for (size_t chart : {0u, 1u}) {
            Rational u = rational_from_long(trial - 10, 11);
            GaussianRational z = ci.gen_at(chart, 1, u);
            GaussianRational acc;
            for (const auto& [m, c] : laurent) {
                GaussianRational zp(Rational(1));
                GaussianRational base = m >= 0 ? z : z.conj();
                for (long i = 0; i < std::abs(m); ++i) zp = zp * base;
                acc = acc + c * zp;
            }
            CHECK(acc == ci.value_at(p, chart, u));
        }
    }
}

TEST_CASE("series from monomial coefficients stays within its error radius") {
    std::vector<Rational> mono = {Rational(1), rational_from_long(-3, 2), Rational(0),
                                  rational_from_long(5, 7)};
    ChebSeries s = ChebSeries::from_monomial(mono, 96);
    CHECK(s.err < pow2(-80));
    for (const Rational& t : {Rational(0), rational_from_long(1, 4), rational_from_long(2, 3),
                              Rational(1)}) {
        Rational direct = 0;
        for (size_t i = mono.size(); i-- > 0;) direct = direct * t + mono[i];
        Rational diff = s.eval_stored(t) - direct;
        if (diff < 0) diff = -diff;
        CHECK(diff <= s.err);
    }
}

TEST_CASE("dyadic series round trip exactly") {
    ChebSeries s = dyadic_series({rational_from_long(1, 4), rational_from_long(-3, 8)});
    CHECK(s.err == 0);
    std::vector<Rational> back = s.rational_coeffs();
    REQUIRE(back.size() == 2);
    CHECK(back[0] == rational_from_long(1, 4));
    CHECK(back[1] == rational_from_long(-3, 8));
}

TEST_CASE("series arithmetic encloses the exact result") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> num(-16, 16);
    std::uniform_int_distribution<int> dg(1, 6);
    std::vector<Rational> samples = {Rational(0), rational_from_long(1, 8),
                                     rational_from_long(3, 7), rational_from_long(7, 8),
                                     Rational(1)};
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Rational> ca, cb;
        int da = dg(rng), db = dg(rng);
        for (int i = 0; i <= da; ++i) ca.push_back(rational_from_long(num(rng), 16));
        for (int i = 0; i <= db; ++i) cb.push_back(rational_from_long(num(rng), 16));
        ChebSeries a = ChebSeries::from_rationals(ca, 96);
        ChebSeries b = ChebSeries::from_rationals(cb, 96);
        REQUIRE(a.err == 0);
        REQUIRE(b.err == 0);

        ChebSeries prod = cheb_mul(a, b);
        ChebSeries sum = cheb_add(a, b);
        ChebSeries trunc = cheb_truncate(prod, 3);
        ChebSeries rounded = cheb_round(prod, 20);
        std::vector<Rational> q = {Rational(0), Rational(-1), Rational(2)};
        ChebSeries comp = cheb_compose_univariate(q, a, 16, 96);

        for (const Rational& t : samples) {
            Rational va = a.eval_stored(t), vb = b.eval_stored(t);
            auto within = [&](const ChebSeries& s, const Rational& truth) {
                Rational diff = s.eval_stored(t) - truth;
                if (diff < 0) diff = -diff;
                CHECK(diff <= s.err);
            };
            within(prod, va * vb);
            within(sum, va + vb);
            within(trunc, va * vb);
            within(rounded, va * vb);
            within(comp, 2 * va * va - va);
        }
    }
}

TEST_CASE("stored derivative is exact") {
    ChebSeries a = dyadic_series({rational_from_long(1, 2), rational_from_long(-5, 16),
                                  rational_from_long(3, 4), rational_from_long(7, 32)});
    ChebSeries d = cheb_derivative_stored(a);
    std::vector<Rational> mono = a.monomial_coeffs();
    for (const Rational& t : {Rational(0), rational_from_long(2, 5), Rational(1)}) {
        Rational truth = 0;
        for (size_t i = mono.size(); i-- > 1;) truth = truth * t + i * mono[i];
        CHECK(d.eval_stored(t) == truth);
    }
}

TEST_CASE("evaluator enclosures contain the stored values") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> num(-32, 32);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<Rational> cs;
        for (int i = 0; i < 7; ++i) cs.push_back(rational_from_long(num(rng), 32));
        ChebSeries s = ChebSeries::from_rationals(cs, 96);
        ChebEvaluator ev(s);
        std::vector<std::pair<Rational, Rational>> boxes = {
            {Rational(0), Rational(1)},
            {rational_from_long(1, 3), rational_from_long(1, 2)},
            {rational_from_long(7, 8), Rational(1)}};
        for (const auto& [lo, hi] : boxes) {
            QIv out = ev.enclose(QIv{lo, hi});
            for (int j = 0; j <= 4; ++j) {
                Rational t = lo + (hi - lo) * j / 4;
                CHECK(out.contains(s.eval_stored(t)));
            }
        }
        QIv pt = ev.at_point(rational_from_long(1, 3));
        CHECK(pt.contains(s.eval_stored(rational_from_long(1, 3))));
        CHECK(pt.width() < pow2(-40));
    }
}

TEST_CASE("branch and bound certifies suprema") {
    // t(1-t) has sup exactly 1/4
    ChebSeries s = ChebSeries::from_monomial({Rational(0), Rational(1), Rational(-1)}, 96);
    ChebEvaluator ev(s);
    BoxFn fn = [&](const QIv& box) { return ev.enclose(box); };
    SupEnclosure e = sup_bb(QIv{Rational(0), Rational(1)}, fn, pow2(-16), 1u << 16);
    CHECK(e.lo <= rational_from_long(1, 4));
    CHECK(e.hi >= rational_from_long(1, 4));
    CHECK(e.hi - e.lo <= pow2(-16));

    CHECK_THROWS_AS(sup_bb(QIv{Rational(0), Rational(1)}, fn, pow2(-30), 4), BudgetError);
}

TEST_CASE("ground truth norms match known suprema") {
    StarPoly one = StarPoly::one();
    StarPoly x1 = StarPoly::variable(Int(1));

    auto pt = from_space(*Space::builtin("point"));
    check_norm_brackets(pt, one, Rational(1), 8);
    check_norm_brackets(pt, StarPoly::constant(GaussianRational(rational_from_long(3, 5),
                                                                rational_from_long(4, 5))),
                        Rational(1), 8);

    auto two = from_space(*Space::builtin("two-point"));
    check_norm_brackets(two, x1, Rational(1), 8);
    check_norm_brackets(two, one - x1, Rational(1), 8);
    CHECK(two->norm_query(encode(x1 * x1 - x1), 20) == 0);

    auto three = from_space(*Space::builtin("three-point"));
    check_norm_brackets(three, x1 - StarPoly::constant(rational_from_long(1, 2)),
                        rational_from_long(1, 4), 8);

    auto iv = from_space(*Space::builtin("interval"));
    check_norm_brackets(iv, x1, Rational(1), 6);
    check_norm_brackets(iv, x1 * (one - x1), rational_from_long(1, 16), 6);
    check_norm_brackets(iv, StarPoly::constant(Rational(2)) * x1 - one, Rational(1), 6);
    check_norm_brackets(iv, x1.scale(GaussianRational(Rational(1), Rational(1))), Rational(2), 6);

    auto ci = from_space(*Space::builtin("circle"));
    check_norm_brackets(ci, x1, Rational(1), 6);
    check_norm_brackets(ci, x1 + x1.star(), Rational(4), 6);
    check_norm_brackets(ci, x1 * x1, Rational(1), 6);
    check_norm_brackets(ci, one + x1, Rational(4), 6);
    check_norm_brackets(ci, x1 * x1.star(), Rational(1), 8);
    check_norm_brackets(ci,
                        x1.scale(GaussianRational(rational_from_long(1, 2),
                                                  rational_from_long(1, 2))),
                        rational_from_long(1, 2), 6);
}

TEST_CASE("norm queries are consistent across precision and dominate grid values") {
    std::mt19937_64 rng(99);
    const Space& iv = *Space::builtin("interval");
    auto p = from_space(iv);
    for (int trial = 0; trial < 10; ++trial) {
        StarPoly poly = random_poly(rng, false);
        Int code = encode(poly);
        Rational q3 = p->norm_query(code, 3);
        Rational q8 = p->norm_query(code, 8);
        Rational diff = q3 - q8;
        if (diff < 0) diff = -diff;
        CHECK(diff < pow2(-3) + pow2(-8));
        Rational up = q8 + pow2(-8);
        CHECK(up * up >= grid_sup_sq(iv, poly, 5));
    }

    const Space& ci = *Space::builtin("circle");
    auto pc = from_space(ci);
    for (int trial = 0; trial < 6; ++trial) {
        StarPoly poly = random_poly(rng, true);
        Int code = encode(poly);
        Rational q2 = pc->norm_query(code, 2);
        Rational q6 = pc->norm_query(code, 6);
        Rational diff = q2 - q6;
        if (diff < 0) diff = -diff;
        CHECK(diff < pow2(-2) + pow2(-6));
        Rational up = q6 + pow2(-6);
        CHECK(up * up >= grid_sup_sq(ci, poly, 3));
    }

    const Space& three = *Space::builtin("three-point");
    auto pf = from_space(three);
    for (int trial = 0; trial < 10; ++trial) {
        StarPoly poly = random_poly(rng, true);
        check_norm_brackets(pf, poly, grid_sup_sq(three, poly, 0), 10);
    }
}

TEST_CASE("emitted diagrams are sound") {
    auto p = from_space(*Space::builtin("two-point"));
    DiagramStream s = emit_diagram(p);
    for (int i = 0; i < 40; ++i) {
        auto t = s();
        REQUIRE(t.has_value());
        CHECK(t->lower > 0);
        CHECK(t->lower < t->upper);
        CHECK_FALSE(decode(t->code).is_zero());
        Rational q = p->norm_query(t->code, 12);
        CHECK(t->lower < q + pow2(-12));
        CHECK(q - pow2(-12) < t->upper);
    }
}

TEST_CASE("diagram backed presentations answer consistently") {
    auto ground = from_space(*Space::builtin("two-point"));
    auto dual = from_diagram_stream(emit_diagram(ground), ground->unit_code(),
                                    ground->component_count());
    Int unit = *ground->unit_code();
    Rational qd = dual->norm_query(unit, 2);
    Rational qg = ground->norm_query(unit, 8);
    Rational diff = qd - qg;
    if (diff < 0) diff = -diff;
    CHECK(diff < pow2(-2) + pow2(-8));

    auto starved = from_diagram_stream(emit_diagram(ground), {}, {}, 3);
    CHECK_THROWS_AS(starved->norm_query(Int(1) << 40, 1), BudgetError);
}

TEST_CASE("diagram files round trip") {
    auto ground = from_space(*Space::builtin("interval"));
    StarPoly one = StarPoly::one();
    StarPoly x1 = StarPoly::variable(Int(1));
    std::vector<Int> codes = {encode(x1), encode(StarPoly::constant(Rational(2)) * x1 - one),
                              encode(x1 * x1), encode(one + x1)};

    std::stringstream file;
    write_diagram_focused(file, ground, codes, 6);
    std::vector<DiagramTriple> triples = read_diagram(file);
    REQUIRE(triples.size() == codes.size());

    auto dual = from_diagram_stream(stream_from_triples(triples));
    for (const Int& code : codes) {
        Rational qd = dual->norm_query(code, 4);
        Rational qg = ground->norm_query(code, 8);
        Rational diff = qd - qg;
        if (diff < 0) diff = -diff;
        CHECK(diff < pow2(-4) + pow2(-8));
    }
}

TEST_CASE("diagram parsing rejects malformed input") {
    std::stringstream two_fields("1/2\t1");
    CHECK_THROWS_AS(read_diagram(two_fields), std::runtime_error);
    std::stringstream unordered("3/4\t1\t1/4");
    CHECK_THROWS_AS(read_diagram(unordered), std::runtime_error);
    std::stringstream bad_rational("x\t1\t2/1");
    CHECK_THROWS_AS(read_diagram(bad_rational), std::runtime_error);

    auto p = from_space(*Space::builtin("two-point"));
    DiagramStream s = emit_diagram(p);
    std::stringstream file;
    write_diagram(file, s, 10);
    std::vector<DiagramTriple> triples = read_diagram(file);
    CHECK(triples.size() == 10);
    for (const auto& t : triples) CHECK(t.lower < t.upper);
}

TEST_CASE("zero polynomials, units, and components") {
    for (const std::string& name : Space::builtin_names()) {
        auto p = from_space(*Space::builtin(name));
        CHECK(p->norm_query(encode(StarPoly::zero()), 10) == 0);
        REQUIRE(p->unit_code().has_value());
        CHECK(decode(*p->unit_code()) == StarPoly::variable(Int(0)));
        REQUIRE(p->component_count().has_value());
    }
    CHECK(*from_space(*Space::builtin("point"))->component_count() == 1);
    CHECK(*from_space(*Space::builtin("two-point"))->component_count() == 2);
    CHECK(*from_space(*Space::builtin("three-point"))->component_count() == 3);
    CHECK(*from_space(*Space::builtin("interval"))->component_count() == 1);
    CHECK(*from_space(*Space::builtin("circle"))->component_count() == 1);

    Space broken = *Space::builtin("two-point");
    broken.values[0][0] = GaussianRational(Rational(0));
    CHECK_THROWS_AS(from_space(broken), MissingUnitError);
}
