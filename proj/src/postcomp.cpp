#include "gd/postcomp.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "gd/codec.hpp"
#include "gd/errors.hpp"

namespace gd {

namespace {

// smallest e with q <= 2^e
long ceil_log2(const Rational& q) {
    if (q <= 0) throw std::domain_error("ceil_log2: nonpositive argument");
    long e = 0;
    Rational p(1);
    if (q > 1) {
        while (p < q) {
            p *= 2;
            ++e;
        }
    } else {
        while (p / 2 >= q) {
            p /= 2;
            --e;
        }
    }
    return e;
}

Rational coeff_bound(const GaussianRational& c) { return abs(c.re) + abs(c.im); }

// sum over nonconstant terms of |c| * deg * M^(deg-1): a Lipschitz bound
// for the polynomial on the ball of radius M (M >= 1), by telescoping one
// factor at a time
Rational term_lipschitz(const StarPoly& poly, const Rational& M) {
    Rational L(0);
    for (const auto& [mono, c] : poly.terms()) {
        if (mono.is_one()) continue;
        long d = mono.degree().get_si();
        Rational mp(1);
        for (long i = 0; i + 1 < d; ++i) mp *= M;
        L += coeff_bound(c) * Rational(d) * mp;
    }
    return L;
}

// substitute args[i] for x_i (args[i]* for x_i*); the constant term is
// multiplied by one_of
StarPoly subst_poly(const StarPoly& poly, const std::vector<StarPoly>& args,
                    const StarPoly& one_of) {
    std::map<Int, std::vector<StarPoly>> powers;
    auto power = [&](const Int& kappa, const Int& e) -> const StarPoly& {
        auto& tab = powers[kappa];
        if (tab.empty()) {
            size_t idx = static_cast<size_t>(kappa_index(kappa).get_ui());
            StarPoly base = args.at(idx);
            if (kappa_starred(kappa)) base = base.star();
            tab.push_back(StarPoly::one());
            tab.push_back(std::move(base));
        }
        size_t ee = static_cast<size_t>(e.get_ui());
        while (tab.size() <= ee) tab.push_back(tab.back() * tab[1]);
        return tab[ee];
    };
    StarPoly out;
    for (const auto& [mono, c] : poly.terms()) {
        if (mono.is_one()) {
            out = out + one_of.scale(c);
            continue;
        }
        StarPoly term = StarPoly::constant(c);
        for (const auto& [kappa, e] : mono.factors) term = term * power(kappa, e);
        out = out + term;
    }
    return out;
}

// dense univariate integer polynomials over one shared positive
// denominator, coefficient i belonging to x^i; keeping the denominator
// out of the coefficients spares a gcd reduction on every ring operation
struct ZPoly {
    std::vector<Int> c;
    Int den{1};
};

ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
    ZPoly out;
    out.den = a.den * b.den;
    if (a.c.empty() || b.c.empty()) return out;
    out.c.assign(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    return out;
}

// acc += q * a, rescaling acc to the least common denominator
void zp_add_scaled(ZPoly& acc, const ZPoly& a, const Rational& q) {
    Int ad = a.den * q.get_den();
    Int g = gcd(acc.den, ad);
    Int fa = ad / g;
    Int fb = (acc.den / g) * q.get_num();
    if (fa != 1) {
        for (Int& x : acc.c) x *= fa;
        acc.den *= fa;
    }
    if (acc.c.size() < a.c.size()) acc.c.resize(a.c.size(), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) acc.c[i] += a.c[i] * fb;
}

// s(u(x)) by Horner over the inner polynomial u; the accumulator's
// denominator stays s.den times a power of u.den, so every step is exact
ZPoly zp_compose(const ZPoly& s, const ZPoly& u) {
    ZPoly acc;
    if (s.c.empty()) return acc;
    acc.c.assign(1, s.c.back());
    acc.den = s.den;
    Int mult(1);
    for (size_t i = s.c.size() - 1; i-- > 0;) {
        acc = zp_mul(acc, u);
        mult *= u.den;
        if (acc.c.empty()) acc.c.assign(1, Int(0));
        acc.c[0] += s.c[i] * mult;
    }
    return acc;
}

Rational zp_coeff(const ZPoly& a, size_t i) {
    if (i >= a.c.size()) return Rational(0);
    return make_rational(a.c[i], a.den);
}

Rational zp_eval(const ZPoly& a, const Rational& x) {
    Rational acc(0);
    for (size_t i = a.c.size(); i-- > 0;) acc = acc * x + Rational(a.c[i]);
    return acc / Rational(a.den);
}

// the scaled coefficients as plain powers of x_index
StarPoly zp_to_poly(const ZPoly& a, const Int& index) {
    StarPoly::Terms t;
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        StarMonomial m = i == 0 ? StarMonomial::one()
                                : StarMonomial::normalized({{index + index, Int((unsigned long)i)}});
        t.emplace(std::move(m), GaussianRational(make_rational(a.c[i], a.den)));
    }
    return StarPoly::from_terms(std::move(t));
}

// enclosure of pi via Machin's formula; both arctangent series alternate,
// so the remainder is bracketed by the next term
const QIv& pi_enclosure() {
    static const QIv pi = [] {
        auto atan_inv = [](long q) {
            Rational q2inv = rational_from_long(1, q * q);
            Rational qpow = rational_from_long(1, q);
            Rational sum(0);
            Rational tiny = pow2(-300);
            long n = 0;
            while (true) {
                Rational den(2 * n + 1);
                Rational t = qpow / den;
                if (n % 2 == 0)
                    sum += t;
                else
                    sum -= t;
                qpow *= q2inv;
                ++n;
                Rational nden(2 * n + 1);
                Rational next = qpow / nden;
                if (next < tiny) {
                    if (n % 2 == 0) return QIv(sum, sum + next);
                    return QIv(sum - next, sum);
                }
            }
        };
        QIv a = atan_inv(5);
        QIv b = atan_inv(239);
        return QIv(16 * a.lo - 4 * b.hi, 16 * a.hi - 4 * b.lo);
    }();
    return pi;
}

// construction accuracies past this make the polynomial degree (which
// doubles per bit) unmanageable for exact arithmetic
constexpr unsigned kMaxBuildAccuracy = 10;

struct SqrtApprox {
    ZPoly s;
    Rational cert; // exact bound for sup |s - sqrt| over [0, M^2]
};

// Truncated Chebyshev series of the square root, scaled to [0, M^2]: the
// shifted-basis coefficients are c_0 = 2/pi and
// c_i = (-1)^(i+1) (4/pi) / (4 i^2 - 1). Composing with t^2 reproduces the
// Chebyshev series of |t| on [-M, M], so the truncation error is exactly
// the coefficient tail, and the tail telescopes to 2 / (pi (2N+1)). The
// certificate is that closed-form tail plus the exactly accounted rounding
// of each stored coefficient; exact residual samples guard the recurrence.
const SqrtApprox& build_sqrt(unsigned M, unsigned k) {
    static std::map<std::pair<unsigned, unsigned>, SqrtApprox> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({M, k});
    if (it != cache.end()) return it->second;
    if (M == 0) throw std::domain_error("build_sqrt: box size must be positive");
    if (k > kMaxBuildAccuracy)
        throw std::domain_error("build_sqrt: accuracy beyond the supported construction range");

    const Rational pi_lo = pi_enclosure().lo;
    const Rational pi_hi = pi_enclosure().hi;
    const Rational mr((long)M);
    const Rational target = pow2(-(long)k);
    const Rational tail_budget = pow2(-(long)k - 2);
    unsigned long N = 1;
    while (true) {
        Rational tail = mr * 2 / (pi_lo * Rational(2 * (long)N + 1));
        if (tail < tail_budget) break;
        ++N;
    }

    const unsigned grain = 2 * k + 24 + std::bit_width(M);
    for (int attempt = 0;; ++attempt) {
        Rational rounding(0);
        auto coeff = [&](const Rational& base, bool negative) {
            Rational lo = base / pi_hi;
            Rational hi = base / pi_lo;
            if (negative) {
                Rational t = -hi;
                hi = -lo;
                lo = t;
            }
            Rational mid = (lo + hi) / 2;
            Rational ct = round_dyadic(mid, grain, 0);
            Rational ea = abs(ct - lo);
            Rational eb = abs(ct - hi);
            rounding += std::max(ea, eb);
            return ct;
        };
        const long m2 = (long)M * (long)M;
        ZPoly w{{Int(-m2), Int(2)}, Int(m2)};
        ZPoly prev{{Int(1)}, Int(1)};
        ZPoly cur = w;
        ZPoly s;
        Rational c0 = mr * coeff(Rational(2), false);
        zp_add_scaled(s, prev, c0);
        Rational c1 = mr * coeff(Rational(4) / 3, false);
        zp_add_scaled(s, cur, c1);
        for (unsigned long i = 2; i <= N; ++i) {
            ZPoly next = zp_mul(w, cur);
            for (Int& c : next.c) c *= 2;
            zp_add_scaled(next, prev, Rational(-1));
            prev = std::move(cur);
            cur = std::move(next);
            Rational base = Rational(4) / Rational(4 * (long)(i * i) - 1);
            Rational ci = mr * coeff(base, i % 2 == 0);
            zp_add_scaled(s, cur, ci);
        }
        Rational tail_ub = Rational(2) / (pi_lo * Rational(2 * (long)N + 1));
        Rational cert = mr * (rounding + tail_ub);
        if (cert < target) {
            const Rational samples[] = {Rational(0), mr, mr / 2, mr / 3};
            for (const Rational& t : samples) {
                Rational resid = abs(zp_eval(s, t * t) - t);
                if (resid > cert)
                    throw CertificationError("sqrt approximant: residual exceeds certificate");
            }
            return cache.emplace(std::make_pair(M, k), SqrtApprox{std::move(s), cert})
                .first->second;
        }
        if (attempt == 2) throw CertificationError("sqrt approximant: error bound failed to close");
        N = 2 * N;
    }
}

// a certified scalar approximant in dense scaled form: for Abs the
// coefficient at slot i multiplies (z z*)^i, for PsiAbs it multiplies
// t^i; slot 0 is zero in both cases, so the unit is never consulted
struct DenseScalar {
    ZPoly r;
    Rational cert;
    Rational target_lip;
};

// |z| = sqrt(z z*) on the disc of radius M: reuse the square-root
// approximant with its constant dropped, which spares the unit and costs
// at most the approximant's own value at zero
DenseScalar build_abs(unsigned M, unsigned k) {
    const SqrtApprox& sq = build_sqrt(M, k + 1);
    Rational c0 = abs(zp_coeff(sq.s, 0));
    Rational cert = sq.cert + c0;
    if (!(cert < pow2(-(long)k)))
        throw CertificationError("absolute value approximant: error bound failed to close");
    ZPoly r = sq.s;
    if (!r.c.empty()) r.c[0] = 0;
    return {std::move(r), cert, Rational(1)};
}

// psi(|t|) agrees with sum_i gamma_i |t - kappa_i| everywhere on the
// reals (the kinks match, the slopes sum to 1, and both sides vanish at
// zero), so the profile becomes five parallel square-root compositions
// sharing one approximant on the enclosing box; sum |gamma_i| = 4
DenseScalar build_psi_abs(unsigned M, unsigned k) {
    static const std::pair<Rational, Rational> kinks[] = {
        {rational_from_long(-3, 4), rational_from_long(-2, 3)},
        {Rational(1), rational_from_long(-1, 2)},
        {rational_from_long(1, 2), Rational(0)},
        {Rational(1), rational_from_long(1, 2)},
        {rational_from_long(-3, 4), rational_from_long(2, 3)},
    };
    const SqrtApprox& sq = build_sqrt(M + 1, k + 3);
    ZPoly r;
    for (const auto& [gamma, kappa] : kinks) {
        Int num = kappa.get_num();
        Int den = kappa.get_den();
        ZPoly u{{num * num, Int(-2) * num * den, den * den}, den * den};
        zp_add_scaled(r, zp_compose(sq.s, u), gamma);
    }
    Rational c0 = abs(zp_coeff(r, 0));
    if (!r.c.empty()) r.c[0] = 0;
    Rational cert = 4 * sq.cert + c0;
    if (!(cert < pow2(-(long)k)))
        throw CertificationError("psi approximant: error bound failed to close");
    Rational half = rational_from_long(1, 2);
    Rational knee = rational_from_long(2, 3);
    const Rational samples[] = {Rational(0),       half,
                                Rational(-half),   knee,
                                Rational((long)M), Rational(-(long)M)};
    for (const Rational& t : samples) {
        Rational at = abs(t);
        Rational resid = abs(zp_eval(r, t) - psi(at));
        if (resid > cert)
            throw CertificationError("psi approximant: residual exceeds certificate");
    }
    return {std::move(r), cert, rational_from_long(5, 2)};
}

const DenseScalar& dense_scalar(ScalarFunctionSpec::Kind kind, unsigned M, unsigned k) {
    static std::map<std::tuple<int, unsigned, unsigned>, DenseScalar> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple((int)kind, M, k);
    auto it = cache.find(key);
    if (it == cache.end()) {
        DenseScalar d = kind == ScalarFunctionSpec::Kind::Abs ? build_abs(M, k)
                                                              : build_psi_abs(M, k);
        it = cache.emplace(key, std::move(d)).first;
    }
    return it->second;
}

// the star-polynomial form: psi stays in plain powers, the absolute value
// pairs each power with its star so the code works for any normal input
StarPoly mixed_form(ScalarFunctionSpec::Kind kind, const DenseScalar& ds) {
    if (kind == ScalarFunctionSpec::Kind::PsiAbs) return zp_to_poly(ds.r, Int(0));
    StarPoly::Terms t;
    for (size_t i = 1; i < ds.r.c.size(); ++i) {
        if (ds.r.c[i] == 0) continue;
        Int ei((unsigned long)i);
        t.emplace(StarMonomial::normalized({{Int(0), ei}, {Int(1), ei}}),
                  GaussianRational(make_rational(ds.r.c[i], ds.r.den)));
    }
    return StarPoly::from_terms(std::move(t));
}

struct CertifiedScalar {
    StarPoly poly;
    Rational target_lip;
};

CertifiedScalar build_certified(const ScalarFunctionSpec& g, unsigned M, unsigned k) {
    if (M == 0) throw std::domain_error("approx_on_box: box size must be positive");
    switch (g.kind) {
        case ScalarFunctionSpec::Kind::Poly:
            return {g.poly, term_lipschitz(g.poly, Rational((long)M))};
        case ScalarFunctionSpec::Kind::Sqrt:
            // exposed raw; never composed through the Lipschitz path,
            // since the square root has no finite modulus at zero
            return {zp_to_poly(build_sqrt(M, k).s, Int(0)), Rational(0)};
        case ScalarFunctionSpec::Kind::Abs:
        case ScalarFunctionSpec::Kind::PsiAbs: {
            const DenseScalar& ds = dense_scalar(g.kind, M, k);
            return {mixed_form(g.kind, ds), ds.target_lip};
        }
    }
    throw std::logic_error("approx_on_box: unknown spec kind");
}

// smallest natural box certified to contain the target and every read of
// it: ||f|| < q + 1/2 and reads at precision 2 and deeper add at most 1/4
unsigned natural_box(const PresentationHandle& p, const VectorName& f) {
    Rational q = p->norm_query(f.emit(2), 2);
    Rational need = q + 1;
    unsigned m = 1;
    while (Rational((long)m) < need) ++m;
    return m;
}

// generators with real joint spectrum admit the h h* -> h^2 rewrite that
// keeps absolute value codes univariate
bool real_ground(const PresentationHandle& p) {
    const Space* s = p->ground_truth();
    return s && s->kind != Space::Kind::Circle;
}

// a single-generator, star-free, real-coefficient polynomial in dense form
std::optional<std::pair<Int, ZPoly>> univariate_real(const StarPoly& h) {
    Int index(0);
    bool seen = false;
    size_t top = 0;
    for (const auto& [mono, c] : h.terms()) {
        if (c.im != 0) return std::nullopt;
        if (mono.is_one()) continue;
        if (mono.factors.size() != 1) return std::nullopt;
        const auto& [kappa, e] = mono.factors[0];
        if (kappa_starred(kappa)) return std::nullopt;
        Int idx = kappa_index(kappa);
        if (seen && idx != index) return std::nullopt;
        index = idx;
        seen = true;
        top = std::max(top, (size_t)e.get_ui());
    }
    ZPoly out;
    for (const auto& [mono, c] : h.terms()) {
        Int d = c.re.get_den();
        out.den = out.den / gcd(out.den, d) * d;
    }
    out.c.assign(top + 1, Int(0));
    for (const auto& [mono, c] : h.terms()) {
        size_t d = mono.is_one() ? 0 : (size_t)mono.factors[0].second.get_ui();
        out.c[d] = c.re.get_num() * (out.den / c.re.get_den());
    }
    return std::make_pair(index, std::move(out));
}

// |c| or psi(|c|) for a constant input via an exact modulus enclosure;
// zero stays exactly zero, and psi rides the enclosure monotonically
Int constant_lane(ScalarFunctionSpec::Kind kind, const GaussianRational& c, unsigned k) {
    Rational m2 = c.re * c.re + c.im * c.im;
    if (m2 == 0) return encode(StarPoly::zero());
    QIv e = sqrt_enclosure(m2, k + 4);
    Rational zero(0);
    Rational lo = std::max(e.lo, zero);
    Rational hi = e.hi;
    if (kind == ScalarFunctionSpec::Kind::PsiAbs) {
        lo = psi(lo);
        hi = psi(hi);
    }
    Rational mid = (lo + hi) / 2;
    return encode(StarPoly::constant(mid));
}

// post-compose one certified scalar approximant with one name; the
// approximant is taken at k+1 and the input read deep enough that the
// target function's own Lipschitz constant keeps the total under 2^-k.
// Constant inputs collapse to exact enclosures, and real univariate
// inputs stay dense so the emitted code's size tracks its degree.
VectorName compose_scalar(const PresentationHandle& p, ScalarFunctionSpec::Kind kind,
                          const VectorName& f) {
    auto box = std::make_shared<std::optional<unsigned>>();
    VectorName out;
    out.emit = [p, kind, f, box](unsigned k) -> Int {
        unsigned k_in = k + 1 + (kind == ScalarFunctionSpec::Kind::PsiAbs ? 2 : 0);
        StarPoly h = decode(f.emit(k_in));
        if (h.is_constant()) return constant_lane(kind, h.constant_value(), k);
        if (!box->has_value()) *box = natural_box(p, f);
        const DenseScalar& ds = dense_scalar(kind, **box, k + 1);
        if (auto uv = univariate_real(h)) {
            const auto& [index, hz] = *uv;
            if (kind == ScalarFunctionSpec::Kind::PsiAbs)
                return encode(zp_to_poly(zp_compose(ds.r, hz), index));
            if (real_ground(p)) {
                ZPoly v = zp_mul(hz, hz);
                ZPoly acc;
                acc.c.assign(1, ds.r.c.back());
                acc.den = ds.r.den;
                Int mult(1);
                for (size_t i = ds.r.c.size() - 1; i-- > 1;) {
                    acc = zp_mul(acc, v);
                    mult *= v.den;
                    acc.c[0] += ds.r.c[i] * mult;
                }
                return encode(zp_to_poly(zp_mul(acc, v), index));
            }
        }
        return encode(subst_poly(mixed_form(kind, ds), {h}, StarPoly::one()));
    };
    return out;
}

} // namespace

VectorName exact_name(const StarPoly& v) { return exact_name(encode(v)); }

VectorName exact_name(const Int& code) {
    return {[code](unsigned) { return code; }};
}

VectorName unit_name(const UnitWitness& w) {
    if (!(w.certified_error < rational_from_long(1, 2)))
        throw std::domain_error("unit_name: witness too coarse to refine");
    Int code = w.code;
    Rational cert = w.certified_error;
    return {[code, cert](unsigned k) -> Int {
        Rational target = pow2(-(long)k);
        if (cert < target) return code;
        StarPoly v = decode(code);
        Rational err = cert;
        while (!(err < target)) {
            err = err * err;
            v = v + v - v * v;
        }
        return encode(v);
    }};
}

ScalarFunctionSpec spec_poly(StarPoly p) { return {ScalarFunctionSpec::Kind::Poly, std::move(p)}; }
ScalarFunctionSpec spec_sqrt() { return {ScalarFunctionSpec::Kind::Sqrt, StarPoly::zero()}; }
ScalarFunctionSpec spec_abs() { return {ScalarFunctionSpec::Kind::Abs, StarPoly::zero()}; }
ScalarFunctionSpec spec_psi_abs() { return {ScalarFunctionSpec::Kind::PsiAbs, StarPoly::zero()}; }

StarPoly approx_on_box(const ScalarFunctionSpec& g, unsigned M, unsigned k) {
    return build_certified(g, M, k).poly;
}

VectorName post_poly(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const StarPoly& poly, const std::vector<VectorName>& names) {
    if (auto mi = poly.max_index()) {
        if (*mi >= Int((unsigned long)names.size()))
            throw std::domain_error("post_poly: polynomial uses more indeterminates than names");
    }
    GaussianRational c0;
    auto it0 = poly.terms().find(StarMonomial::one());
    if (it0 != poly.terms().end()) c0 = it0->second;
    if (!c0.is_zero() && !unit)
        throw MissingUnitError("post_poly: nonzero constant term requires a unit witness");
    std::optional<VectorName> uname;
    if (!c0.is_zero()) uname = unit_name(*unit);

    struct Plan {
        long lip_shift = -1;
        long unit_shift = 0;
    };
    auto plan = std::make_shared<Plan>();
    VectorName out;
    out.emit = [p, poly, names, c0, uname, plan](unsigned k) -> Int {
        if (plan->lip_shift < 0) {
            Rational box(1);
            for (const VectorName& n : names) {
                Rational m = p->norm_query(n.emit(2), 2) + 1;
                if (m > box) box = m;
            }
            Rational lip = term_lipschitz(poly, box);
            if (lip < 1) lip = 1;
            plan->lip_shift = 1 + std::max(0L, ceil_log2(lip));
            if (!c0.is_zero()) plan->unit_shift = 1 + std::max(0L, ceil_log2(coeff_bound(c0)));
        }
        unsigned k_in = k + (unsigned)plan->lip_shift;
        std::vector<StarPoly> args;
        args.reserve(names.size());
        for (const VectorName& n : names) args.push_back(decode(n.emit(k_in)));
        StarPoly one_of = StarPoly::one();
        if (uname) one_of = decode(uname->emit(k + (unsigned)plan->unit_shift));
        return encode(subst_poly(poly, args, one_of));
    };
    return out;
}

VectorName apply_abs(const PresentationHandle& p, const std::optional<UnitWitness>&,
                     const VectorName& f) {
    return compose_scalar(p, ScalarFunctionSpec::Kind::Abs, f);
}

VectorName apply_max(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const VectorName& f, const VectorName& g) {
    StarPoly x0 = StarPoly::variable(Int(0));
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly x2 = StarPoly::variable(Int(2));
    VectorName a = apply_abs(p, unit, post_poly(p, unit, x0 - x1, {f, g}));
    GaussianRational half{rational_from_long(1, 2)};
    return post_poly(p, unit, (x0 + x1 + x2).scale(half), {f, g, a});
}

VectorName apply_min(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const VectorName& f, const VectorName& g) {
    StarPoly x0 = StarPoly::variable(Int(0));
    StarPoly x1 = StarPoly::variable(Int(1));
    StarPoly x2 = StarPoly::variable(Int(2));
    VectorName a = apply_abs(p, unit, post_poly(p, unit, x0 - x1, {f, g}));
    GaussianRational half{rational_from_long(1, 2)};
    return post_poly(p, unit, (x0 + x1 - x2).scale(half), {f, g, a});
}

VectorName apply_psi_abs(const PresentationHandle& p, const std::optional<UnitWitness>&,
                         const VectorName& f) {
    return compose_scalar(p, ScalarFunctionSpec::Kind::PsiAbs, f);
}

Rational psi(const Rational& t) {
    if (t < 0) throw std::domain_error("psi: negative argument");
    Rational half = rational_from_long(1, 2);
    if (t <= half) return t / 2;
    Rational knee = rational_from_long(2, 3);
    if (t <= knee) return rational_from_long(5, 2) * (t - half) + rational_from_long(1, 4);
    return t;
}

StarPoly q_r(const Rational& r) {
    if (!(0 < r && r < 1)) throw std::domain_error("q_r: r must lie strictly inside (0,1)");
    Rational a = Rational(1) / (2 * r);
    Rational b = Rational(1) / (2 * (1 - r));
    Rational s = std::min(a, b);
    StarPoly x = StarPoly::variable(Int(0));
    return StarPoly::constant(Rational(rational_from_long(1, 2) - s * r)) +
           x.scale(GaussianRational(s));
}

StarPoly quintic() {
    StarPoly x = StarPoly::variable(Int(0));
    StarPoly x2 = x * x;
    StarPoly x3 = x2 * x;
    StarPoly x4 = x2 * x2;
    StarPoly x5 = x4 * x;
    return x5.scale(GaussianRational(Rational(16))) - x4.scale(GaussianRational(Rational(40))) +
           x3.scale(GaussianRational(Rational(32))) - x2.scale(GaussianRational(Rational(8))) + x;
}

VectorName iterate_quintic(const PresentationHandle& p, const VectorName& name, unsigned times) {
    VectorName cur = name;
    StarPoly q = quintic();
    for (unsigned i = 0; i < times; ++i) cur = post_poly(p, std::nullopt, q, {cur});
    return cur;
}

} // namespace gd
