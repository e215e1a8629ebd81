#include "gd/names.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "gd/codec.hpp"
#include "gd/errors.hpp"
#include "gd/oracle.hpp"

namespace gd {

namespace {

constexpr unsigned kPowerCap = 40;

Rational stage_cap(unsigned s) { return rational_from_long(2, 3) + pow2(-(long)s); }

Rational exact_sup(const std::vector<Rational>& v) {
    Rational best(0);
    for (const auto& x : v) {
        Rational a = x < 0 ? Rational(-x) : x;
        if (a > best) best = a;
    }
    return best;
}

// exact Lagrange interpolation through the values, as a polynomial in the
// first real-valued separating generator of the finite space
StarPoly interpolate_finite(const Space& space, const std::vector<Rational>& vals) {
    if (space.kind != Space::Kind::Finite || vals.size() != space.finite_count())
        throw std::invalid_argument("interpolate_finite: values do not match the space");
    const size_t n = vals.size();
    if (n == 1) return StarPoly::constant(vals[0]);

    size_t gen = 0;
    std::vector<Rational> nodes(n);
    for (size_t g = 1; g < space.gen_count && gen == 0; ++g) {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) {
            if (!space.values[i][g].is_real()) ok = false;
            else nodes[i] = space.values[i][g].re;
        }
        for (size_t i = 0; i < n && ok; ++i)
            for (size_t j = i + 1; j < n && ok; ++j)
                if (nodes[i] == nodes[j]) ok = false;
        if (ok) gen = g;
    }
    if (gen == 0) throw std::invalid_argument("interpolate_finite: no separating real generator");

    std::vector<Rational> acc(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        std::vector<Rational> num{Rational(1)};
        Rational den(1);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            num.push_back(Rational(0));
            for (size_t d = num.size() - 1; d > 0; --d)
                num[d] = num[d - 1] - nodes[j] * num[d];
            num[0] = -nodes[j] * num[0];
            den *= nodes[i] - nodes[j];
        }
        const Rational w = vals[i] / den;
        for (size_t d = 0; d < num.size(); ++d) acc[d] += w * num[d];
    }

    StarPoly::Terms t;
    for (size_t d = 0; d < acc.size(); ++d) {
        if (acc[d] == 0) continue;
        StarMonomial m = d == 0 ? StarMonomial::one()
                                : StarMonomial::normalized(
                                      {{Int(2 * (unsigned long)gen), Int((unsigned long)d)}});
        t.emplace(std::move(m), GaussianRational(acc[d]));
    }
    return StarPoly::from_terms(std::move(t));
}

StarPoly poly_in_t(const ChebSeries& s) {
    const std::vector<Rational> mono = s.monomial_coeffs();
    StarPoly::Terms t;
    for (size_t d = 0; d < mono.size(); ++d) {
        if (mono[d] == 0) continue;
        StarMonomial m = d == 0 ? StarMonomial::one()
                                : StarMonomial::normalized({{Int(2), Int((unsigned long)d)}});
        t.emplace(std::move(m), GaussianRational(mono[d]));
    }
    return StarPoly::from_terms(std::move(t));
}

ChebSeries stripped(ChebSeries s) {
    s.err = 0;
    return s;
}

const std::vector<Rational>& quintic_coeffs() {
    static const std::vector<Rational> v = {
        Rational(0),   rational_from_long(1),  rational_from_long(-8),
        rational_from_long(32), rational_from_long(-40), rational_from_long(16)};
    return v;
}

// ---- stage arithmetic backends ----

struct FiniteOps {
    const Space* space = nullptr;
    size_t width = 0;
    unsigned bits = 17;

    using State = std::vector<Rational>;

    void begin_stage(unsigned next) { bits = next + 16; }

    State seed_state(const DenseVector& u) {
        if (u.values.empty() || u.values.size() != space->finite_count())
            throw std::invalid_argument("stage seed has no matching point values");
        width = u.values.size();
        return u.values;
    }
    State family_state(const DenseVector& u) const {
        if (u.values.size() != width)
            throw std::invalid_argument("family member has no matching point values");
        return u.values;
    }
    State combine(const State& f, const State& u) const {
        State out(width);
        for (size_t i = 0; i < width; ++i) out[i] = round_dyadic(f[i] + u[i], bits, 0);
        return out;
    }
    State scale(const State& f, const Rational& c) const {
        State out(width);
        for (size_t i = 0; i < width; ++i) out[i] = round_dyadic(c * f[i], bits, 0);
        return out;
    }
    State power_step(const State& g) const {
        State out(width);
        for (size_t i = 0; i < width; ++i) {
            Rational y(0);
            for (auto it = quintic_coeffs().rbegin(); it != quintic_coeffs().rend(); ++it)
                y = y * g[i] + *it;
            out[i] = round_dyadic(y, bits, 0);
        }
        return out;
    }
    Rational norm_est(const State& f, unsigned) const { return exact_sup(f); }

    VectorName to_name(const State& f) const { return exact_name(interpolate_finite(*space, f)); }
    StageView to_view(const State& f) const { return StageView{std::nullopt, f, std::nullopt}; }
};

struct IntervalOps {
    unsigned grain = 96;
    Rational allowance;
    size_t degree = 128;

    using State = ChebSeries;

    void begin_stage(unsigned next) {
        grain = 96 + 8 * next;
        allowance = pow2(-(long)(next + 13));
    }

    State seed_state(const DenseVector& u) const {
        if (!u.series) throw std::invalid_argument("stage seed has no interval form");
        return stripped(*u.series);
    }
    State family_state(const DenseVector& u) const {
        if (!u.series) throw std::invalid_argument("family member has no interval form");
        return stripped(*u.series);
    }
    State combine(const State& f, const State& u) const { return stripped(cheb_add(f, u)); }
    State scale(const State& f, const Rational& c) const {
        return stripped(cheb_scale(f, c, grain));
    }
    State power_step(const State& g) {
        for (size_t d = degree; d <= 4096; d *= 2) {
            ChebSeries out = cheb_compose_univariate(quintic_coeffs(), g, d, grain);
            if (out.err <= allowance) {
                degree = d;
                return stripped(out);
            }
        }
        throw BudgetError("stage power step: truncation degree budget exhausted");
    }
    Rational norm_est(const State& f, unsigned m) const {
        return interval_sup_abs(f, ChebSeries::zero(), m);
    }

    VectorName to_name(const State& f) const { return exact_name(poly_in_t(f)); }
    StageView to_view(const State& f) const { return StageView{f, {}, std::nullopt}; }
};

struct GenericOps {
    PresentationHandle pres;

    using State = VectorName;

    void begin_stage(unsigned) {}

    State seed_state(const DenseVector& u) const {
        if (!u.name.emit) throw std::invalid_argument("stage seed carries no name");
        return u.name;
    }
    State family_state(const DenseVector& u) const {
        if (!u.name.emit) throw std::invalid_argument("family member carries no name");
        return u.name;
    }
    State combine(const State& f, const State& u) const {
        static const StarPoly sum = StarPoly::variable(Int(0)) + StarPoly::variable(Int(1));
        return post_poly(pres, std::nullopt, sum, {f, u});
    }
    State scale(const State& f, const Rational& c) const {
        return post_poly(pres, std::nullopt, StarPoly::constant(c) * StarPoly::variable(Int(0)),
                         {f});
    }
    State power_step(const State& g) const { return post_poly(pres, std::nullopt, quintic(), {g}); }
    Rational norm_est(const State& f, unsigned m) const {
        return pres->norm_query(f.emit(m + 1), m + 1);
    }

    VectorName to_name(const State& f) const { return f; }
    StageView to_view(const State&) const { return {}; }
};

// ---- the stage engine ----

template <typename Ops>
class Pipeline {
public:
    Pipeline(Ops ops, const DenseVector& seed, IndexedFamily family)
        : ops_(std::move(ops)), family_(std::move(family)) {
        stages_.push_back(ops_.seed_state(seed));
    }

    VectorName name_at(unsigned s) {
        std::scoped_lock lk(mu_);
        ensure(s);
        return ops_.to_name(stages_[s]);
    }
    StageView view_at(unsigned s) {
        std::scoped_lock lk(mu_);
        ensure(s);
        return ops_.to_view(stages_[s]);
    }
    std::vector<StageRecord> records() {
        std::scoped_lock lk(mu_);
        return records_;
    }

private:
    void ensure(unsigned s) {
        while (stages_.size() <= s) extend();
    }

    const typename Ops::State& member(unsigned j) {
        auto it = members_.find(j);
        if (it == members_.end()) it = members_.emplace(j, ops_.family_state(family_.at(j))).first;
        return it->second;
    }

    void extend() {
        const unsigned s = (unsigned)stages_.size() - 1;
        const unsigned m = s + 2;
        ops_.begin_stage(s + 1);
        const Rational margin = pow2(-(long)m);

        StageRecord rec;
        rec.stage = s + 1;
        std::optional<typename Ops::State> h;
        for (unsigned j = 0; j <= s && !h; ++j) {
            if (used_.count(j)) continue;
            auto cand = ops_.combine(stages_[s], member(j));
            if (ops_.norm_est(cand, m) - margin > rational_from_long(5, 3)) {
                rec.incorporated = j;
                h = ops_.scale(cand, rational_from_long(3, 10));
            }
        }
        if (!h) h = ops_.scale(stages_[s], rational_from_long(3, 4));

        auto g = std::move(*h);
        unsigned k = 0;
        Rational q;
        for (;;) {
            ++k;
            g = ops_.power_step(g);
            q = ops_.norm_est(g, m + k);
            if (q - pow2(-(long)(m + k)) > rational_from_long(3, 4)) break;
            if (k >= kPowerCap)
                throw BudgetError("stage power search exceeded its iteration budget");
        }
        rec.power = k;
        rec.norm_estimate = q;

        if (rec.incorporated) used_.insert(*rec.incorporated);
        stages_.push_back(std::move(g));
        records_.push_back(std::move(rec));
    }

    Ops ops_;
    IndexedFamily family_;
    std::mutex mu_;
    std::vector<typename Ops::State> stages_;
    std::map<unsigned, typename Ops::State> members_;
    std::set<unsigned> used_;
    std::vector<StageRecord> records_;
};

template <typename Ops>
StructuredName adequate_from(Ops ops, const DenseVector& seed, const IndexedFamily& family) {
    auto pipe = std::make_shared<Pipeline<Ops>>(std::move(ops), seed, family);
    StructuredName out;
    out.level = StructuredName::Level::Adequate;
    out.entry = [pipe](unsigned s) { return pipe->name_at(s); };
    out.view = [pipe](unsigned s) { return pipe->view_at(s); };
    out.log = [pipe] { return pipe->records(); };
    return out;
}

// double-precision Clenshaw of the stored part; only used to place fit
// nodes, never trusted
double stored_approx(const ChebSeries& s, double x) {
    double b1 = 0, b2 = 0;
    for (size_t j = s.c.size(); j-- > 0;) {
        const double t = 2 * x * b1 - b2 + s.c[j].to_double();
        b2 = b1;
        b1 = t;
    }
    return b1 - x * b2;
}

double psi_cap_d(double t, double cap) {
    double a = t < 0 ? -t : t;
    double w = a < 0.5 ? a / 2 : (a < 2.0 / 3.0 ? 2.5 * (a - 0.5) + 0.25 : a);
    return w < cap ? w : cap;
}

// Chebyshev interpolant of min(psi(|f|), cap) at n+1 nodes, coefficients
// rounded to `bits` fractional bits. A fit only; the caller certifies it.
ChebSeries fit_capped(const ChebSeries& f, const Rational& cap, size_t n, unsigned bits) {
    const double capd = cap.get_d();
    const size_t pts = n + 1;
    std::vector<double> w(pts);
    for (size_t i = 0; i < pts; ++i) {
        const double theta = M_PI * (2.0 * i + 1.0) / (2.0 * pts);
        w[i] = psi_cap_d(stored_approx(f, std::cos(theta)), capd);
    }
    std::vector<Rational> cheb(pts);
    const Rational scale = pow2(-(long)bits);
    for (size_t j = 0; j < pts; ++j) {
        double acc = 0;
        for (size_t i = 0; i < pts; ++i)
            acc += w[i] * std::cos(j * M_PI * (2.0 * i + 1.0) / (2.0 * pts));
        acc *= (j == 0 ? 1.0 : 2.0) / (double)pts;
        cheb[j] = rational_from_long((long)std::llround(std::ldexp(acc, (int)bits))) * scale;
    }
    while (cheb.size() > 1 && cheb.back() == 0) cheb.pop_back();
    return ChebSeries::from_rationals(cheb, bits + 16);
}

// certified emission of min(psi(|f|), cap) for a stored series: fit a
// candidate numerically, then close an exact sup bound on the difference
// against the piecewise map by branch and bound
Int emit_capped_interval(const ChebSeries& f, const Rational& cap, unsigned k) {
    const ChebEvaluator ef(f);
    const Rational want = pow2(-(long)k);
    const Rational tol = pow2(-(long)(k + 2));

    for (size_t n = std::max<size_t>(128, size_t(8) << k); n <= size_t(1) << 14; n *= 2) {
        ChebSeries cand = fit_capped(f, cap, n, k + 24);
        const ChebEvaluator ec(cand);
        auto gap = [&](const QIv& box) {
            return qiv_abs(qiv_sub(ec.enclose(box), psi_cap_iv(ef.enclose(box), cap)));
        };
        const SupEnclosure se = sup_bb(QIv(Rational(0), Rational(1)), gap, tol, size_t(1) << 18);
        if (se.hi <= want) return encode(poly_in_t(stripped(cand)));
    }
    throw CertificationError("capped emission: no candidate certified at this precision");
}

} // namespace

std::string StageRecord::line() const {
    std::ostringstream os;
    os << "s=" << stage << " branch=" << (incorporated ? "incorporate" : "dilate") << " j=";
    if (incorporated)
        os << *incorporated;
    else
        os << "-";
    os << " k=" << power << " norm=" << rational_to_string(norm_estimate);
    return os.str();
}

Rational psi_cap(const Rational& t, const Rational& cap) {
    Rational a = t < 0 ? Rational(-t) : t;
    Rational w = psi(a);
    return w < cap ? w : cap;
}

QIv psi_cap_iv(const QIv& v, const Rational& cap) {
    const QIv a = qiv_abs(v);
    return {psi_cap(a.lo, cap), psi_cap(a.hi, cap)};
}

DenseVector dense_from_poly(const PresentationHandle& p, const StarPoly& v) {
    DenseVector out;
    out.name = exact_name(v);
    const Space* gt = p->ground_truth();
    if (!gt) return out;
    if (gt->kind == Space::Kind::Finite) {
        out.values.reserve(gt->finite_count());
        for (const auto& z : gt->finite_values(v)) {
            if (!z.is_real())
                throw std::invalid_argument("dense_from_poly: polynomial is not real-valued");
            out.values.push_back(z.re);
        }
    } else if (gt->kind == Space::Kind::Interval) {
        auto [re, im] = interval_forms(*gt, v);
        if (!im.stored_zero() || im.err != 0)
            throw std::invalid_argument("dense_from_poly: polynomial is not real-valued");
        out.error = re.err;
        out.series = stripped(std::move(re));
    }
    return out;
}

StructuredName build_adequate(const PresentationHandle& p, const DenseVector& seed,
                              const IndexedFamily& family) {
    if (!family.at) throw std::invalid_argument("build_adequate: family has no accessor");
    const Space* gt = p->ground_truth();
    if (gt && gt->kind == Space::Kind::Finite && !seed.values.empty())
        return adequate_from(FiniteOps{gt}, seed, family);
    if (gt && gt->kind == Space::Kind::Interval && seed.series)
        return adequate_from(IntervalOps{}, seed, family);
    return adequate_from(GenericOps{p}, seed, family);
}

StructuredName to_well_structured(const PresentationHandle& p,
                                  const std::optional<UnitWitness>& unit,
                                  const StructuredName& adequate) {
    if (adequate.level != StructuredName::Level::Adequate)
        throw std::invalid_argument("to_well_structured: input is not an adequate name");
    if (!adequate.entry || !adequate.view || !adequate.log)
        throw std::invalid_argument("to_well_structured: name is missing accessors");

    auto base = std::make_shared<StructuredName>(adequate);
    StructuredName out;
    out.level = StructuredName::Level::Well;
    out.view = [base](unsigned s) {
        StageView v = base->view(s);
        v.cap = stage_cap(s);
        return v;
    };
    out.entry = [base, p, unit](unsigned s) {
        const Rational cap = stage_cap(s);
        StageView v = base->view(s);
        if (!v.values.empty()) {
            std::vector<Rational> w(v.values.size());
            for (size_t i = 0; i < w.size(); ++i) w[i] = psi_cap(v.values[i], cap);
            return exact_name(interpolate_finite(*p->ground_truth(), w));
        }
        if (v.series) {
            ChebSeries f = stripped(*v.series);
            return VectorName{[f, cap](unsigned k) { return emit_capped_interval(f, cap, k); }};
        }
        VectorName capped = post_poly(p, unit, StarPoly::constant(cap), {});
        return apply_min(p, unit, apply_psi_abs(p, unit, base->entry(s)), capped);
    };
    out.log = base->log;
    return out;
}

} // namespace gd
