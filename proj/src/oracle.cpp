#include "gd/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "gd/codec.hpp"
#include "gd/errors.hpp"
#include "gd/polytext.hpp"

namespace gd {

std::pair<ChebSeries, ChebSeries> interval_forms(const Space& space, const StarPoly& p,
                                                 unsigned prec) {
    std::vector<GaussianRational> coeffs = space.interval_coeffs(p);
    std::vector<Rational> re, im;
    re.reserve(coeffs.size());
    im.reserve(coeffs.size());
    bool any_im = false;
    for (const GaussianRational& c : coeffs) {
        re.push_back(c.re);
        im.push_back(c.im);
        if (c.im != 0) any_im = true;
    }
    if (!any_im) im.clear();
    return {ChebSeries::from_monomial(re, prec), ChebSeries::from_monomial(im, prec)};
}

namespace {

bool series_is_zero(const ChebSeries& s) { return s.c.empty() && s.err == 0; }

QIv qiv_sqrt(const QIv& a, unsigned k) {
    Rational lo = sgn(a.lo) <= 0 ? Rational(0) : sqrt_enclosure(a.lo, k).lo;
    Rational hi = sgn(a.hi) <= 0 ? Rational(0) : sqrt_enclosure(a.hi, k).hi;
    return {std::move(lo), std::move(hi)};
}

Rational sup_abs_pair(const ChebEvaluator& re, const ChebEvaluator* im, unsigned k,
                      size_t budget) {
    BoxFn fn;
    if (im == nullptr) {
        fn = [&re](const QIv& box) { return qiv_abs(re.enclose(box)); };
    } else {
        unsigned sk = k + 4;
        fn = [&re, im, sk](const QIv& box) {
            QIv sq = qiv_add(qiv_sq(re.enclose(box)), qiv_sq(im->enclose(box)));
            return qiv_sqrt(sq, sk);
        };
    }
    SupEnclosure s = sup_bb(QIv{Rational(0), Rational(1)}, fn, pow2(-(long)k - 1), budget);
    return (s.lo + s.hi) / 2;
}

} // namespace

Rational interval_sup_abs(const ChebSeries& re, const ChebSeries& im, unsigned k,
                          size_t budget) {
    ChebEvaluator rev(re);
    if (series_is_zero(im)) return sup_abs_pair(rev, nullptr, k, budget);
    ChebEvaluator imv(im);
    return sup_abs_pair(rev, &imv, k, budget);
}

namespace {

// complex univariate polynomial helpers for the circle charts
using GPoly = std::vector<GaussianRational>;

GPoly gpoly_mul(const GPoly& a, const GPoly& b) {
    if (a.empty() || b.empty()) return {};
    GPoly out(a.size() + b.size() - 1, GaussianRational{});
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

GPoly gpoly_pow(GPoly base, unsigned long e) {
    GPoly acc{GaussianRational(Rational(1))};
    while (e > 0) {
        if (e & 1) acc = gpoly_mul(acc, base);
        e >>= 1;
        if (e) base = gpoly_mul(base, base);
    }
    return acc;
}

struct ChartPoly {
    std::vector<Rational> re, im;
    unsigned long denom_pow; // denominator (1+u^2)^denom_pow
};

QIv qiv_horner(const std::vector<Rational>& cs, const QIv& u) {
    if (cs.empty()) return QIv{};
    QIv acc{cs.back()};
    for (size_t i = cs.size() - 1; i-- > 0;) acc = qiv_add(qiv_mul(acc, u), QIv{cs[i]});
    return acc;
}

QIv qiv_pow_pos(const QIv& a, unsigned long e) {
    QIv acc{Rational(1)};
    for (unsigned long i = 0; i < e; ++i) acc = qiv_mul(acc, a);
    return acc;
}

ChartPoly chart_poly(const std::map<long, GaussianRational>& laurent, int sign) {
    unsigned long m_max = 0;
    for (const auto& [m, c] : laurent) m_max = std::max(m_max, (unsigned long)std::abs(m));
    GaussianRational i1{Rational(0), Rational(2)};
    GaussianRational s1{Rational(sign), Rational(0)};
    GPoly z{s1, i1, -s1};        // sign*(1-u^2) + 2iu
    GPoly zc{s1, -i1, -s1};      // its conjugate
    GPoly den{GaussianRational(Rational(1)), GaussianRational{}, GaussianRational(Rational(1))};
    GPoly acc;
    for (const auto& [m, c] : laurent) {
        unsigned long am = (unsigned long)std::abs(m);
        GPoly num = gpoly_pow(m >= 0 ? z : zc, am);
        num = gpoly_mul(num, gpoly_pow(den, m_max - am));
        if (acc.size() < num.size()) acc.resize(num.size(), GaussianRational{});
        for (size_t i = 0; i < num.size(); ++i) acc[i] = acc[i] + num[i] * c;
    }
    ChartPoly out;
    out.denom_pow = m_max;
    out.re.reserve(acc.size());
    out.im.reserve(acc.size());
    for (const GaussianRational& c : acc) {
        out.re.push_back(c.re);
        out.im.push_back(c.im);
    }
    while (!out.re.empty() && out.re.back() == 0 && out.im.back() == 0) {
        out.re.pop_back();
        out.im.pop_back();
    }
    return out;
}

class GroundTruth : public Presentation {
public:
    explicit GroundTruth(Space s) : space_(std::move(s)) {
        const char* dir = std::getenv("GD_CACHE_DIR");
        if (dir != nullptr && *dir != '\0') cache_path_ = std::string(dir) + "/" + space_.name + ".norms";
    }

    Rational norm_query(const Int& code, unsigned k) const override {
        std::lock_guard<std::mutex> lock(mu_);
        load_persisted();
        auto key = std::make_pair(code, k);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Rational q = compute(code, k);
        cache_.emplace(key, q);
        persist(code, k, q);
        return q;
    }

    std::optional<Int> unit_code() const override {
        return encode(StarPoly::variable(Int(0)));
    }

    std::optional<unsigned> component_count() const override {
        if (space_.kind == Space::Kind::Finite) return (unsigned)space_.finite_count();
        return 1u;
    }

    const Space* ground_truth() const override { return &space_; }

private:
    Rational compute(const Int& code, unsigned k) const {
        StarPoly poly = decode(code);
        if (poly.is_zero()) return Rational(0);
        switch (space_.kind) {
        case Space::Kind::Finite: {
            Rational best = 0;
            for (const GaussianRational& v : space_.finite_values(poly))
                best = std::max(best, v.norm_sq());
            if (best == 0) return Rational(0);
            QIv s = sqrt_enclosure(best, k + 1);
            return (s.lo + s.hi) / 2;
        }
        case Space::Kind::Interval: {
            auto [re, im] = interval_forms(space_, poly);
            return interval_sup_abs(re, im, k);
        }
        case Space::Kind::Circle: {
            std::map<long, GaussianRational> laurent = space_.circle_laurent(poly);
            if (laurent.empty()) return Rational(0);
            Rational lo = 0, hi = 0;
            for (int chart = 0; chart < 2; ++chart) {
                ChartPoly cp = chart_poly(laurent, chart == 0 ? 1 : -1);
                unsigned sk = k + 4;
                BoxFn fn = [&cp, sk](const QIv& u) {
                    QIv nr = qiv_horner(cp.re, u);
                    QIv ni = qiv_horner(cp.im, u);
                    QIv num = qiv_sqrt(qiv_add(qiv_sq(nr), qiv_sq(ni)), sk);
                    QIv den = qiv_pow_pos(qiv_add(QIv{Rational(1)}, qiv_sq(u)), cp.denom_pow);
                    return qiv_div(num, den);
                };
                SupEnclosure s =
                    sup_bb(QIv{Rational(-1), Rational(1)}, fn, pow2(-(long)k - 2), 1u << 18);
                lo = std::max(lo, s.lo);
                hi = std::max(hi, s.hi);
            }
            return (lo + hi) / 2;
        }
        }
        throw std::logic_error("norm_query: bad space kind");
    }

    void load_persisted() const {
        if (cache_path_.empty() || loaded_) return;
        loaded_ = true;
        std::ifstream in(cache_path_);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string code_s, k_s, q_s;
            if (!(ls >> code_s >> k_s >> q_s)) continue;
            try {
                Int code(code_s);
                unsigned k = (unsigned)std::stoul(k_s);
                std::optional<Rational> q = rational_from_string(q_s);
                if (q) cache_.emplace(std::make_pair(code, k), *q);
            } catch (...) {
                continue; // ignore malformed cache lines
            }
        }
    }

    void persist(const Int& code, unsigned k, const Rational& q) const {
        if (cache_path_.empty()) return;
        std::ofstream out(cache_path_, std::ios::app);
        if (!out) return;
        out << code.get_str() << ' ' << k << ' ' << rational_to_string(q) << '\n';
    }

    Space space_;
    std::string cache_path_;
    mutable std::mutex mu_;
    mutable bool loaded_ = false;
    mutable std::map<std::pair<Int, unsigned>, Rational> cache_;
};

} // namespace

PresentationHandle from_space(const Space& space) {
    if (space.kind == Space::Kind::Finite) {
        if (space.values.empty()) throw std::domain_error("from_space: finite space with no points");
        for (const auto& pt : space.values) {
            if (pt.size() != space.gen_count)
                throw std::domain_error("from_space: generator count mismatch");
            if (!(pt[0].re == 1 && pt[0].im == 0))
                throw MissingUnitError("from_space: generator 0 must be the constant 1");
        }
    }
    return std::make_shared<GroundTruth>(space);
}

DiagramStream emit_diagram(const PresentationHandle& p) {
    struct State {
        long round = 0;
        long next = 0;
    };
    auto st = std::make_shared<State>();
    return [p, st]() -> std::optional<DiagramTriple> {
        for (;;) {
            if (st->next > st->round) {
                st->round += 1;
                st->next = 0;
            }
            long j = st->next++;
            unsigned k = (unsigned)(st->round - j);
            Rational q = p->norm_query(Int(j), k);
            Rational half = pow2(1 - (long)k);
            if (q - half > 0) return DiagramTriple{q - half, Int(j), q + half};
        }
    };
}

namespace {

class DiagramBacked : public Presentation {
public:
    DiagramBacked(DiagramStream s, std::optional<Int> unit, std::optional<unsigned> comps,
                  size_t pull_budget)
        : stream_(std::move(s)), unit_(std::move(unit)), comps_(comps), budget_(pull_budget) {}

    Rational norm_query(const Int& code, unsigned k) const override {
        std::lock_guard<std::mutex> lock(mu_);
        Rational width = pow2(1 - (long)k);
        if (auto it = best_.find(code); it != best_.end() && it->second.width() < width)
            return (it->second.lo + it->second.hi) / 2;
        for (size_t pulls = 0; pulls < budget_; ++pulls) {
            if (exhausted_) break;
            std::optional<DiagramTriple> t = stream_();
            if (!t) {
                exhausted_ = true;
                break;
            }
            QIv iv{t->lower, t->upper};
            auto [it, fresh] = best_.emplace(t->code, iv);
            if (!fresh && iv.width() < it->second.width()) it->second = iv;
            if (t->code == code && it->second.width() < width)
                return (it->second.lo + it->second.hi) / 2;
        }
        throw BudgetError(exhausted_ ? "diagram stream exhausted before a narrow enough triple"
                                     : "diagram stream pull budget exhausted");
    }

    std::optional<Int> unit_code() const override { return unit_; }
    std::optional<unsigned> component_count() const override { return comps_; }

private:
    mutable std::mutex mu_;
    mutable DiagramStream stream_;
    mutable std::map<Int, QIv> best_;
    mutable bool exhausted_ = false;
    std::optional<Int> unit_;
    std::optional<unsigned> comps_;
    size_t budget_;
};

} // namespace

PresentationHandle from_diagram_stream(DiagramStream stream, std::optional<Int> unit,
                                       std::optional<unsigned> components, size_t pull_budget) {
    return std::make_shared<DiagramBacked>(std::move(stream), std::move(unit), components,
                                           pull_budget);
}

void write_diagram(std::ostream& out, DiagramStream& s, size_t count) {
    for (size_t i = 0; i < count; ++i) {
        std::optional<DiagramTriple> t = s();
        if (!t) break;
        out << rational_to_string(t->lower) << '\t' << poly_to_text(decode(t->code)) << '\t'
            << rational_to_string(t->upper) << '\n';
    }
}

void write_diagram_focused(std::ostream& out, const PresentationHandle& p,
                           const std::vector<Int>& codes, unsigned k) {
    Rational half = pow2(-(long)k - 1);
    for (const Int& code : codes) {
        Rational q = p->norm_query(code, k + 2);
        if (q - half <= 0) continue;
        out << rational_to_string(q - half) << '\t' << poly_to_text(decode(code)) << '\t'
            << rational_to_string(q + half) << '\n';
    }
}

std::vector<DiagramTriple> read_diagram(std::istream& in) {
    std::vector<DiagramTriple> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw std::runtime_error("diagram line " + std::to_string(lineno) +
                                     ": expected three tab-separated fields");
        auto lower = rational_from_string(line.substr(0, t1));
        auto upper = rational_from_string(line.substr(t2 + 1));
        if (!lower || !upper)
            throw std::runtime_error("diagram line " + std::to_string(lineno) + ": bad rational");
        StarPoly poly = poly_from_text(line.substr(t1 + 1, t2 - t1 - 1));
        if (!(*lower < *upper))
            throw std::runtime_error("diagram line " + std::to_string(lineno) +
                                     ": bounds not ordered");
        out.push_back(DiagramTriple{*lower, encode(poly), *upper});
    }
    return out;
}

DiagramStream stream_from_triples(std::vector<DiagramTriple> triples) {
    auto idx = std::make_shared<size_t>(0);
    auto data = std::make_shared<std::vector<DiagramTriple>>(std::move(triples));
    return [idx, data]() -> std::optional<DiagramTriple> {
        if (*idx >= data->size()) return std::nullopt;
        return (*data)[(*idx)++];
    };
}

} // namespace gd
