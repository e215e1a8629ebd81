#include "gd/unit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "gd/codec.hpp"
#include "gd/errors.hpp"

namespace gd {

Verdict norm_strictly_below(const PresentationHandle& p, const Int& code, const Rational& bound,
                            unsigned m) {
    Rational q = p->norm_query(code, m);
    Rational h = pow2(-(long)m);
    if (q + h < bound) return Verdict::Accept;
    if (q - h >= bound) return Verdict::Reject;
    return Verdict::Unknown;
}

Verdict norm_strictly_above(const PresentationHandle& p, const Int& code, const Rational& bound,
                            unsigned m) {
    Rational q = p->norm_query(code, m);
    Rational h = pow2(-(long)m);
    if (q - h > bound) return Verdict::Accept;
    if (q + h <= bound) return Verdict::Reject;
    return Verdict::Unknown;
}

Verdict decide_below(const PresentationHandle& p, const Int& code, const Rational& bound,
                     unsigned m_lo, unsigned m_hi) {
    for (unsigned m = m_lo; m <= m_hi; ++m) {
        Verdict v = norm_strictly_below(p, code, bound, m);
        if (v != Verdict::Unknown) return v;
    }
    return Verdict::Unknown;
}

Verdict decide_above(const PresentationHandle& p, const Int& code, const Rational& bound,
                     unsigned m_lo, unsigned m_hi) {
    for (unsigned m = m_lo; m <= m_hi; ++m) {
        Verdict v = norm_strictly_above(p, code, bound, m);
        if (v != Verdict::Unknown) return v;
    }
    return Verdict::Unknown;
}

namespace {

// smallest precision whose grain 2^-m drops below eps/4, so that a
// candidate clearing eps with a quarter margin is decided by the ladder
unsigned ladder_cap(const Rational& eps) {
    unsigned m = 1;
    Rational h = pow2(-1);
    while (4 * h >= eps && m < 64) {
        ++m;
        h /= 2;
    }
    return m;
}

// decide_below that treats an oracle budget failure as undecidable, so
// one unanswerable candidate cannot abort a whole search (diagram-backed
// presentations cannot answer zero-norm queries at all)
Verdict decide_below_or_skip(const PresentationHandle& p, const Int& code, const Rational& bound,
                             unsigned m_lo, unsigned m_hi) {
    try {
        return decide_below(p, code, bound, m_lo, m_hi);
    } catch (const BudgetError&) {
        return Verdict::Unknown;
    }
}

// hand-picked candidates worth testing before the blind code scan:
// the constant one, low-index generators, and their complements and
// squares (plausible units and component indicators)
std::vector<StarPoly> guided_polys() {
    std::vector<StarPoly> out;
    StarPoly one = StarPoly::one();
    out.push_back(one);
    for (long j = 1; j <= 3; ++j) {
        StarPoly x = StarPoly::variable(Int(j));
        out.push_back(x);
        out.push_back(one - x);
        out.push_back(x * x);
        out.push_back((one - x) * (one - x));
    }
    // quadratic indicator guesses for a generator taking three evenly
    // spaced values
    StarPoly x = StarPoly::variable(Int(1));
    StarPoly sq = x * x;
    GaussianRational two_c{Rational(2)}, three_c{Rational(3)}, four_c{Rational(4)};
    out.push_back(sq.scale(two_c) - x.scale(three_c) + one);
    out.push_back(x.scale(four_c) - sq.scale(four_c));
    out.push_back(sq.scale(two_c) - x);
    return out;
}

} // namespace

UnitWitness find_unit_nonuniform(const PresentationHandle& p, const Int& hint, unsigned k,
                                 size_t budget) {
    const Rational delta = make_rational(599, 4096);
    const Rational eps0 = pow2(-(2 * (long)k + 1));
    const StarPoly hint_poly = decode(hint);

    // One candidate with the codes of its two test vectors and the
    // verdicts settled so far. Accept and Reject are final; Unknown is
    // retried at the next precision the dovetail assigns.
    struct Cand {
        Int code;
        Int diff_code;
        Int sq_code;
        Verdict diff = Verdict::Unknown;
        Verdict sq = Verdict::Unknown;
        bool dead = false;
    };

    std::vector<Cand> cands;
    std::set<Int> seen;
    auto push = [&](const StarPoly& v) {
        Int code = encode(v);
        if (!seen.insert(code).second) return;
        cands.push_back({code, encode(v - hint_poly), encode(v * v - v), Verdict::Unknown,
                         Verdict::Unknown, false});
    };
    push(hint_poly);
    for (const StarPoly& v : guided_polys()) push(v);
    unsigned long next_blind = 0;

    size_t queries = 0;
    auto test_below = [&](const Int& code, const Rational& bound, unsigned m) -> Verdict {
        ++queries;
        try {
            return norm_strictly_below(p, code, bound, m);
        } catch (const BudgetError&) {
            // the oracle could not answer at this precision (possible for
            // diagram-backed presentations near norm zero); not a verdict
            return Verdict::Unknown;
        }
    };

    // Dovetail candidates against working precisions: on diagonal d,
    // candidate i is probed at precision 2 + (d - i). A candidate whose
    // margins are positive is accepted once the diagonal reaches them; a
    // failing one is rejected and dropped. Precisions beyond hard_cap are
    // outside what the oracle layer can certify, so such candidates are
    // dropped rather than retried forever.
    const unsigned hard_cap = 32;
    for (unsigned long d = 0;; ++d) {
        while (cands.size() <= d) push(decode(Int(next_blind++)));
        for (unsigned long i = 0; i <= d; ++i) {
            Cand& c = cands[i];
            if (c.dead) continue;
            unsigned m = 2 + (unsigned)(d - i);
            if (m > hard_cap) {
                c.dead = true;
                continue;
            }
            if (queries >= budget) throw BudgetError("unit search: no candidate within budget");
            if (c.diff != Verdict::Accept) c.diff = test_below(c.diff_code, delta, m);
            if (c.diff == Verdict::Reject) {
                c.dead = true;
                continue;
            }
            if (queries >= budget) throw BudgetError("unit search: no candidate within budget");
            if (c.sq != Verdict::Accept) c.sq = test_below(c.sq_code, eps0, m);
            if (c.sq == Verdict::Reject) {
                c.dead = true;
                continue;
            }
            if (c.diff == Verdict::Accept && c.sq == Verdict::Accept)
                return UnitWitness{c.code, k, 3 * pow2(-(long)k - 2)};
        }
    }
}

UnitWitness find_unit_uniform(const PresentationHandle& p, unsigned n0, unsigned k,
                              size_t budget) {
    if (n0 == 0) throw std::domain_error("find_unit_uniform: component count must be positive");
    const long k0 = (long)k + 3;
    const Rational ek0 = pow2(-k0);
    const Rational gap = 1 - ek0 * (long)n0;
    if (gap <= 0) throw std::domain_error("find_unit_uniform: component count too large");
    Rational m1 = gap * gap;
    Rational m2 = pow2(-k0 - 1) / Rational((long)n0);
    const Rational eps1 = std::min(m1, m2) / 2;
    Rational s1 = rational_from_long(1, 4);
    Rational frac = ek0 / Rational((long)n0);
    Rational s2 = frac * frac;
    const Rational eps2 = std::min(s1, s2) / 2;
    const Rational half = rational_from_long(1, 2);
    const Rational three_halves = rational_from_long(3, 2);
    const unsigned cap1 = ladder_cap(eps1);
    const unsigned cap2 = ladder_cap(eps2);

    // condition 1 (norm within 1/2 of 1) and condition 3 (approximate
    // idempotence) for one candidate
    auto solo_ok = [&](const StarPoly& v, const Int& code) {
        bool norm_ok = false;
        try {
            for (unsigned m = 2; m <= 8 && !norm_ok; ++m) {
                Rational q = p->norm_query(code, m);
                Rational h = pow2(-(long)m);
                if (q - h > half && q + h < three_halves) norm_ok = true;
                if (q + h <= half || q - h >= three_halves) return false;
            }
        } catch (const BudgetError&) {
            return false;
        }
        if (!norm_ok) return false;
        return decide_below_or_skip(p, encode(v * v - v), eps2, 2, cap2) == Verdict::Accept;
    };

    std::map<std::pair<Int, Int>, bool> pair_memo;
    auto pair_ok = [&](size_t i, size_t j, const std::vector<std::pair<Int, StarPoly>>& sel) {
        auto key = std::make_pair(std::min(sel[i].first, sel[j].first),
                                  std::max(sel[i].first, sel[j].first));
        auto it = pair_memo.find(key);
        if (it != pair_memo.end()) return it->second;
        bool ok = decide_below_or_skip(p, encode(sel[i].second * sel[j].second), eps1, 2, cap1) ==
                  Verdict::Accept;
        pair_memo.emplace(key, ok);
        return ok;
    };

    // accepted candidates in discovery order; each new arrival is tried
    // as the maximal element of an n0-subset, earliest completion wins
    std::vector<std::pair<Int, StarPoly>> accepted;
    auto try_complete = [&]() -> std::optional<UnitWitness> {
        size_t last = accepted.size() - 1;
        std::vector<size_t> pick;
        std::optional<UnitWitness> found;
        auto rec = [&](auto&& self, size_t start, unsigned need) -> bool {
            if (need == 0) {
                std::vector<size_t> full = pick;
                full.push_back(last);
                for (size_t a = 0; a < full.size(); ++a)
                    for (size_t b = a + 1; b < full.size(); ++b)
                        if (!pair_ok(full[a], full[b], accepted)) return false;
                StarPoly sum;
                for (size_t i : full) sum = sum + accepted[i].second;
                found = UnitWitness{encode(sum), k, pow2(-k0 + 1) + Rational((long)n0) * eps1};
                return true;
            }
            for (size_t i = start; i + (need - 1) < last; ++i) {
                pick.push_back(i);
                if (self(self, i + 1, need - 1)) return true;
                pick.pop_back();
            }
            return false;
        };
        if (n0 == 1) {
            StarPoly sum = accepted[last].second;
            return UnitWitness{encode(sum), k, pow2(-k0 + 1) + Rational((long)n0) * eps1};
        }
        rec(rec, 0, n0 - 1);
        return found;
    };

    std::set<Int> seen;
    auto consider = [&](const StarPoly& v, const Int& code) -> std::optional<UnitWitness> {
        if (!seen.insert(code).second) return std::nullopt;
        if (!solo_ok(v, code)) return std::nullopt;
        accepted.emplace_back(code, v);
        return try_complete();
    };

    for (const StarPoly& v : guided_polys()) {
        if (auto w = consider(v, encode(v))) return *w;
    }
    for (size_t j = 0; j < budget; ++j) {
        Int code((unsigned long)j);
        if (seen.count(code)) continue;
        if (auto w = consider(decode(code), code)) return *w;
    }
    throw BudgetError("unit search: no qualifying tuple within budget");
}

UnitWitness resolve_unit(const PresentationHandle& p, unsigned k, size_t budget) {
    if (auto hint = p->unit_code()) return find_unit_nonuniform(p, *hint, k, budget);
    if (auto n0 = p->component_count()) return find_unit_uniform(p, *n0, k, budget);
    throw MissingUnitError("resolve_unit: presentation carries no unit information");
}

} // namespace gd
