#pragma once

#include <cstddef>

#include "gd/oracle.hpp"

namespace gd {

// A code certified to lie within certified_error of the unit of the
// presented algebra, with certified_error < 2^-k.
struct UnitWitness {
    Int code;
    unsigned k;
    Rational certified_error;
};

enum class Verdict { Accept, Reject, Unknown };

// Semi-decision of a strict norm inequality at working precision m.
// norm_strictly_below: Accept certifies ||decode(code)|| < bound,
// Reject certifies it is not, Unknown means the margin at this
// precision is too small to tell. norm_strictly_above is the same for
// ||decode(code)|| > bound.
Verdict norm_strictly_below(const PresentationHandle& p, const Int& code, const Rational& bound,
                            unsigned m);
Verdict norm_strictly_above(const PresentationHandle& p, const Int& code, const Rational& bound,
                            unsigned m);

// Escalate precision from m_lo to m_hi until the inequality is decided;
// Unknown when the ladder is exhausted.
Verdict decide_below(const PresentationHandle& p, const Int& code, const Rational& bound,
                     unsigned m_lo, unsigned m_hi);
Verdict decide_above(const PresentationHandle& p, const Int& code, const Rational& bound,
                     unsigned m_lo, unsigned m_hi);

// Search for a rational vector v with ||v^2 - v|| < 2^-(2k+1) and
// ||v - decode(hint)|| < 599/4096. Requires ||decode(hint) - 1|| <
// 599/4096 (a rational under-approximation of (1 - 2^(-1/2))/2, so the
// precondition here is slightly stronger than strictly necessary); under
// it the search terminates and the result satisfies ||v - 1|| <= 3*2^-(k+2).
// Candidates and working precisions are dovetailed, so one undecidable
// candidate cannot stall the search. Throws BudgetError once `budget`
// oracle queries have been spent without success.
UnitWitness find_unit_nonuniform(const PresentationHandle& p, const Int& hint, unsigned k,
                                 size_t budget = 1u << 12);

// Search for v_1, ..., v_n0 with | ||v_n|| - 1 | < 1/2, pairwise
// ||v_m v_n|| < eps1, and ||v_n^2 - v_n|| < eps2 (constants from k0 =
// k+3); returns their sum, which satisfies ||v - 1|| <= 2^-(k0-1) +
// n0*eps1 < 2^-(k+1). Requires the spectrum to have exactly n0 connected
// components; a wrong n0 ends in BudgetError.
UnitWitness find_unit_uniform(const PresentationHandle& p, unsigned n0, unsigned k,
                              size_t budget = 1u << 12);

// Dispatch: unit_code() hint if present, else component_count(); throws
// MissingUnitError when the presentation carries neither.
UnitWitness resolve_unit(const PresentationHandle& p, unsigned k, size_t budget = 1u << 12);

} // namespace gd
