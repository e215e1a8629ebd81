#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "gd/chebyshev.hpp"
#include "gd/space.hpp"
#include "gd/starpoly.hpp"

namespace gd {

// One certified norm fact: lower < ||decode(code)|| < upper, both strict.
struct DiagramTriple {
    Rational lower;
    Int code;
    Rational upper;
};

// A presentation of a commutative unital C*-algebra: a norm oracle over
// codes of rational *-polynomials, plus whatever structural hints the
// source carries.
class Presentation {
public:
    virtual ~Presentation() = default;

    // some rational q with |q - ||decode(code)||| < 2^-k
    virtual Rational norm_query(const Int& code, unsigned k) const = 0;
    // code of a polynomial evaluating to the unit, when known
    virtual std::optional<Int> unit_code() const { return std::nullopt; }
    // number of connected components of the spectrum, when known
    virtual std::optional<unsigned> component_count() const { return std::nullopt; }
    // the space this presentation was built from, when it has one
    virtual const Space* ground_truth() const { return nullptr; }
};

using PresentationHandle = std::shared_ptr<const Presentation>;

// Presentation of C(X) for a concrete space. Norm queries run certified
// enclosure searches against the space itself. Requires generator 0 to be
// the constant 1.
PresentationHandle from_space(const Space& space);

// Pull-based stream of diagram triples; std::nullopt means exhausted.
using DiagramStream = std::function<std::optional<DiagramTriple>()>;

// Canonical diagram of a presentation: dovetails codes against precisions,
// skipping triples whose certified lower bound is not positive. The zero
// vector never receives a triple; every other coded vector receives triples
// of arbitrarily small width.
DiagramStream emit_diagram(const PresentationHandle& p);

// Presentation backed by nothing but a diagram stream. Queries scan the
// stream (caching every triple seen) until a narrow enough triple for the
// requested code appears; a finite stream that runs out first raises
// BudgetError.
PresentationHandle from_diagram_stream(DiagramStream stream,
                                       std::optional<Int> unit = std::nullopt,
                                       std::optional<unsigned> components = std::nullopt,
                                       size_t pull_budget = 1u << 20);

// Text formats, one record per line, tab-separated:
//   diagram line: <lower> <poly-text> <upper>
void write_diagram(std::ostream& out, DiagramStream& s, size_t count);
// triples for the given codes only, each at width 2 * 2^-k
void write_diagram_focused(std::ostream& out, const PresentationHandle& p,
                           const std::vector<Int>& codes, unsigned k);
std::vector<DiagramTriple> read_diagram(std::istream& in);
DiagramStream stream_from_triples(std::vector<DiagramTriple> triples);

// Certified sup of |re + i*im| over [0,1] within 2^-k, both parts given as
// Chebyshev series. Shared by the norm oracle and the extraction pipeline.
Rational interval_sup_abs(const ChebSeries& re, const ChebSeries& im, unsigned k,
                          size_t budget = 1u << 18);

// Split a code polynomial on the interval space into real and imaginary
// Chebyshev series.
std::pair<ChebSeries, ChebSeries> interval_forms(const Space& space, const StarPoly& p,
                                                 unsigned prec = 96);

} // namespace gd
