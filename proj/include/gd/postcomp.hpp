#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gd/oracle.hpp"
#include "gd/unit.hpp"

namespace gd {

// A name of a vector v in the presented algebra: emit(k) returns a code
// whose decoded element lies within 2^-k of v in norm. Streams are
// single-consumer; emissions at different precisions may differ as codes
// but all approximate the same target.
struct VectorName {
    std::function<Int(unsigned)> emit;
};

// Name all of whose emissions are the same exact code.
VectorName exact_name(const StarPoly& v);
VectorName exact_name(const Int& code);

// Refine a unit witness into a name of the unit. One refinement step maps
// w to 2w - w^2, which squares the distance to 1, so any witness with
// certified error below 1/2 reaches every precision. Throws
// std::domain_error on a coarser witness.
VectorName unit_name(const UnitWitness& w);

// A scalar function together with a certified approximation scheme.
//   Poly    exact star-polynomial, no approximation error
//   Sqrt    the square root on [0, M^2]
//   Abs     z -> |z| on the complex disc of radius M
//   PsiAbs  t -> psi(|t|) on [-M, M], for real-valued arguments
struct ScalarFunctionSpec {
    enum class Kind { Poly, Sqrt, Abs, PsiAbs };
    Kind kind;
    StarPoly poly; // Kind::Poly payload, ignored otherwise
};

ScalarFunctionSpec spec_poly(StarPoly p);
ScalarFunctionSpec spec_sqrt();
ScalarFunctionSpec spec_abs();
ScalarFunctionSpec spec_psi_abs();

// A star-polynomial q in x_0 with |q(z) - g(z)| < 2^-k everywhere on the
// spec's box of size M (M >= 1). Every non-exact approximant carries an
// exact rational error certificate (a closed-form truncation tail plus
// the exactly accounted coefficient rounding) that is checked against
// 2^-k before the polynomial is returned, backed by exact residual spot
// checks; CertificationError if the bound cannot be closed.
StarPoly approx_on_box(const ScalarFunctionSpec& g, unsigned M, unsigned k);

// The post-composition p(f_0, ..., f_{n-1}) of names by a star-polynomial.
// Reads the inputs at a precision chosen from a Lipschitz bound for p over
// the inputs' certified norm box, so every emission meets the name
// contract. A nonzero constant term means c * 1_A and therefore requires a
// unit witness; MissingUnitError otherwise.
VectorName post_poly(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const StarPoly& poly, const std::vector<VectorName>& names);

// Names of |f|, max(f, g), min(f, g), and psi(|f|). The absolute value is
// realized as a certified polynomial in f f*, valid for any normal
// element; max and min use the lattice identities (f + g +- |f - g|) / 2
// and additionally require real-valued inputs, as does psi(|f|). The unit
// witness is consulted only if a composition produces a constant term
// (none of the built-in realizations do).
VectorName apply_abs(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const VectorName& f);
VectorName apply_max(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const VectorName& f, const VectorName& g);
VectorName apply_min(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                     const VectorName& f, const VectorName& g);
VectorName apply_psi_abs(const PresentationHandle& p, const std::optional<UnitWitness>& unit,
                         const VectorName& f);

// The gluing profile used by the extraction pipeline: t/2 up to 1/2, then
// the steep ramp (5/2)(t - 1/2) + 1/4 up to 2/3, then t. Exact; t must be
// nonnegative.
Rational psi(const Rational& t);

// The linear threshold polynomial q_r(x) = 1/2 + s (x - r) with
// s = min(1/(2r), 1/(2(1-r))): strictly increasing, maps [0,1] into [0,1],
// and q_r(x) > 1/2 exactly when x > r. Requires 0 < r < 1.
StarPoly q_r(const Rational& r);

// The quintic 16x^5 - 40x^4 + 32x^3 - 8x^2 + x: fixed points exactly
// {0, 1/2, 1}, repelling at 1/2 and attracting at 0 and 1 on [0, 1].
StarPoly quintic();

// Apply the quintic name-wise `times` times (repeated post-composition;
// the quintic has no constant term, so no unit is needed).
VectorName iterate_quintic(const PresentationHandle& p, const VectorName& name, unsigned times);

} // namespace gd
