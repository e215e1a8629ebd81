#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gd/postcomp.hpp"

namespace gd {

// One step of the staged construction behind a structured name: while
// building f_{stage}, either some family member was incorporated
// (h = (3/10)(f + u_j)) or the previous stage was dilated (h = (3/4) f),
// and `power` quintic iterates pushed the norm estimate back above 3/4.
struct StageRecord {
    unsigned stage = 0;
    std::optional<unsigned> incorporated;
    unsigned power = 0;
    Rational norm_estimate;

    std::string line() const;
};

// A vector of the presented algebra together with whatever exactly
// materialized views of it exist. `name` is always usable; `values` holds
// exact point values on a finite ground-truth space, `series` an interval
// ground-truth Chebyshev form. `error` bounds the sup distance between the
// materialized views and the vector the caller actually means (stages are
// built from the views, so everything downstream is relative to them).
struct DenseVector {
    VectorName name;
    std::optional<ChebSeries> series;
    std::vector<Rational> values;
    Rational error = 0;
};

// u_0, u_1, ... handed to the stage engine; at(j) must be stable in j.
struct IndexedFamily {
    std::function<DenseVector(unsigned)> at;
};

// Materialized view of one stage, in the same representation the engine
// ran in. Both parts empty when the stages exist only as lazy names.
// When `cap` is set the stored series/values are an underlying stage g and
// the view represents min(psi(|g|), cap) of it pointwise; apply psi_cap /
// psi_cap_iv to evaluate. Keeping the map symbolic keeps views exact.
struct StageView {
    std::optional<ChebSeries> series;
    std::vector<Rational> values;
    std::optional<Rational> cap;

    bool empty() const { return !series && values.empty(); }
};

// min(psi(|t|), cap), exactly, and its exact interval image.
Rational psi_cap(const Rational& t, const Rational& cap);
QIv psi_cap_iv(const QIv& v, const Rational& cap);

// A structured name: entry(s) names the stage vector f_s (entry(0) is the
// seed), view(s) returns its materialized view, log() the records of every
// stage built so far. Adequate level guarantees the nesting
// f_{s+1}^{-1}(1/2, inf) within f_s^{-1}(2/3, inf); well level additionally
// caps ||f_s|| by 2/3 + 2^-s and nests already from 1/4. Stages are built
// on demand and memoized; accessors are safe to call concurrently.
struct StructuredName {
    enum class Level { Adequate, Well };

    Level level = Level::Adequate;
    std::function<VectorName(unsigned)> entry;
    std::function<StageView(unsigned)> view;
    std::function<std::vector<StageRecord>()> log;
};

// Materialize a polynomial as a DenseVector against the presentation's
// ground truth: exact point values on a finite space, a Chebyshev form on
// the interval (the polynomial must be real-valued there), name only
// otherwise.
DenseVector dense_from_poly(const PresentationHandle& p, const StarPoly& v);

// Run the staged construction from a [0,1]-valued seed of norm above 2/3
// against a [0,1]-valued family. Stage s+1 scans j <= s in order for an
// unincorporated u_j with certified ||f_s + u_j|| > 5/3 at working
// precision s+2; the quintic power search then certifies ||f_{s+1}|| > 3/4
// at escalating precision. On a finite ground truth stages are exact point
// vectors rounded to the grid 2^-(s+17); on the interval they are stored
// Chebyshev parts with per-step certified drift below 2^-(s+14); otherwise
// they are lazy post-composition names whose norm estimates go through the
// presentation's oracle (BudgetError when that wall is hit, likewise when a
// power search exceeds its iteration budget).
StructuredName build_adequate(const PresentationHandle& p, const DenseVector& seed,
                              const IndexedFamily& family);

// Stage-wise transform f̂_s = min(psi(|f_s|), 2/3 + 2^-s) of an adequate
// name. Views come back as the adequate view tagged with the stage cap, so
// they stay exact. Entries are exact interpolants on finite views; on
// interval views each emission composes certified kink approximants on the
// stored series (cost grows with the requested precision); on bare names
// the transform is a lazy composition tower whose cap constant needs the
// unit witness (MissingUnitError otherwise).
StructuredName to_well_structured(const PresentationHandle& p,
                                  const std::optional<UnitWitness>& unit,
                                  const StructuredName& adequate);

} // namespace gd
