#pragma once

#include "gd/starpoly.hpp"

namespace gd {

// Code space: every natural decodes to a polynomial (decode is total and
// surjective onto canonical forms); encode produces the canonical code, so
// decode(encode(p)) == p always and encode(decode(j)) == j exactly when j
// is canonical. The bit layout is documented in codec.cpp.
StarPoly decode(const Int& code);
Int encode(const StarPoly& p);

struct CombinedCodes {
    Int sum, product, star;
};

// Codes of decode(m)+decode(n), decode(m)*decode(n), decode(m)^*.
CombinedCodes combine_codes(const Int& m, const Int& n);

} // namespace gd
