#pragma once

#include <stdexcept>
#include <string>

#include "gd/starpoly.hpp"

namespace gd {

// Canonical rendering. Terms are joined by " + " in monomial order. Each
// term is "<coeff> * x<j>[^e][*] * ..." with the involution star attached
// to its factor; real coefficients print as "num/den", complex ones as
// "(a/b+c/di)". The zero polynomial prints as "0".
std::string poly_to_text(const StarPoly& p);

struct PolyParseError : std::runtime_error {
    size_t pos;
    PolyParseError(size_t position, const std::string& what)
        : std::runtime_error(what + " at position " + std::to_string(position)), pos(position) {}
};

// Liberal parser: full +,-,* expressions with parentheses, "i", implicit
// multiplication ("2x0"), exponents "^e", and involution as an attached
// "*" or as "^*". Accepts everything poly_to_text emits. Throws
// PolyParseError with the offending position.
StarPoly poly_from_text(const std::string& text);

} // namespace gd
