#pragma once

#include <stdexcept>
#include <string>

namespace gd {

// A search or certification ran past its configured budget. The condition
// tested is semi-decidable, so running out of budget is an honest "don't
// know", never a wrong answer.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// An operation needed the distinguished unit of the algebra and the
// presentation carries no unit information.
struct MissingUnitError : std::runtime_error {
    explicit MissingUnitError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric certificate could not be established at the requested tolerance.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gd
