#pragma once

#include <stdexcept>
#include <string>

namespace lrk {

/// Input rejected before any numerical work (bad parameters, out-of-range
/// separations, malformed files). The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not deliver its contract: quadrature did not
/// converge, a reduced state came out non-physical, a ground state was
/// degenerate. The CLI maps this to exit code 2.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lrk
