#pragma once

#include <stdexcept>
#include <string>

namespace wabc {

/// Failures of the numerical scheme itself (as opposed to bad input).
class NumericalError : public std::runtime_error {
public:
    enum class Kind { FixedPointDivergence, AbcDegeneracy, SolverBreakdown };

    NumericalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

}  // namespace wabc
