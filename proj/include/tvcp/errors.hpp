#pragma once

#include <stdexcept>
#include <string>

namespace tvcp {

/// Invalid argument or malformed input data. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of iterations before certifying optimality.
/// Maps to CLI exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double final_gap, int iterations)
        : std::runtime_error(what), final_gap_(final_gap), iterations_(iterations) {}

    double final_gap() const noexcept { return final_gap_; }
    int iterations() const noexcept { return iterations_; }

private:
    double final_gap_;
    int iterations_;
};

}  // namespace tvcp
