#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace delidx {

// Invalid input parameters (mu outside its interval, H <= 1, bad grid sizes).
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to converge; carries the residual it reached.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg,
                           double residual = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Violation of a property the theory guarantees; indicates a bug, not bad input.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Bad CLI / experiment usage (too few lengths, unknown flag values).
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace delidx
