#pragma once
#include <stdexcept>
#include <string>

namespace fhopf {

// Chart coordinate outside its valid range (s at or beyond (0, pi/2)).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Metric block not positive definite at the requested point.
struct DegenerateMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidCharge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundaryMismatch : std::runtime_error {
    double achieved;
    BoundaryMismatch(const std::string& msg, double achieved_value)
        : std::runtime_error(msg), achieved(achieved_value) {}
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridTooCoarse : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct LineSearchFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionNearZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fhopf
