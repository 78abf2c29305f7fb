#ifndef MLOSC_ERRORS_HPP
#define MLOSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlosc {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of an operation (NaN/Inf included).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Series truncation failed to reach the convergent regime within the term budget.
class NonConvergedError : public Error {
public:
    explicit NonConvergedError(const std::string& msg) : Error(msg) {}
};

/// Large argument in the exponential-growth sector; evaluation refused.
class UnsupportedRegionError : public Error {
public:
    explicit UnsupportedRegionError(const std::string& msg) : Error(msg) {}
};

/// Linear change of variables is numerically singular.
class SingularTransformError : public Error {
public:
    explicit SingularTransformError(const std::string& msg) : Error(msg) {}
};

/// Root configuration too close to a class boundary for a reliable reduction.
class IllConditionedError : public Error {
public:
    explicit IllConditionedError(const std::string& msg) : Error(msg) {}
};

/// L^p norm does not exist for the requested amplitude/exponent combination.
class DivergentNormError : public Error {
public:
    explicit DivergentNormError(const std::string& msg) : Error(msg) {}
};

/// Least-squares fit on degenerate data.
class DegenerateFitError : public Error {
public:
    explicit DegenerateFitError(const std::string& msg) : Error(msg) {}
};

/// Decay scan called with a lambda range shorter than two decades.
class InsufficientDecadesError : public Error {
public:
    explicit InsufficientDecadesError(const std::string& msg) : Error(msg) {}
};

/// Operation undefined for the given phase class (e.g. Zero).
class UnsupportedClassError : public Error {
public:
    explicit UnsupportedClassError(const std::string& msg) : Error(msg) {}
};

} // namespace mlosc

#endif
