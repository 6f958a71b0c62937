#pragma once

#include <stdexcept>
#include <string>

namespace tricomi {

/// Quadrature or series evaluation failed to reach the requested tolerance.
/// Carries the tolerance actually achieved so callers can decide to accept.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double achieved_tol)
        : std::runtime_error(what + " (achieved tolerance " + std::to_string(achieved_tol) + ")"),
          achieved(achieved_tol) {}
    double achieved;
};

/// Evaluation requested on or outside the characteristic cone where the
/// kernel is singular, or the cone reached the box boundary mid-run.
class cone_error : public std::runtime_error {
public:
    explicit cone_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tricomi
