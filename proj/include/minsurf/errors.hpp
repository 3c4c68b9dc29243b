#pragma once

#include <stdexcept>
#include <string>

namespace minsurf {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument / unsupported configuration (wrong dimension, bad radii, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A support slice failed the strict convexity test: min eigenvalue of
/// (h delta_ij + h_ij) is not positive. Curvature operations refuse such slices.
struct NonConvexSlice : Error {
    explicit NonConvexSlice(const std::string& msg) : Error(msg) {}
};

/// h_t >= 0 somewhere: the gradient vanishes or the orientation convention
/// (u = 1 inner, u = 0 outer, h_t < 0) is violated.
struct OrientationError : Error {
    explicit OrientationError(const std::string& msg) : Error(msg) {}
};

/// The requested boundary drop cannot be realized by a graph over the ring.
/// Carries the attainable maximum drop.
struct NoGraphSolution : Error {
    NoGraphSolution(const std::string& msg, double attainable)
        : Error(msg), attainable_drop(attainable) {}
    double attainable_drop;
};

/// A Newton iterate left the strictly convex cone and damping could not recover.
struct ConvexityLoss : Error {
    explicit ConvexityLoss(const std::string& msg) : Error(msg) {}
};

/// A converged solution shows h_t >= 0 somewhere.
struct OrientationLoss : Error {
    explicit OrientationLoss(const std::string& msg) : Error(msg) {}
};

/// Newton failed to reach the requested tolerance.
struct NoConvergence : Error {
    NoConvergence(const std::string& msg, double residual)
        : Error(msg), final_residual(residual) {}
    double final_residual;
};

} // namespace minsurf
