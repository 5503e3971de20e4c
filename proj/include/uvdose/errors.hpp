#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uvdose {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A queried point sits on the lamp axis, where the line-source model blows up.
struct DegenerateGeometry : Error {
    using Error::Error;
};

struct NegativeDuration : Error {
    using Error::Error;
};

struct OutOfBounds : Error {
    using Error::Error;
};

struct EmptyRegion : Error {
    using Error::Error;
};

struct TooFewPoints : Error {
    using Error::Error;
};

struct NoReachablePoses : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct TooLarge : Error {
    using Error::Error;
};

// Surface point that no trajectory segment illuminates; carries the point index
// so the caller can add coverage instead of silently under-dosing.
struct UnreachablePoint : Error {
    explicit UnreachablePoint(std::size_t point_index)
        : Error("no trajectory segment illuminates surface point " + std::to_string(point_index)),
          index(point_index) {}
    std::size_t index;
};

struct NoFreeStopPoint : Error {
    using Error::Error;
};

struct UnreachableSite : Error {
    explicit UnreachableSite(std::size_t site_index)
        : Error("no chassis path to site " + std::to_string(site_index)), index(site_index) {}
    std::size_t index;
};

struct NoPath : Error {
    using Error::Error;
};

struct OrphanProbe : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

}  // namespace uvdose
