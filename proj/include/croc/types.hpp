#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace croc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Units are millimeters and radians everywhere inside the library.
// Degrees appear only at the CLI boundary and in the tail servo output.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameterError : Error {
    using Error::Error;
};

// Joint-vector length does not match the chain.
struct ArityError : Error {
    using Error::Error;
};

// Target outside the reachable annulus. Carries the offending distance and bounds.
struct ReachabilityError : Error {
    double distance_mm;
    double lo_mm;
    double hi_mm;
    ReachabilityError(const std::string& msg, double distance, double lo, double hi)
        : Error(msg), distance_mm(distance), lo_mm(lo), hi_mm(hi) {}
};

struct LimitError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct InfeasibleError : Error {
    using Error::Error;
};

struct NoSupportError : Error {
    using Error::Error;
};

inline double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

} // namespace croc
