#pragma once

#include <croc/dh.hpp>

#include <array>

namespace croc {

// 4-DOF leg: hip yaw, hip pitch, knee pitch, ankle pitch.
// The chain frame has x pointing out along the straightened leg, z toward the
// ground. Right-side legs reuse this geometry mirrored (negate y and hip yaw).
struct LegGeometry {
    double hip_offset = 70.0;  // base to hip-yaw axis (mm)
    double femur = 86.0;       // hip to knee (mm)
    double tibia = 89.0;       // knee to foot point (mm)
    // [lo, hi] per joint, radians. The knee interval stays positive so the
    // analytic IK lands on a single branch for in-limit postures.
    std::array<std::pair<double, double>, 4> limits{{
        {-0.8, 0.8},
        {-1.0, 0.5},
        {0.05, 2.0},
        {-1.6, 1.6},
    }};

    KinematicChain chain() const;

    double min_radial() const { return std::abs(femur - tibia); }
    double max_radial() const { return femur + tibia; }
};

struct LegAngles {
    double hip_yaw = 0.0;
    double hip_pitch = 0.0;
    double knee_pitch = 0.0;
    double ankle_pitch = 0.0;

    std::array<double, 4> as_array() const { return {hip_yaw, hip_pitch, knee_pitch, ankle_pitch}; }
};

struct LegFk {
    Vec3 position;    // foot point in the chain frame (mm)
    Transform4 pose;  // full foot pose
};

// Closed-form FK; agrees with the D-H chain product to rounding.
LegFk leg_fk(const LegGeometry& geom, const LegAngles& q);

struct LegIkSolution {
    LegAngles angles;
    bool within_limits = false;
};

struct LegIkResult {
    LegIkSolution knee_positive;  // geometric construction branch
    LegIkSolution knee_negative;  // mirrored knee branch
    bool hip_yaw_singular = false;  // target on the hip-yaw axis; hip_yaw pinned to 0
};

// Geometric IK for a foot point. ankle_pitch is a free parameter passed through
// to both solutions. Throws ReachabilityError when the hip-to-foot distance
// falls outside [|femur - tibia|, femur + tibia].
LegIkResult leg_ik(const LegGeometry& geom, const Vec3& target, double ankle_pitch = 0.0);

// True iff the hip-to-foot distance of p lies inside the reachable annulus.
bool workspace_contains(const LegGeometry& geom, const Vec3& p);

// Ankle angle that keeps the foot segment parallel to the stance plane.
inline double ankle_for_flat_foot(double hip_pitch, double knee_pitch) {
    return -(hip_pitch + knee_pitch);
}

// Mirror helpers for right-side legs.
inline Vec3 mirror_target(const Vec3& p) { return Vec3(p.x(), -p.y(), p.z()); }
inline LegAngles mirror_angles(const LegAngles& q) {
    return {-q.hip_yaw, q.hip_pitch, q.knee_pitch, q.ankle_pitch};
}

} // namespace croc
