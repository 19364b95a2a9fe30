#pragma once

#include <croc/dh.hpp>

#include <array>

namespace croc {

// 5-joint articulated trunk. Joints 1, 3, 5 bend laterally (yaw), joints 2 and
// 4 sagittally (pitch); the alternating link twists realise that pattern.
// Chain frame: x runs from the pelvis toward the head, +y is the robot's right
// side, +z points groundward. Positive yaw bends the head to the right;
// positive pitch raises it.
struct SpineGeometry {
    std::array<double, 5> links{50.5, 60.5, 60.5, 60.5, 60.5};  // a_{i-1} per row (mm)
    std::array<double, 5> twists{0.0, -1.5707963267948966, 1.5707963267948966,
                                 -1.5707963267948966, 1.5707963267948966};
    std::array<std::pair<double, double>, 5> limits{{
        {-0.35, 0.35},
        {-0.8, 0.8},
        {-0.35, 0.35},
        {-0.8, 0.8},
        {-0.35, 0.35},
    }};
    static constexpr std::array<int, 3> yaw_joints{0, 2, 4};
    static constexpr std::array<int, 2> pitch_joints{1, 3};

    KinematicChain chain() const;
    double total_length() const;
};

using SpineAngles = std::array<double, 5>;

// Aggregate bend request, split equally across the joints of each group.
struct SpineCommand {
    double yaw_total = 0.0;
    double pitch_total = 0.0;
};

// Head-end pose from the chain product.
Transform4 spine_fk(const SpineGeometry& geom, const SpineAngles& q);

SpineAngles command_to_angles(const SpineGeometry& geom, const SpineCommand& cmd);

struct SpineIkResult {
    SpineAngles angles{};
    bool converged = false;
    double position_error_mm = 0.0;
    int iterations = 0;
};

// Damped least squares on the numeric Jacobian, with a deterministic fan of
// restart postures when the seeded descent wedges against the joint limits.
// Non-convergence is reported in the result, not thrown; an unreachable
// target (outside the length ball) is.
SpineIkResult spine_ik(const SpineGeometry& geom, const Vec3& target,
                       const SpineAngles& seed = {});

} // namespace croc
