#include <croc/tail.hpp>

#include <cmath>

namespace croc {

void TailGeometry::validate() const {
    if (joints < 1) throw InvalidParameterError("tail joint count must be positive");
    if (pin_spacing <= 0.0 || clearance <= 0.0 || segment <= 0.0 || servo_radius <= 0.0 ||
        underdrive < 0.0) {
        throw InvalidParameterError("tail dimensions must be positive");
    }
    if (cable_length <= driven_length()) {
        throw InvalidParameterError("cable length must exceed the driven section");
    }
    if (theta_max <= 0.0) throw InvalidParameterError("tail bend bound must be positive");
}

namespace {

void check_theta(const TailGeometry& geom, double theta) {
    if (std::abs(theta) > geom.theta_max + 1e-12) {
        throw LimitError("tail bend " + std::to_string(theta) + " rad exceeds bound " +
                         std::to_string(geom.theta_max));
    }
}

} // namespace

CableDeltas cable_deltas_exact(const TailGeometry& geom, double theta) {
    check_theta(geom, theta);
    const double n = static_cast<double>(geom.joints);
    const double per_joint = geom.pin_spacing * std::sin(theta / (2.0 * n));
    const double s4 = std::sin(theta / (4.0 * n));
    const double gap_term = 2.0 * geom.clearance * s4 * s4;
    CableDeltas out;
    out.bend_side_mm = -(per_joint + gap_term);
    out.off_side_mm = per_joint - gap_term;
    return out;
}

CableDeltas cable_deltas_approx(const TailGeometry& geom, double theta) {
    check_theta(geom, theta);
    const double n = static_cast<double>(geom.joints);
    const double per_joint = geom.pin_spacing * std::sin(theta / (2.0 * n));
    CableDeltas out;
    out.bend_side_mm = -per_joint;
    out.off_side_mm = per_joint;
    return out;
}

double servo_angle_deg(const TailGeometry& geom, double theta) {
    check_theta(geom, theta);
    const double n = static_cast<double>(geom.joints);
    return (180.0 / (3.14159265358979323846 * geom.servo_radius)) * n * geom.pin_spacing *
           std::sin(theta / (2.0 * n));
}

std::vector<Vec2> tail_joint_positions(const TailGeometry& geom, double theta) {
    check_theta(geom, theta);
    const double n = static_cast<double>(geom.joints);
    const double pitch = geom.segment + geom.clearance;

    std::vector<Vec2> joints;
    joints.reserve(static_cast<std::size_t>(geom.joints));
    Vec2 p(pitch / 2.0, 0.0);
    joints.push_back(p);
    for (int i = 1; i < geom.joints; ++i) {
        const double heading = static_cast<double>(i) * theta / n;
        p += pitch * Vec2(std::cos(heading), std::sin(heading));
        joints.push_back(p);
    }
    return joints;
}

double tail_tip_heading(const TailGeometry& geom, double theta) {
    const double n = static_cast<double>(geom.joints);
    return theta * (n - 1.0) / n;
}

Vec2 tail_tip(const TailGeometry& geom, double theta) {
    const auto joints = tail_joint_positions(geom, theta);
    const double heading = tail_tip_heading(geom, theta);
    return joints.back() + geom.underdrive * Vec2(std::cos(heading), std::sin(heading));
}

} // namespace croc
