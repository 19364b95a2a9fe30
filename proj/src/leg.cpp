#include <croc/leg.hpp>

#include <cmath>

namespace croc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Clamp an arccos argument that drifted past [-1, 1] by rounding only.
double safe_acos(double u) {
    constexpr double slack = 1e-9;
    if (u > 1.0) {
        if (u > 1.0 + slack) throw InvalidParameterError("arccos argument out of range");
        u = 1.0;
    } else if (u < -1.0) {
        if (u < -1.0 - slack) throw InvalidParameterError("arccos argument out of range");
        u = -1.0;
    }
    return std::acos(u);
}

} // namespace

KinematicChain LegGeometry::chain() const {
    KinematicChain c;
    c.rows = {
        JointRow{0.0, 0.0, hip_offset, 0.0},
        JointRow{0.0, 0.0, 0.0, kPi / 2.0},
        JointRow{0.0, 0.0, femur, 0.0},
        JointRow{0.0, 0.0, tibia, 0.0},
    };
    c.joint_limits.assign(limits.begin(), limits.end());
    return c;
}

LegFk leg_fk(const LegGeometry& geom, const LegAngles& q) {
    const double c1 = std::cos(q.hip_yaw), s1 = std::sin(q.hip_yaw);
    const double c2 = std::cos(q.hip_pitch), s2 = std::sin(q.hip_pitch);
    const double c23 = std::cos(q.hip_pitch + q.knee_pitch);
    const double s23 = std::sin(q.hip_pitch + q.knee_pitch);
    const double c234 = std::cos(q.hip_pitch + q.knee_pitch + q.ankle_pitch);
    const double s234 = std::sin(q.hip_pitch + q.knee_pitch + q.ankle_pitch);

    const double radial = geom.femur * c2 + geom.tibia * c23;

    LegFk out;
    out.position = Vec3(geom.hip_offset + c1 * radial,
                        s1 * radial,
                        geom.femur * s2 + geom.tibia * s23);

    // Orientation columns follow from the chain structure: the hip-yaw axis
    // stays the third column after joint 1, the remaining joints are coplanar.
    Mat4& m = out.pose.m;
    m.setIdentity();
    m(0, 0) = c1 * c234;  m(0, 1) = -c1 * s234; m(0, 2) = s1;
    m(1, 0) = s1 * c234;  m(1, 1) = -s1 * s234; m(1, 2) = -c1;
    m(2, 0) = s234;       m(2, 1) = c234;       m(2, 2) = 0.0;
    m.block<3, 1>(0, 3) = out.position;
    return out;
}

bool workspace_contains(const LegGeometry& geom, const Vec3& p) {
    const double dx = p.x() - geom.hip_offset;
    const double ac = std::sqrt(dx * dx + p.y() * p.y() + p.z() * p.z());
    return ac >= geom.min_radial() && ac <= geom.max_radial();
}

LegIkResult leg_ik(const LegGeometry& geom, const Vec3& target, double ankle_pitch) {
    const double a0 = geom.hip_offset;
    const double a2 = geom.femur;
    const double a3 = geom.tibia;

    const double dx = target.x() - a0;
    const double r_xy = std::hypot(dx, target.y());
    const double ac2 = dx * dx + target.y() * target.y() + target.z() * target.z();
    const double ac = std::sqrt(ac2);

    const double lo = geom.min_radial();
    const double hi = geom.max_radial();
    if (ac < lo || ac > hi) {
        throw ReachabilityError("foot target at distance " + std::to_string(ac) +
                                    " mm outside [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]",
                                ac, lo, hi);
    }

    LegIkResult out;

    double hip_yaw = 0.0;
    if (r_xy < 1e-12) {
        out.hip_yaw_singular = true;  // target on the hip-yaw axis; angle free
    } else {
        hip_yaw = std::atan2(target.y(), dx);
    }

    // Triangle hip-knee-foot: interior knee angle and the two hip-side angles.
    const double knee_interior = safe_acos((a2 * a2 + a3 * a3 - ac2) / (2.0 * a2 * a3));
    const double hip_to_foot = safe_acos((a2 * a2 - a3 * a3 + ac2) / (2.0 * a2 * ac));
    const double axis_tilt = std::atan2(r_xy, target.z());  // from the +z axis

    const double knee_pos = kPi - knee_interior;

    LegAngles a;
    a.hip_yaw = hip_yaw;
    a.hip_pitch = kPi / 2.0 - axis_tilt - hip_to_foot;
    a.knee_pitch = knee_pos;
    a.ankle_pitch = ankle_pitch;
    out.knee_positive.angles = a;

    LegAngles b = a;
    b.hip_pitch = kPi / 2.0 - axis_tilt + hip_to_foot;
    b.knee_pitch = -knee_pos;
    out.knee_negative.angles = b;

    auto in_limits = [&geom](const LegAngles& q) {
        const auto arr = q.as_array();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (arr[i] < geom.limits[i].first || arr[i] > geom.limits[i].second) return false;
        }
        return true;
    };
    out.knee_positive.within_limits = in_limits(out.knee_positive.angles);
    out.knee_negative.within_limits = in_limits(out.knee_negative.angles);
    return out;
}

} // namespace croc
