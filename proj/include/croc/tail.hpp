#pragma once

#include <croc/types.hpp>

#include <vector>

namespace croc {

// Cable-driven flexible tail. A single servo of radius r winds two antagonist
// cables; the driven section is a stack of identical vertebra pairs that bends
// with constant curvature in its plane, followed by a rigid tip extension.
struct TailGeometry {
    int joints = 6;               // N, driven articulations
    double pin_spacing = 20.0;    // d (mm), cable guide half-pitch
    double clearance = 4.0;       // h (mm), vertebra gap
    double segment = 40.0;        // H (mm), vertebra body length
    double servo_radius = 10.0;   // r (mm)
    double cable_length = 300.0;  // nominal cable length (mm), > joints * (H + h)
    double underdrive = 120.0;    // passive tip extension (mm)
    double theta_max = 1.5707963267948966;  // |total bend| bound (rad)

    double driven_length() const { return joints * (segment + clearance); }
    double total_length() const { return driven_length() + underdrive; }

    void validate() const;
};

// Length changes of the two cables for a total bend theta. For theta >= 0 the
// bend-side cord shortens (delta <= 0) and the off-side cord pays it out
// (delta >= 0); a negative bend mirrors the roles.
struct CableDeltas {
    double bend_side_mm = 0.0;
    double off_side_mm = 0.0;
};

CableDeltas cable_deltas_exact(const TailGeometry& geom, double theta);
CableDeltas cable_deltas_approx(const TailGeometry& geom, double theta);

// Servo rotation in degrees that produces bend theta.
double servo_angle_deg(const TailGeometry& geom, double theta);

// Planar positions of the driven articulations for bend theta. The first joint
// sits half a segment pitch out along the initial heading; each later segment
// is turned by a further theta / N.
std::vector<Vec2> tail_joint_positions(const TailGeometry& geom, double theta);

// End of the rigid tip extension, tangent to the last driven segment.
Vec2 tail_tip(const TailGeometry& geom, double theta);

// Heading of the tip extension relative to the tail base (rad).
double tail_tip_heading(const TailGeometry& geom, double theta);

} // namespace croc
