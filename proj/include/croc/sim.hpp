#pragma once

#include <croc/gait.hpp>

#include <optional>
#include <vector>

namespace croc {

// Per-segment masses in kilograms. Centroids sit at the midpoints of the
// FK-posed segments.
struct Masses {
    double head_kg = 0.4;
    std::array<double, 5> torso_kg{0.3, 0.3, 0.3, 0.3, 0.3};
    std::array<double, 4> leg_kg{0.15, 0.15, 0.15, 0.15};
    double tail_driven_kg = 0.35;
    double tail_tip_kg = 0.1;

    double total() const;
};

// Attachment layout on the trunk. Hind legs and the tail hang off the pelvis
// (the trunk chain base); front legs ride the trunk's head-end link, so they
// move with trunk bending. Left-side mounts are stored; the right side is the
// sagittal mirror.
struct Mounts {
    double lateral_mm = 45.0;   // hip/shoulder half-width
    double hind_x_mm = 0.0;     // hind hip x in the body frame
    double front_x_mm = 0.0;    // shoulder x in the head-end link frame
    double tail_x_mm = -20.0;   // tail root x in the body frame
};

struct RobotModel {
    RobotGeometry geometry;
    Masses masses;
    Mounts mounts;
};

// Body frame: x forward, y left, z up; ground is the z = 0 plane.
struct BodyPose {
    double x = 0.0;        // mm
    double y = 0.0;        // mm
    double heading = 0.0;  // rad about +z
    double height = 0.0;   // mm, body origin above ground

    Vec3 to_world(const Vec3& body_point) const;
    Vec3 to_body(const Vec3& world_point) const;
};

struct JointState {
    std::array<LegAngles, 4> legs{};  // canonical (left-side) angles
    SpineAngles spine{};
    double tail_yaw = 0.0;
    double tail_pitch = 0.0;
};

// Everything the stability and contact logic needs from one posed instant.
struct PosedRobot {
    std::array<Vec3, 4> foot_body{};
    std::array<Vec3, 4> foot_world{};
    Vec3 tail_tip_world{};
    Vec3 head_base_world{};
    Vec3 head_end_world{};
    std::vector<std::pair<Vec3, double>> mass_points;  // world position, kg
};

PosedRobot pose_robot(const RobotModel& model, const BodyPose& pose, const JointState& joints);

struct WorldState {
    double t = 0.0;
    BodyPose pose;
    JointState joints;
    std::array<bool, 4> grounded{};      // actual foot near the ground plane
    std::array<bool, 4> slipping{};      // commanded position unreachable or not held
    std::array<bool, 4> anchored{};      // stance foot holding a world grip point
    std::array<Vec2, 4> anchor_world{};  // valid where anchored
    std::array<Vec3, 4> foot_world{};    // actual foot positions
    bool tail_contact = false;
    Vec2 tail_contact_world{};
    bool fallen = false;
    double displacement_mm = 0.0;  // cumulative advance along the heading
};

struct SimParams {
    double dt = 0.02;                 // s
    double duration_s = 8.0;
    double contact_tol_mm = 5.0;      // z at or below this counts as grounded
    double slip_tol_mm = 2.0;         // anchor residual above which a foot slips
    double drag_weight = 20.0;        // fit weight of a grounded foot fighting its command
    double tilt_coeff_per_mm = 0.05;  // stride fraction lost per mm of negative margin
    double tilt_dip_mm_per_mm = 0.5;  // body-height drop per mm of negative margin
    double rise_rate_mm_s = 80.0;     // max body-height recovery speed after a dip

    void validate() const;
};

// Mass-weighted centroid; the building block of center_of_gravity.
Vec3 weighted_centroid(const std::vector<std::pair<Vec3, double>>& points);

Vec3 center_of_gravity(const RobotModel& model, const BodyPose& pose, const JointState& joints);

// Convex hull (counter-clockwise) of the reliable ground contacts. Degenerate
// sets collapse to a point or a segment. Throws NoSupportError when empty.
std::vector<Vec2> support_polygon(const WorldState& state);

// Signed distance from the cog's ground projection to the support boundary:
// positive inside the polygon, negative outside. A two-point support measures
// perpendicular distance off the support line, a single point the radial
// distance; both count as negative.
double stability_margin(const Vec3& cog, const std::vector<Vec2>& polygon);

// Who to blame for a locked joint.
enum class FaultJoint { rotational, pitching };

struct FaultSpec {
    LegId leg = LegId::LQ;
    FaultJoint joint = FaultJoint::rotational;
};

// Replaces the faulted joint's command with its neutral-posture value. All
// other commands pass through untouched.
CoordinationFrame apply_fault(const CoordinationFrame& frame, const FaultSpec& fault,
                              const LegAngles& neutral);

// Advances the quasi-static world by one tick: the body pose follows from a
// weighted rigid fit that pulls each gripping stance foot back onto the spot
// it held last tick (skidding feet resist instead of propelling), a negative
// stability margin costs forward advance and body height proportionally, and
// every grip then renews at the executed foot position, so unexecuted sweep
// is shed as slip rather than repaid later.
WorldState step_quasi_static(const RobotModel& model, const WorldState& state,
                             const CoordinationFrame& frame, const SimParams& params);

struct RunResult {
    std::vector<double> t;
    std::vector<double> displacement_mm;
    std::vector<double> cog_height_mm;
    std::vector<double> margin_mm;
    double total_displacement_m = 0.0;
    double min_margin_mm = 0.0;
    double cog_amplitude_mm = 0.0;
    bool fallen = false;
    WorldState final_state;
};

// Fixed-step crawl run. A fault, when present, is applied to every frame.
// Losing every contact records the fallen flag and ends the run early.
RunResult run_scenario(const RobotModel& model, const GaitParams& gait,
                       const std::optional<FaultSpec>& fault, const SimParams& params);

enum class Posture { crawl, stand };

// Highest point of the head segment above ground for the requested posture.
double reach_height(const RobotModel& model, const GaitParams& gait, const StandParams& stand,
                    Posture posture);

// Stand-sequence playback sampled at dt. The body shuffles a little as the
// feet reposition but does not walk; the series tracks cog height and margin,
// and the reach fields report the head height in each end posture.
struct StandRun {
    RunResult run;
    double crawl_reach_mm = 0.0;
    double stand_reach_mm = 0.0;
};

StandRun run_stand(const RobotModel& model, const GaitParams& gait, const StandParams& stand,
                   double duration_s, double dt);

} // namespace croc
