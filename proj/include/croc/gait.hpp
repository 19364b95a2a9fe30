#pragma once

#include <croc/leg.hpp>
#include <croc/spine.hpp>
#include <croc/tail.hpp>

#include <array>
#include <vector>

namespace croc {

// Leg naming: Q = front (quarter), H = hind; L/R seen from above, x forward.
enum class LegId : int { LQ = 0, RQ = 1, LH = 2, RH = 3 };
constexpr std::array<LegId, 4> kAllLegs{LegId::LQ, LegId::RQ, LegId::LH, LegId::RH};
inline constexpr int leg_index(LegId id) { return static_cast<int>(id); }
inline constexpr bool is_right(LegId id) { return id == LegId::RQ || id == LegId::RH; }
inline constexpr bool is_front(LegId id) { return id == LegId::LQ || id == LegId::RQ; }
const char* leg_name(LegId id);

// Shared geometric description of the platform: one leg geometry reused by all
// four legs (right side mirrored), the trunk chain, the tail, and the rigid
// head segment that extends past the trunk's head end.
struct RobotGeometry {
    LegGeometry leg;
    SpineGeometry spine;
    TailGeometry tail;
    double head_length = 120.0;  // mm
};

// Diagonal crawl parameters. Offsets are phase fractions of the period; the
// default pairs LQ with RH and RQ with LH half a cycle apart.
struct GaitParams {
    double period_s = 4.0;
    double duty = 0.6;                      // stance fraction beta
    std::array<double, 4> offsets{0.0, 0.5, 0.5, 0.0};  // by LegId order
    double step_length = 60.0;              // mm, fore-aft sweep of a stance foot
    double step_height = 25.0;              // mm, swing apex lift
    double stance_out = 130.0;              // mm, lateral foot distance in the leg frame
    double stance_down = 110.0;             // mm, foot depth below the hip plane
    double spine_yaw_amp = 0.26;            // rad, trunk lateral sway amplitude
    double spine_pitch_amp = 0.0;           // rad, zero in crawl
    double tail_yaw_amp = 0.35;             // rad, tail sway amplitude (antiphase)
    // Common phase of the sway signals relative to the footfalls. A quarter
    // turn means the trunk is fully bent at each diagonal touchdown and
    // straightens through the stance, which is what turns the sway into
    // forward stride.
    double phase_shift = 1.5707963267948966;
    bool tail_drag = true;                  // tail tip held on the ground

    void validate() const;
};

struct LimbPhaseEntry {
    bool stance = true;
    double u = 0.0;  // progress within the current stance or swing window, [0, 1)
};

struct LimbPhase {
    std::array<LimbPhaseEntry, 4> legs{};
};

LimbPhase limb_phase(const GaitParams& params, double t);

// Foot target in the canonical (left-side) leg frame: x out, y forward, z down.
// Stance sweeps linearly backward at constant depth; swing returns along a
// semi-elliptic arc of height step_height. C0-continuous at both junctions.
Vec3 foot_trajectory(const GaitParams& params, LegId leg, const LimbPhase& phase);

// Sway channels. Trunk and tail run a common sinusoid with the tail half a turn
// out of phase; pitch channels stay zero in crawl.
struct SpineTailSignals {
    double spine_yaw = 0.0;
    double spine_pitch = 0.0;
    double tail_yaw = 0.0;
    double tail_pitch = 0.0;
};

SpineTailSignals spine_tail_signals(const GaitParams& params, double t);

// One coordination tick: per-leg stance flags and canonical foot targets with
// the derived joint commands, plus trunk and tail commands. Joint commands are
// canonical too; the right side is mirrored where the legs attach.
struct CoordinationFrame {
    double t = 0.0;
    std::array<bool, 4> stance{true, true, true, true};
    std::array<Vec3, 4> foot_targets{};
    std::array<LegAngles, 4> leg_cmds{};
    std::array<bool, 4> clipped{};
    std::array<bool, 4> yaw_singular{};
    SpineCommand spine_cmd{};
    SpineAngles spine_angles{};
    double tail_yaw = 0.0;        // total bend theta (rad)
    double tail_servo_deg = 0.0;  // servo rotation realising the bend
    double tail_pitch = 0.0;      // mount pitch; positive tips the tail down
};

// Assembles and validates the frame at time t. Foot targets that leave the leg
// workspace are clipped radially to its boundary and flagged.
CoordinationFrame coordination_frame(const RobotGeometry& geom, const GaitParams& params,
                                     double t);

// Lateral body-wave midline used in the swimming mode: y(x, t) with a
// quadratically growing envelope. x runs along the body in [0, body_length].
struct SwimWaveParams {
    double c1 = 0.027;            // linear envelope coefficient (1/1)
    double c2 = 0.30;             // quadratic envelope coefficient (1/mm)
    double wave_number = 0.023;   // k (rad/mm)
    double omega = 1.5707963267948966;  // rad/s
    double body_length = 800.0;   // mm

    void validate() const;
};

double swim_envelope(const SwimWaveParams& params, double x);
double swim_midline(const SwimWaveParams& params, double x, double t);

// Crawl-to-stand reconfiguration: timed keyframes blended with smoothstep.
// The final posture holds the body on the two hind feet plus the tail strut.
struct StandParams {
    Vec3 hind_target{160.0, 90.0, 110.0};   // canonical leg frame
    Vec3 front_fold{170.0, -60.0, 60.0};    // canonical, airborne
    double pitch_total = 1.6;               // rad, trunk pitch-up at full stand

    void validate() const;
};

struct StandKeyframe {
    double t = 0.0;
    CoordinationFrame frame;
};

struct StandSequence {
    std::vector<StandKeyframe> keyframes;
    double duration_s = 0.0;
    RobotGeometry geometry;  // kept so samples can re-derive joint commands
};

// Throws InfeasibleError when a keyframe posture cannot be reached within the
// leg or spine limits.
StandSequence stand_sequence(const RobotGeometry& geom, const GaitParams& gait,
                             const StandParams& stand, double duration_s);

// Smoothstep interpolation between the bracketing keyframes. Stance flags
// combine conservatively: a foot counts as grounded only when both ends agree.
CoordinationFrame sample_stand(const StandSequence& seq, double t);

} // namespace croc
