#include <croc/gait.hpp>

#include <algorithm>
#include <cmath>

namespace croc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double frac(double x) { return x - std::floor(x); }

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

// Clip a target radially into the leg's reachable annulus, about the hip-yaw
// axis point. Returns true when clipping was applied.
bool clip_to_workspace(const LegGeometry& geom, Vec3& p) {
    const Vec3 hip(geom.hip_offset, 0.0, 0.0);
    const Vec3 v = p - hip;
    const double ac = v.norm();
    constexpr double margin = 1e-6;
    const double lo = geom.min_radial() + margin;
    const double hi = geom.max_radial() - margin;
    if (ac >= lo && ac <= hi) return false;
    if (ac < 1e-12) {
        p = hip + Vec3(lo, 0.0, 0.0);
        return true;
    }
    p = hip + v * (std::clamp(ac, lo, hi) / ac);
    return true;
}

// Shared frame assembly: solves the leg commands for the given targets and
// routes the trunk and tail commands through their validators.
CoordinationFrame assemble_frame(const RobotGeometry& geom, double t,
                                 const std::array<bool, 4>& stance,
                                 std::array<Vec3, 4> targets, const SpineCommand& spine_cmd,
                                 double tail_yaw, double tail_pitch) {
    CoordinationFrame f;
    f.t = t;
    f.stance = stance;
    for (int i = 0; i < 4; ++i) {
        f.clipped[static_cast<std::size_t>(i)] =
            clip_to_workspace(geom.leg, targets[static_cast<std::size_t>(i)]);
        f.foot_targets[static_cast<std::size_t>(i)] = targets[static_cast<std::size_t>(i)];
        const LegIkResult ik = leg_ik(geom.leg, targets[static_cast<std::size_t>(i)]);
        f.leg_cmds[static_cast<std::size_t>(i)] = ik.knee_positive.angles;
        f.yaw_singular[static_cast<std::size_t>(i)] = ik.hip_yaw_singular;
    }
    f.spine_cmd = spine_cmd;
    f.spine_angles = command_to_angles(geom.spine, spine_cmd);
    f.tail_yaw = tail_yaw;
    f.tail_servo_deg = servo_angle_deg(geom.tail, tail_yaw);
    f.tail_pitch = tail_pitch;
    return f;
}

// Mount pitch that puts the tip of the bent tail exactly on the ground when
// the tail root sits depth_mm above it. The bend shortens the tip's in-plane
// reach, so the pitch depends on the current tail_yaw.
double strut_pitch(const RobotGeometry& geom, double depth_mm, double tail_yaw) {
    const double reach = tail_tip(geom.tail, tail_yaw).x();
    if (depth_mm > reach) {
        throw InfeasibleError("tail strut cannot reach the ground from " +
                              std::to_string(depth_mm) + " mm with a " + std::to_string(reach) +
                              " mm tail reach");
    }
    return std::asin(depth_mm / reach);
}

} // namespace

const char* leg_name(LegId id) {
    switch (id) {
        case LegId::LQ: return "LQ";
        case LegId::RQ: return "RQ";
        case LegId::LH: return "LH";
        case LegId::RH: return "RH";
    }
    return "?";
}

void GaitParams::validate() const {
    if (period_s <= 0.0) throw InvalidParameterError("gait period must be positive");
    if (duty <= 0.0 || duty >= 1.0) throw InvalidParameterError("duty factor must be in (0, 1)");
    if (step_length < 0.0 || step_height < 0.0) {
        throw InvalidParameterError("step dimensions must be non-negative");
    }
    if (stance_out <= 0.0 || stance_down <= 0.0) {
        throw InvalidParameterError("stance posture must be positive");
    }
    for (double o : offsets) {
        if (o < 0.0 || o >= 1.0) throw InvalidParameterError("phase offsets must be in [0, 1)");
    }
}

LimbPhase limb_phase(const GaitParams& params, double t) {
    params.validate();
    LimbPhase out;
    for (int i = 0; i < 4; ++i) {
        const double x = frac(t / params.period_s - params.offsets[static_cast<std::size_t>(i)]);
        LimbPhaseEntry& e = out.legs[static_cast<std::size_t>(i)];
        e.stance = x < params.duty;
        e.u = e.stance ? x / params.duty : (x - params.duty) / (1.0 - params.duty);
    }
    return out;
}

Vec3 foot_trajectory(const GaitParams& params, LegId leg, const LimbPhase& phase) {
    const LimbPhaseEntry& e = phase.legs[static_cast<std::size_t>(leg_index(leg))];
    const double half = params.step_length / 2.0;
    if (e.stance) {
        return Vec3(params.stance_out, half - params.step_length * e.u, params.stance_down);
    }
    return Vec3(params.stance_out, -half * std::cos(kPi * e.u),
                params.stance_down - params.step_height * std::sin(kPi * e.u));
}

SpineTailSignals spine_tail_signals(const GaitParams& params, double t) {
    const double w = 2.0 * kPi / params.period_s;
    SpineTailSignals s;
    s.spine_yaw = params.spine_yaw_amp * std::sin(w * t + params.phase_shift);
    s.spine_pitch = params.spine_pitch_amp * std::sin(w * t + params.phase_shift);
    s.tail_yaw = params.tail_yaw_amp * std::sin(w * t + params.phase_shift + kPi);
    s.tail_pitch = 0.0;
    return s;
}

CoordinationFrame coordination_frame(const RobotGeometry& geom, const GaitParams& params,
                                     double t) {
    params.validate();
    const LimbPhase phase = limb_phase(params, t);
    const SpineTailSignals sig = spine_tail_signals(params, t);

    std::array<bool, 4> stance{};
    std::array<Vec3, 4> targets{};
    for (LegId leg : kAllLegs) {
        const auto i = static_cast<std::size_t>(leg_index(leg));
        stance[i] = phase.legs[i].stance;
        targets[i] = foot_trajectory(params, leg, phase);
    }

    const double tail_pitch =
        params.tail_drag ? strut_pitch(geom, params.stance_down, sig.tail_yaw) : sig.tail_pitch;
    return assemble_frame(geom, t, stance, targets,
                          SpineCommand{sig.spine_yaw, sig.spine_pitch}, sig.tail_yaw,
                          tail_pitch);
}

void SwimWaveParams::validate() const {
    if (body_length <= 0.0) throw InvalidParameterError("body length must be positive");
    if (omega <= 0.0) throw InvalidParameterError("wave frequency must be positive");
}

double swim_envelope(const SwimWaveParams& params, double x) {
    return params.c1 * x + params.c2 * x * x;
}

double swim_midline(const SwimWaveParams& params, double x, double t) {
    params.validate();
    if (x < 0.0 || x > params.body_length) {
        throw DomainError("midline coordinate " + std::to_string(x) + " outside [0, " +
                          std::to_string(params.body_length) + "]");
    }
    // Reduce t into one period before scaling by omega: fmod is exact, so
    // shifting t by a whole period cannot perturb the phase.
    const double tau = std::fmod(t, 2.0 * kPi / params.omega);
    return swim_envelope(params, x) * std::sin(params.wave_number * x + params.omega * tau);
}

void StandParams::validate() const {
    if (pitch_total < 0.0) throw InvalidParameterError("stand pitch must be non-negative");
}

StandSequence stand_sequence(const RobotGeometry& geom, const GaitParams& gait,
                             const StandParams& stand, double duration_s) {
    gait.validate();
    stand.validate();
    if (duration_s <= 0.0) throw InvalidParameterError("stand duration must be positive");

    const Vec3 neutral(gait.stance_out, 0.0, gait.stance_down);
    const Vec3 hind_mid = 0.5 * (neutral + stand.hind_target);

    struct Key {
        double fraction;
        std::array<bool, 4> stance;
        std::array<Vec3, 4> targets;
        double pitch_frac;
        double strut_depth;
    };
    const std::array<Key, 4> keys{{
        {0.00, {true, true, true, true}, {neutral, neutral, neutral, neutral}, 0.0,
         gait.stance_down},
        {0.25, {false, false, true, true}, {stand.front_fold, stand.front_fold, neutral, neutral},
         0.3, gait.stance_down},
        {0.55, {false, false, true, true}, {stand.front_fold, stand.front_fold, hind_mid, hind_mid},
         0.7, hind_mid.z()},
        {1.00, {false, false, true, true},
         {stand.front_fold, stand.front_fold, stand.hind_target, stand.hind_target}, 1.0,
         stand.hind_target.z()},
    }};

    StandSequence seq;
    seq.duration_s = duration_s;
    seq.geometry = geom;
    for (const Key& k : keys) {
        try {
            CoordinationFrame f = assemble_frame(
                geom, k.fraction * duration_s, k.stance, k.targets,
                SpineCommand{0.0, k.pitch_frac * stand.pitch_total}, 0.0,
                strut_pitch(geom, k.strut_depth, 0.0));
            for (int i = 0; i < 4; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                if (f.clipped[idx]) {
                    throw InfeasibleError(std::string("stand keyframe target for ") +
                                          leg_name(static_cast<LegId>(i)) +
                                          " lies outside the leg workspace");
                }
                if (k.stance[idx] && !leg_ik(geom.leg, k.targets[idx]).knee_positive.within_limits) {
                    throw InfeasibleError(std::string("stand keyframe target for ") +
                                          leg_name(static_cast<LegId>(i)) +
                                          " violates the leg joint limits");
                }
            }
            seq.keyframes.push_back(StandKeyframe{k.fraction * duration_s, std::move(f)});
        } catch (const ReachabilityError& e) {
            throw InfeasibleError(std::string("stand keyframe unreachable: ") + e.what());
        } catch (const LimitError& e) {
            throw InfeasibleError(std::string("stand keyframe outside limits: ") + e.what());
        }
    }
    return seq;
}

CoordinationFrame sample_stand(const StandSequence& seq, double t) {
    if (seq.keyframes.empty()) throw InvalidParameterError("empty stand sequence");
    const auto& keys = seq.keyframes;
    if (t <= keys.front().t) return keys.front().frame;
    if (t >= keys.back().t) return keys.back().frame;

    std::size_t hi = 1;
    while (hi < keys.size() && keys[hi].t < t) ++hi;
    const StandKeyframe& a = keys[hi - 1];
    const StandKeyframe& b = keys[hi];
    const double s = smoothstep((t - a.t) / (b.t - a.t));

    // Re-derive the joint commands from interpolated targets so commands and
    // targets stay consistent.
    std::array<bool, 4> stance{};
    std::array<Vec3, 4> targets{};
    for (std::size_t i = 0; i < 4; ++i) {
        stance[i] = a.frame.stance[i] && b.frame.stance[i];
        targets[i] = (1.0 - s) * a.frame.foot_targets[i] + s * b.frame.foot_targets[i];
    }
    const SpineCommand cmd{
        (1.0 - s) * a.frame.spine_cmd.yaw_total + s * b.frame.spine_cmd.yaw_total,
        (1.0 - s) * a.frame.spine_cmd.pitch_total + s * b.frame.spine_cmd.pitch_total};
    const double tail_yaw = (1.0 - s) * a.frame.tail_yaw + s * b.frame.tail_yaw;
    const double tail_pitch = (1.0 - s) * a.frame.tail_pitch + s * b.frame.tail_pitch;

    return assemble_frame(seq.geometry, t, stance, targets, cmd, tail_yaw, tail_pitch);
}

} // namespace croc
