#include <croc/sim.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace croc {

namespace {

constexpr double kPi = 3.14159265358979323846;

Transform4 make_transform(const Mat3& r, const Vec3& t) {
    Transform4 out;
    out.m.block<3, 3>(0, 0) = r;
    out.m.block<3, 1>(0, 3) = t;
    return out;
}

Transform4 translate(double x, double y, double z) {
    return make_transform(Mat3::Identity(), Vec3(x, y, z));
}

Transform4 rot_x(double a) {
    Mat3 r;
    r << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
    return make_transform(r, Vec3::Zero());
}

Transform4 rot_y(double a) {
    Mat3 r;
    r << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
    return make_transform(r, Vec3::Zero());
}

Transform4 rot_z(double a) {
    Mat3 r;
    r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return make_transform(r, Vec3::Zero());
}

Vec3 apply(const Transform4& t, const Vec3& p) {
    return t.rotation() * p + t.translation();
}

// Trunk chain base: chain x stays forward while chain +y (robot right) and
// chain +z (groundward) flip into the body frame's y-left, z-up convention.
Transform4 spine_mount() { return rot_x(kPi); }

// Left hind hip: leg chain x point left-outward, y forward, z down.
Mat3 left_leg_mount_rotation() {
    Mat3 r;
    r << 0, 1, 0, 1, 0, 0, 0, 0, -1;
    return r;
}

// Right hind hip: chain x right-outward, y backward, z down (mirror image).
Mat3 right_leg_mount_rotation() {
    Mat3 r;
    r << 0, -1, 0, -1, 0, 0, 0, 0, -1;
    return r;
}

// Tail root: chain x runs tailward (body -x), the bend plane keeps body y.
Mat3 tail_mount_rotation() {
    Mat3 r;
    r << -1, 0, 0, 0, 1, 0, 0, 0, -1;
    return r;
}

struct BodyFrames {
    std::array<Transform4, 4> leg_mount;   // chain-local -> body, by LegId
    std::array<Vec3, 6> spine_origin;      // pelvis plus the five joint frames
    Transform4 head_frame;                 // trunk head-end link frame
    Transform4 tail_frame;                 // tail chain plane -> body
};

BodyFrames body_frames(const RobotModel& model, const SpineAngles& spine, double tail_pitch) {
    BodyFrames out;

    Transform4 acc = spine_mount();
    out.spine_origin[0] = acc.translation();
    const KinematicChain chain = model.geometry.spine.chain();
    for (std::size_t i = 0; i < chain.rows.size(); ++i) {
        JointRow row = chain.rows[i];
        row.theta = spine[i];
        acc = compose(acc, link_transform(row));
        out.spine_origin[i + 1] = acc.translation();
    }
    out.head_frame = acc;

    const double lat = model.mounts.lateral_mm;
    out.leg_mount[leg_index(LegId::LQ)] =
        compose(compose(acc, translate(model.mounts.front_x_mm, -lat, 0.0)), rot_z(-kPi / 2.0));
    out.leg_mount[leg_index(LegId::RQ)] =
        compose(compose(acc, translate(model.mounts.front_x_mm, lat, 0.0)), rot_z(kPi / 2.0));
    out.leg_mount[leg_index(LegId::LH)] =
        make_transform(left_leg_mount_rotation(), Vec3(model.mounts.hind_x_mm, lat, 0.0));
    out.leg_mount[leg_index(LegId::RH)] =
        make_transform(right_leg_mount_rotation(), Vec3(model.mounts.hind_x_mm, -lat, 0.0));

    out.tail_frame = compose(compose(translate(model.mounts.tail_x_mm, 0.0, 0.0),
                                     rot_y(-tail_pitch)),
                             make_transform(tail_mount_rotation(), Vec3::Zero()));
    return out;
}

// Canonical (left-side) chain point into the body frame; right side mirrored.
Vec3 body_point_from_canonical(const BodyFrames& frames, LegId leg, Vec3 p) {
    if (is_right(leg)) p.y() = -p.y();
    return apply(frames.leg_mount[static_cast<std::size_t>(leg_index(leg))], p);
}

// Foot position in the body frame for canonical angles.
Vec3 foot_body_point(const RobotModel& model, const BodyFrames& frames, LegId leg,
                     const LegAngles& q) {
    return body_point_from_canonical(frames, leg, leg_fk(model.geometry.leg, q).position);
}

// Canonical chain-frame target for a desired body-frame foot point.
Vec3 chain_target(const BodyFrames& frames, LegId leg, const Vec3& body_pt) {
    const Transform4& m = frames.leg_mount[static_cast<std::size_t>(leg_index(leg))];
    Vec3 local = m.rotation().transpose() * (body_pt - m.translation());
    if (is_right(leg)) local.y() = -local.y();
    return local;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 < 1e-18) return (p - a).norm();
    const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + u * ab)).norm();
}

// Andrew's monotone chain; returns the hull counter-clockwise. Collinear input
// collapses to its two extremes, coincident input to a single point.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return (a - b).norm() < 1e-9; }),
              pts.end());
    if (pts.size() <= 2) return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

struct FitPair {
    Vec2 body;
    Vec2 world;
    double weight = 1.0;
};

// Weighted planar rigid fit: the pose (heading, xy) minimising the weighted
// squared mismatch between body points mapped to the world and their targets.
// With fewer than two effective points the previous heading is kept.
void fit_pose(const std::vector<FitPair>& pairs, double prev_heading, double& heading,
              Vec2& origin) {
    double wsum = 0.0;
    Vec2 bbar = Vec2::Zero();
    Vec2 wbar = Vec2::Zero();
    for (const FitPair& p : pairs) {
        wsum += p.weight;
        bbar += p.weight * p.body;
        wbar += p.weight * p.world;
    }
    bbar /= wsum;
    wbar /= wsum;

    double s00 = 0.0, s01 = 0.0, s10 = 0.0, s11 = 0.0;
    for (const FitPair& p : pairs) {
        const Vec2 b = p.body - bbar;
        const Vec2 w = p.world - wbar;
        s00 += p.weight * b.x() * w.x();
        s01 += p.weight * b.x() * w.y();
        s10 += p.weight * b.y() * w.x();
        s11 += p.weight * b.y() * w.y();
    }
    const double cross = s01 - s10;
    const double dot = s00 + s11;
    heading = (std::abs(cross) < 1e-12 && std::abs(dot) < 1e-12) ? prev_heading
                                                                 : std::atan2(cross, dot);
    const Eigen::Rotation2Dd r(heading);
    origin = wbar - r * bbar;
}

LegAngles apply_lock(LegAngles q, const FaultSpec& fault, const LegAngles& neutral) {
    if (fault.joint == FaultJoint::rotational) {
        q.hip_yaw = neutral.hip_yaw;
    } else {
        q.hip_pitch = neutral.hip_pitch;
    }
    return q;
}

std::vector<Vec2> reliable_contacts(const WorldState& state) {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < 4; ++i) {
        if (state.anchored[i] && state.grounded[i] && !state.slipping[i]) {
            pts.push_back(state.foot_world[i].head<2>());
        }
    }
    if (state.tail_contact) pts.push_back(state.tail_contact_world);
    return pts;
}

} // namespace

double Masses::total() const {
    return head_kg + std::accumulate(torso_kg.begin(), torso_kg.end(), 0.0) +
           std::accumulate(leg_kg.begin(), leg_kg.end(), 0.0) + tail_driven_kg + tail_tip_kg;
}

Vec3 BodyPose::to_world(const Vec3& body_point) const {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    return Vec3(c * body_point.x() - s * body_point.y() + x,
                s * body_point.x() + c * body_point.y() + y, body_point.z() + height);
}

Vec3 BodyPose::to_body(const Vec3& world_point) const {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    const double dx = world_point.x() - x;
    const double dy = world_point.y() - y;
    return Vec3(c * dx + s * dy, -s * dx + c * dy, world_point.z() - height);
}

void SimParams::validate() const {
    if (dt <= 0.0 || duration_s <= 0.0) throw InvalidParameterError("time grid must be positive");
    if (contact_tol_mm <= 0.0 || slip_tol_mm <= 0.0) {
        throw InvalidParameterError("contact tolerances must be positive");
    }
    if (drag_weight < 0.0 || tilt_coeff_per_mm < 0.0 || tilt_dip_mm_per_mm < 0.0) {
        throw InvalidParameterError("penalty coefficients must be non-negative");
    }
    if (rise_rate_mm_s <= 0.0) {
        throw InvalidParameterError("height recovery rate must be positive");
    }
}

Vec3 weighted_centroid(const std::vector<std::pair<Vec3, double>>& points) {
    if (points.empty()) throw InvalidParameterError("centroid of an empty set");
    Vec3 acc = Vec3::Zero();
    double mass = 0.0;
    for (const auto& [p, m] : points) {
        if (m < 0.0) throw InvalidParameterError("negative mass");
        acc += m * p;
        mass += m;
    }
    if (mass <= 0.0) throw InvalidParameterError("zero total mass");
    return acc / mass;
}

PosedRobot pose_robot(const RobotModel& model, const BodyPose& pose, const JointState& joints) {
    const BodyFrames frames = body_frames(model, joints.spine, joints.tail_pitch);
    PosedRobot out;

    for (LegId leg : kAllLegs) {
        const auto i = static_cast<std::size_t>(leg_index(leg));
        out.foot_body[i] = foot_body_point(model, frames, leg, joints.legs[i]);
        out.foot_world[i] = pose.to_world(out.foot_body[i]);
    }

    for (std::size_t k = 1; k < 6; ++k) {
        const Vec3 mid = 0.5 * (frames.spine_origin[k - 1] + frames.spine_origin[k]);
        out.mass_points.emplace_back(pose.to_world(mid), model.masses.torso_kg[k - 1]);
    }

    out.head_base_world = pose.to_world(frames.head_frame.translation());
    const Vec3 head_end_body = apply(frames.head_frame, Vec3(model.geometry.head_length, 0.0, 0.0));
    out.head_end_world = pose.to_world(head_end_body);
    out.mass_points.emplace_back(
        pose.to_world(0.5 * (frames.head_frame.translation() + head_end_body)),
        model.masses.head_kg);

    for (LegId leg : kAllLegs) {
        const auto i = static_cast<std::size_t>(leg_index(leg));
        const Vec3 hip = frames.leg_mount[i].translation();
        out.mass_points.emplace_back(pose.to_world(0.5 * (hip + out.foot_body[i])),
                                     model.masses.leg_kg[i]);
    }

    const auto tail_joints = tail_joint_positions(model.geometry.tail, joints.tail_yaw);
    const Vec3 tail_base = frames.tail_frame.translation();
    const Vec3 last_joint =
        apply(frames.tail_frame, Vec3(tail_joints.back().x(), tail_joints.back().y(), 0.0));
    out.mass_points.emplace_back(pose.to_world(0.5 * (tail_base + last_joint)),
                                 model.masses.tail_driven_kg);

    const Vec2 tip = tail_tip(model.geometry.tail, joints.tail_yaw);
    const Vec3 tip_body = apply(frames.tail_frame, Vec3(tip.x(), tip.y(), 0.0));
    out.tail_tip_world = pose.to_world(tip_body);
    out.mass_points.emplace_back(pose.to_world(0.5 * (last_joint + tip_body)),
                                 model.masses.tail_tip_kg);
    return out;
}

Vec3 center_of_gravity(const RobotModel& model, const BodyPose& pose, const JointState& joints) {
    return weighted_centroid(pose_robot(model, pose, joints).mass_points);
}

std::vector<Vec2> support_polygon(const WorldState& state) {
    std::vector<Vec2> pts = reliable_contacts(state);
    if (pts.empty()) throw NoSupportError("no ground contacts to support the body");
    return convex_hull(std::move(pts));
}

double stability_margin(const Vec3& cog, const std::vector<Vec2>& polygon) {
    if (polygon.empty()) throw NoSupportError("empty support polygon");
    const Vec2 c = cog.head<2>();
    if (polygon.size() == 1) return -(c - polygon[0]).norm();
    if (polygon.size() == 2) {
        const Vec2 a = polygon[0];
        const Vec2 b = polygon[1];
        const Vec2 ab = b - a;
        if (ab.norm() < 1e-9) return -(c - a).norm();
        return -std::abs(cross2(ab, c - a)) / ab.norm();
    }

    double min_inside = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[(i + 1) % polygon.size()];
        const Vec2 e = b - a;
        min_inside = std::min(min_inside, cross2(e, c - a) / e.norm());
    }
    if (min_inside >= 0.0) return min_inside;

    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        dist = std::min(dist,
                        point_segment_distance(c, polygon[i], polygon[(i + 1) % polygon.size()]));
    }
    return -dist;
}

CoordinationFrame apply_fault(const CoordinationFrame& frame, const FaultSpec& fault,
                              const LegAngles& neutral) {
    CoordinationFrame out = frame;
    auto& q = out.leg_cmds[static_cast<std::size_t>(leg_index(fault.leg))];
    q = apply_lock(q, fault, neutral);
    return out;
}

namespace {

// Internal step with the fault context, so the grip-hold test evaluates the
// locked joint exactly as the commanded chain will execute it.
WorldState step_impl(const RobotModel& model, const WorldState& state,
                     const CoordinationFrame& frame, const SimParams& params,
                     const std::optional<FaultSpec>& fault, const LegAngles& neutral) {
    params.validate();
    WorldState next = state;
    next.t = frame.t;
    next.joints.legs = frame.leg_cmds;
    next.joints.spine = frame.spine_angles;
    next.joints.tail_yaw = frame.tail_yaw;
    next.joints.tail_pitch = frame.tail_pitch;

    const BodyFrames frames = body_frames(model, frame.spine_angles, frame.tail_pitch);
    const bool faulted_leg = fault.has_value();
    const auto fault_index =
        faulted_leg ? static_cast<std::size_t>(leg_index(fault->leg)) : std::size_t{4};

    std::array<Vec3, 4> commanded_body{};
    for (LegId leg : kAllLegs) {
        const auto i = static_cast<std::size_t>(leg_index(leg));
        commanded_body[i] = foot_body_point(model, frames, leg, frame.leg_cmds[i]);
    }

    // Classify contacts. A stance foot whose anchor the leg can actually hold
    // becomes an exact anchor; one that cannot (locked joint, workspace edge)
    // degrades to a heavy drag point at its previous position, as does a
    // grounded foot whose command has already left the ground.
    std::vector<FitPair> pairs;
    std::array<bool, 4> exact{};
    for (LegId leg : kAllLegs) {
        const auto i = static_cast<std::size_t>(leg_index(leg));
        if (frame.stance[i]) {
            if (!state.anchored[i]) {
                next.anchor_world[i] = state.foot_world[i].head<2>();
            }
            next.anchored[i] = true;

            const Vec3 desired_world(next.anchor_world[i].x(), next.anchor_world[i].y(), 0.0);
            const Vec3 desired_body = state.pose.to_body(desired_world);
            bool holds = false;
            try {
                const LegIkResult ik =
                    leg_ik(model.geometry.leg, chain_target(frames, leg, desired_body));
                LegAngles q = ik.knee_positive.angles;
                if (faulted_leg && i == fault_index) q = apply_lock(q, *fault, neutral);
                const Vec3 reached = foot_body_point(model, frames, leg, q);
                holds = (reached - desired_body).norm() <= params.slip_tol_mm;
            } catch (const ReachabilityError&) {
                holds = false;
            }
            exact[i] = holds;
            if (holds) {
                pairs.push_back(FitPair{commanded_body[i].head<2>(), next.anchor_world[i], 1.0});
            } else if (state.grounded[i]) {
                // A foot that cannot hold its grip skids: it resists body
                // motion instead of propelling, so the pair pins the foot's
                // present position, not its sweeping command.
                pairs.push_back(FitPair{state.pose.to_body(state.foot_world[i]).head<2>(),
                                        state.foot_world[i].head<2>(), params.drag_weight});
                // It re-grips wherever it is now.
                next.anchor_world[i] = state.foot_world[i].head<2>();
            }
        } else {
            next.anchored[i] = false;
            exact[i] = false;
            // A swing foot brakes the body when it is still on the ground and
            // is not executing its commanded trajectory (a locked joint keeps
            // it scraping); a healthy swing tracks its target and stays free.
            const Vec3 intent_body =
                body_point_from_canonical(frames, leg, frame.foot_targets[i]);
            const bool off_track =
                (commanded_body[i] - intent_body).norm() > params.slip_tol_mm;
            if (state.grounded[i] && off_track) {
                pairs.push_back(FitPair{state.pose.to_body(state.foot_world[i]).head<2>(),
                                        state.foot_world[i].head<2>(), params.drag_weight});
            }
        }
    }

    // Body height follows the commanded stance depth.
    double depth_sum = 0.0;
    int depth_n = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (frame.stance[i]) {
            depth_sum += -commanded_body[i].z();
            ++depth_n;
        }
    }
    const double height_cmd = depth_n > 0 ? depth_sum / depth_n : state.pose.height;

    double heading = state.pose.heading;
    Vec2 origin(state.pose.x, state.pose.y);
    if (!pairs.empty()) fit_pose(pairs, state.pose.heading, heading, origin);

    // Tentative pose, then the stability price: a cog outside the support area
    // bleeds forward advance and dips the body.
    BodyPose candidate{origin.x(), origin.y(), heading, height_cmd};
    const PosedRobot posed_pre = pose_robot(model, candidate, next.joints);

    std::vector<Vec2> supports_pre;
    for (std::size_t i = 0; i < 4; ++i) {
        if (exact[i]) supports_pre.push_back(next.anchor_world[i]);
    }
    const bool tail_touch_pre = posed_pre.tail_tip_world.z() <= params.contact_tol_mm;
    if (tail_touch_pre) supports_pre.push_back(posed_pre.tail_tip_world.head<2>());

    double margin_pre = 0.0;
    bool any_support = !supports_pre.empty();
    if (any_support) {
        margin_pre =
            stability_margin(weighted_centroid(posed_pre.mass_points), convex_hull(supports_pre));
    }

    const double deficit = std::max(0.0, -margin_pre);
    const double factor = std::max(0.0, 1.0 - params.tilt_coeff_per_mm * deficit);
    const Vec2 delta = origin - Vec2(state.pose.x, state.pose.y);
    const Vec2 ahead(std::cos(state.pose.heading), std::sin(state.pose.heading));
    const double forward = delta.dot(ahead);
    const Vec2 lateral = delta - forward * ahead;
    const Vec2 walked = Vec2(state.pose.x, state.pose.y) + factor * forward * ahead + lateral;

    // Dropping is instant, standing back up is not: the height may fall to the
    // dipped target at once but recovers toward it at a bounded rate.
    const double height_target =
        std::max(0.0, height_cmd - params.tilt_dip_mm_per_mm * deficit);
    const double dt_step = std::max(0.0, frame.t - state.t);
    const double height_new =
        std::min(height_target, state.pose.height + params.rise_rate_mm_s * dt_step);
    next.pose = BodyPose{walked.x(), walked.y(), heading, height_new};
    next.displacement_mm = state.displacement_mm + factor * forward;

    const PosedRobot posed = pose_robot(model, next.pose, next.joints);
    next.foot_world = posed.foot_world;
    for (std::size_t i = 0; i < 4; ++i) {
        next.grounded[i] = posed.foot_world[i].z() <= params.contact_tol_mm;
        next.slipping[i] = next.anchored[i] && !exact[i];
        // Grip is renewed each tick at the executed foot position: any sweep
        // the body could not follow is shed as slip, never banked as a debt
        // the next ticks would repay by catching back up to the gait phase.
        if (next.anchored[i]) next.anchor_world[i] = posed.foot_world[i].head<2>();
    }
    next.tail_contact = posed.tail_tip_world.z() <= params.contact_tol_mm;
    next.tail_contact_world = posed.tail_tip_world.head<2>();
    next.fallen = reliable_contacts(next).empty();
    return next;
}

WorldState initial_state(const RobotModel& model, const CoordinationFrame& frame,
                         const SimParams& params) {
    WorldState state;
    state.t = frame.t;
    state.joints.legs = frame.leg_cmds;
    state.joints.spine = frame.spine_angles;
    state.joints.tail_yaw = frame.tail_yaw;
    state.joints.tail_pitch = frame.tail_pitch;

    const BodyFrames frames = body_frames(model, frame.spine_angles, frame.tail_pitch);
    double depth_sum = 0.0;
    int depth_n = 0;
    std::array<Vec3, 4> body_pts{};
    for (LegId leg : kAllLegs) {
        const auto i = static_cast<std::size_t>(leg_index(leg));
        body_pts[i] = foot_body_point(model, frames, leg, frame.leg_cmds[i]);
        if (frame.stance[i]) {
            depth_sum += -body_pts[i].z();
            ++depth_n;
        }
    }
    state.pose = BodyPose{0.0, 0.0, 0.0, depth_n > 0 ? depth_sum / depth_n : 0.0};

    const PosedRobot posed = pose_robot(model, state.pose, state.joints);
    state.foot_world = posed.foot_world;
    for (std::size_t i = 0; i < 4; ++i) {
        state.grounded[i] = posed.foot_world[i].z() <= params.contact_tol_mm;
        state.anchored[i] = frame.stance[i] && state.grounded[i];
        if (state.anchored[i]) state.anchor_world[i] = posed.foot_world[i].head<2>();
        state.slipping[i] = false;
    }
    state.tail_contact = posed.tail_tip_world.z() <= params.contact_tol_mm;
    state.tail_contact_world = posed.tail_tip_world.head<2>();
    return state;
}

void append_row(const RobotModel& model, const WorldState& state, RunResult& run) {
    run.t.push_back(state.t);
    run.displacement_mm.push_back(state.displacement_mm);
    const Vec3 cog = center_of_gravity(model, state.pose, state.joints);
    run.cog_height_mm.push_back(cog.z());
    const std::vector<Vec2> contacts = reliable_contacts(state);
    run.margin_mm.push_back(contacts.empty() ? -std::numeric_limits<double>::infinity()
                                             : stability_margin(cog, convex_hull(contacts)));
}

void finalize_run(RunResult& run, const WorldState& state) {
    run.fallen = state.fallen;
    run.final_state = state;
    run.total_displacement_m = run.displacement_mm.empty() ? 0.0 : run.displacement_mm.back() / 1000.0;
    if (!run.margin_mm.empty()) {
        run.min_margin_mm = *std::min_element(run.margin_mm.begin(), run.margin_mm.end());
    }
    if (!run.cog_height_mm.empty()) {
        const auto [lo, hi] = std::minmax_element(run.cog_height_mm.begin(), run.cog_height_mm.end());
        run.cog_amplitude_mm = *hi - *lo;
    }
}

} // namespace

WorldState step_quasi_static(const RobotModel& model, const WorldState& state,
                             const CoordinationFrame& frame, const SimParams& params) {
    return step_impl(model, state, frame, params, std::nullopt, LegAngles{});
}

RunResult run_scenario(const RobotModel& model, const GaitParams& gait,
                       const std::optional<FaultSpec>& fault, const SimParams& params) {
    params.validate();
    gait.validate();
    const LegAngles neutral =
        leg_ik(model.geometry.leg, Vec3(gait.stance_out, 0.0, gait.stance_down))
            .knee_positive.angles;

    auto framed = [&](double t) {
        CoordinationFrame f = coordination_frame(model.geometry, gait, t);
        if (fault) f = apply_fault(f, *fault, neutral);
        return f;
    };

    RunResult run;
    WorldState state = initial_state(model, framed(0.0), params);
    append_row(model, state, run);

    const int steps = static_cast<int>(std::lround(params.duration_s / params.dt));
    for (int k = 1; k <= steps; ++k) {
        state = step_impl(model, state, framed(k * params.dt), params, fault, neutral);
        append_row(model, state, run);
        if (state.fallen) break;
    }
    finalize_run(run, state);
    return run;
}

double reach_height(const RobotModel& model, const GaitParams& gait, const StandParams& stand,
                    Posture posture) {
    CoordinationFrame frame;
    double height = 0.0;
    if (posture == Posture::crawl) {
        frame = coordination_frame(model.geometry, gait, 0.0);
        height = gait.stance_down;
    } else {
        const StandSequence seq = stand_sequence(model.geometry, gait, stand, 1.0);
        frame = seq.keyframes.back().frame;
        height = stand.hind_target.z();
    }
    JointState joints;
    joints.legs = frame.leg_cmds;
    joints.spine = frame.spine_angles;
    joints.tail_yaw = frame.tail_yaw;
    joints.tail_pitch = frame.tail_pitch;
    const PosedRobot posed = pose_robot(model, BodyPose{0.0, 0.0, 0.0, height}, joints);
    return std::max(posed.head_base_world.z(), posed.head_end_world.z());
}

StandRun run_stand(const RobotModel& model, const GaitParams& gait, const StandParams& stand,
                   double duration_s, double dt) {
    SimParams params;
    params.dt = dt;
    params.duration_s = duration_s;
    params.validate();

    const StandSequence seq = stand_sequence(model.geometry, gait, stand, duration_s);
    StandRun out;
    WorldState state = initial_state(model, sample_stand(seq, 0.0), params);
    append_row(model, state, out.run);

    const int steps = static_cast<int>(std::lround(duration_s / dt));
    for (int k = 1; k <= steps; ++k) {
        CoordinationFrame f = sample_stand(seq, k * dt);
        f.t = k * dt;
        state = step_impl(model, state, f, params, std::nullopt, LegAngles{});
        append_row(model, state, out.run);
        if (state.fallen) break;
    }
    finalize_run(out.run, state);
    out.crawl_reach_mm = reach_height(model, gait, stand, Posture::crawl);
    out.stand_reach_mm = reach_height(model, gait, stand, Posture::stand);
    return out;
}

} // namespace croc
