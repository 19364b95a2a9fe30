#include <doctest.h>

#include <croc/gait.hpp>
#include <croc/leg.hpp>
#include <croc/sim.hpp>
#include <croc/types.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace {

using namespace croc;

// Mirror of the run setup: body levelled at the commanded stance depth with
// every stance foot gripping where it stands.
WorldState seed_state(const RobotModel& model, const CoordinationFrame& frame,
                      const SimParams& params) {
    WorldState state;
    state.t = frame.t;
    state.joints.legs = frame.leg_cmds;
    state.joints.spine = frame.spine_angles;
    state.joints.tail_yaw = frame.tail_yaw;
    state.joints.tail_pitch = frame.tail_pitch;
    state.pose = BodyPose{0.0, 0.0, 0.0, 110.0};
    const PosedRobot posed = pose_robot(model, state.pose, state.joints);
    state.foot_world = posed.foot_world;
    for (std::size_t i = 0; i < 4; ++i) {
        state.grounded[i] = posed.foot_world[i].z() <= params.contact_tol_mm;
        state.anchored[i] = frame.stance[i] && state.grounded[i];
        if (state.anchored[i]) {
            state.anchor_world[i] = posed.foot_world[i].head<2>();
        }
    }
    state.tail_contact = posed.tail_tip_world.z() <= params.contact_tol_mm;
    state.tail_contact_world = posed.tail_tip_world.head<2>();
    return state;
}

GaitParams sway_free_strut() {
    GaitParams g;
    g.spine_yaw_amp = 0.0;
    g.spine_pitch_amp = 0.0;
    g.tail_yaw_amp = 0.0;
    g.tail_drag = true;
    return g;
}

double polygon_signed_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

WorldState contact_fixture(const std::vector<Vec2>& contacts) {
    WorldState s;
    for (std::size_t i = 0; i < contacts.size() && i < 4; ++i) {
        s.anchored[i] = true;
        s.grounded[i] = true;
        s.slipping[i] = false;
        s.anchor_world[i] = contacts[i];
        s.foot_world[i] = Vec3(contacts[i].x(), contacts[i].y(), 0.0);
    }
    return s;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("mass bookkeeping sums every segment") {
    Masses m;
    CHECK(m.total() ==
          doctest::Approx(0.4 + 5 * 0.3 + 4 * 0.15 + 0.35 + 0.1).epsilon(1e-12));
}

TEST_CASE("weighted centroid averages by mass and rejects nonsense") {
    std::vector<std::pair<Vec3, double>> pts{
        {Vec3(0.0, 0.0, 0.0), 1.0},
        {Vec3(10.0, 0.0, 0.0), 3.0},
    };
    CHECK((weighted_centroid(pts) - Vec3(7.5, 0.0, 0.0)).norm() < 1e-12);
    CHECK_THROWS_AS(weighted_centroid({}), InvalidParameterError);
    CHECK_THROWS_AS(weighted_centroid({{Vec3::Zero(), -1.0}}),
                    InvalidParameterError);
    CHECK_THROWS_AS(weighted_centroid({{Vec3::Zero(), 0.0}}),
                    InvalidParameterError);
}

TEST_CASE("body pose maps world and body points both ways") {
    const BodyPose pose{12.0, -7.0, 0.9, 104.0};
    const Vec3 p(31.0, -4.0, 2.5);
    CHECK((pose.to_body(pose.to_world(p)) - p).norm() < 1e-12);
    CHECK((pose.to_world(pose.to_body(p)) - p).norm() < 1e-12);
    // Height lifts the body origin straight up.
    CHECK(pose.to_world(Vec3::Zero()).z() == doctest::Approx(104.0));
}

TEST_CASE("zero spine keeps the stance mirror-symmetric left to right") {
    RobotModel model;
    JointState joints;
    const LegAngles q{0.15, 0.2, 1.1, 0.0};
    joints.legs = {q, q, q, q};
    const PosedRobot posed =
        pose_robot(model, BodyPose{0.0, 0.0, 0.0, 110.0}, joints);
    const auto lq = posed.foot_world[leg_index(LegId::LQ)];
    const auto rq = posed.foot_world[leg_index(LegId::RQ)];
    const auto lh = posed.foot_world[leg_index(LegId::LH)];
    const auto rh = posed.foot_world[leg_index(LegId::RH)];
    CHECK(lq.x() == doctest::Approx(rq.x()).epsilon(1e-9));
    CHECK(lq.y() == doctest::Approx(-rq.y()).epsilon(1e-9));
    CHECK(lq.z() == doctest::Approx(rq.z()).epsilon(1e-9));
    CHECK(lh.x() == doctest::Approx(rh.x()).epsilon(1e-9));
    CHECK(lh.y() == doctest::Approx(-rh.y()).epsilon(1e-9));
    // Left feet actually sit on the left.
    CHECK(lq.y() > 0.0);
    CHECK(lh.y() > 0.0);
}

TEST_CASE("neutral crouch puts all four feet on the ground plane") {
    RobotModel model;
    GaitParams gait = sway_free_strut();
    const CoordinationFrame f = coordination_frame(model.geometry, gait, 0.0);
    JointState joints;
    joints.legs = f.leg_cmds;
    joints.spine = f.spine_angles;
    joints.tail_yaw = f.tail_yaw;
    joints.tail_pitch = f.tail_pitch;
    const PosedRobot posed =
        pose_robot(model, BodyPose{0.0, 0.0, 0.0, gait.stance_down}, joints);
    for (const Vec3& foot : posed.foot_world) {
        CHECK(std::abs(foot.z()) < 1e-6);
    }
    CHECK(std::abs(posed.tail_tip_world.z()) < 1e-6);
}

TEST_CASE("support polygon handles degenerate contact sets") {
    // Single contact collapses to a point.
    WorldState one = contact_fixture({{10.0, 5.0}});
    CHECK(support_polygon(one).size() == 1);

    // Three collinear contacts collapse to the segment extremes.
    WorldState line =
        contact_fixture({{0.0, 0.0}, {10.0, 0.0}, {5.0, 0.0}});
    const auto seg = support_polygon(line);
    CHECK(seg.size() == 2);

    // A square with an interior tail contact keeps only the corners, CCW.
    WorldState square = contact_fixture(
        {{100.0, 50.0}, {100.0, -50.0}, {-100.0, 50.0}, {-100.0, -50.0}});
    square.tail_contact = true;
    square.tail_contact_world = Vec2(0.0, 0.0);
    const auto hull = support_polygon(square);
    CHECK(hull.size() == 4);
    CHECK(polygon_signed_area(hull) == doctest::Approx(200.0 * 100.0));

    // No reliable contact at all.
    WorldState none;
    CHECK_THROWS_AS(support_polygon(none), NoSupportError);

    // A slipping foot does not count as support.
    WorldState slipped = contact_fixture({{10.0, 5.0}});
    slipped.slipping[0] = true;
    CHECK_THROWS_AS(support_polygon(slipped), NoSupportError);
}

TEST_CASE("stability margin is the inradius for a centered triangle") {
    const double side = 100.0;
    const double h = side * std::sqrt(3.0) / 2.0;
    const std::vector<Vec2> tri{
        {0.0, 0.0}, {side, 0.0}, {side / 2.0, h}};
    const Vec2 centroid(side / 2.0, h / 3.0);
    const double margin =
        stability_margin(Vec3(centroid.x(), centroid.y(), 90.0), tri);
    CHECK(margin == doctest::Approx(side / (2.0 * std::sqrt(3.0))).epsilon(1e-9));
}

TEST_CASE("stability margin goes negative outside the support") {
    const std::vector<Vec2> tri{{0.0, 0.0}, {100.0, 0.0}, {50.0, 80.0}};
    CHECK(stability_margin(Vec3(50.0, -30.0, 90.0), tri) ==
          doctest::Approx(-30.0).epsilon(1e-9));
    // Point support: radial distance, always non-positive.
    CHECK(stability_margin(Vec3(3.0, 4.0, 90.0), {{0.0, 0.0}}) ==
          doctest::Approx(-5.0).epsilon(1e-12));
    // Segment support: perpendicular offset from the line.
    CHECK(stability_margin(Vec3(5.0, 7.0, 90.0),
                           {{0.0, 0.0}, {10.0, 0.0}}) ==
          doctest::Approx(-7.0).epsilon(1e-12));
}

TEST_CASE("locking a joint replaces only that joint's command") {
    CoordinationFrame frame;
    frame.leg_cmds[0] = LegAngles{0.3, -0.2, 1.4, 0.1};
    frame.leg_cmds[1] = LegAngles{0.5, 0.1, 0.9, 0.0};
    const LegAngles neutral{0.0, 0.28, 1.55, 0.0};

    const CoordinationFrame yawed =
        apply_fault(frame, FaultSpec{LegId::LQ, FaultJoint::rotational}, neutral);
    CHECK(yawed.leg_cmds[0].hip_yaw == doctest::Approx(neutral.hip_yaw));
    CHECK(yawed.leg_cmds[0].hip_pitch == doctest::Approx(-0.2));
    CHECK(yawed.leg_cmds[0].knee_pitch == doctest::Approx(1.4));
    CHECK(yawed.leg_cmds[1].hip_yaw == doctest::Approx(0.5));

    const CoordinationFrame pitched =
        apply_fault(frame, FaultSpec{LegId::LQ, FaultJoint::pitching}, neutral);
    CHECK(pitched.leg_cmds[0].hip_pitch == doctest::Approx(neutral.hip_pitch));
    CHECK(pitched.leg_cmds[0].hip_yaw == doctest::Approx(0.3));
}

TEST_CASE("grips stay put through a steady sway-free crawl") {
    RobotModel model;
    const GaitParams gait = sway_free_strut();
    SimParams params;
    WorldState state =
        seed_state(model, coordination_frame(model.geometry, gait, 0.0), params);

    std::array<Vec2, 4> last_anchor = state.anchor_world;
    std::array<bool, 4> was_anchored = state.anchored;
    double steady_drift = 0.0;    // support set unchanged this tick
    double touchdown_drift = 0.0; // a new foot joined the fit this tick
    for (int k = 1; k <= 150; ++k) {
        const CoordinationFrame f =
            coordination_frame(model.geometry, gait, k * params.dt);
        state = step_quasi_static(model, state, f, params);
        REQUIRE_FALSE(state.fallen);
        bool fresh_grip = false;
        for (std::size_t i = 0; i < 4; ++i) {
            fresh_grip = fresh_grip || (state.anchored[i] && !was_anchored[i]);
        }
        for (std::size_t i = 0; i < 4; ++i) {
            if (state.anchored[i] && was_anchored[i]) {
                const double d = (state.anchor_world[i] - last_anchor[i]).norm();
                (fresh_grip ? touchdown_drift : steady_drift) =
                    std::max(fresh_grip ? touchdown_drift : steady_drift, d);
                CHECK_FALSE(state.slipping[i]);
            }
            was_anchored[i] = state.anchored[i];
            last_anchor[i] = state.anchor_world[i];
        }
    }
    // Between support changes a grip point is bit-stable; the tick a new foot
    // joins, the weighted fit may shuffle everything a hair, and that shuffle
    // must stay far below the slip tolerance.
    CHECK(steady_drift < 1e-6);
    CHECK(touchdown_drift < params.slip_tol_mm / 2.0);
    // Sweeping half the step length per stance second moves the body at the
    // commanded pace: 60 mm per 2.4 s of stance, i.e. 25 mm/s over 3 s.
    CHECK(state.displacement_mm == doctest::Approx(75.0).epsilon(0.02));
}

TEST_CASE("body height falls instantly but recovers at a bounded rate") {
    RobotModel model;
    const GaitParams gait = sway_free_strut();
    SimParams params;
    const CoordinationFrame f0 = coordination_frame(model.geometry, gait, 0.0);
    WorldState state = seed_state(model, f0, params);

    // Start the body well below the commanded depth: it may only rise by
    // rise_rate * dt per tick.
    state.pose.height = 80.0;
    const CoordinationFrame f1 =
        coordination_frame(model.geometry, gait, params.dt);
    WorldState up = step_quasi_static(model, state, f1, params);
    CHECK(up.pose.height ==
          doctest::Approx(80.0 + params.rise_rate_mm_s * params.dt)
              .epsilon(1e-9));

    // A lower commanded depth is honoured immediately.
    GaitParams shallow = sway_free_strut();
    shallow.stance_down = 90.0;
    const CoordinationFrame f2 =
        coordination_frame(model.geometry, shallow, params.dt);
    WorldState level = seed_state(model, f0, params);  // height 110
    WorldState down = step_quasi_static(model, level, f2, params);
    CHECK(down.pose.height == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("losing every contact marks the run as fallen") {
    RobotModel model;
    const GaitParams gait = sway_free_strut();
    SimParams params;
    CoordinationFrame frame = coordination_frame(model.geometry, gait, 0.1);
    WorldState state = seed_state(model, frame, params);

    // Lift the body far off the ground and declare every leg in swing with a
    // level tail: nothing can grip, so the next tick reports a fall.
    state.pose.height = 400.0;
    for (std::size_t i = 0; i < 4; ++i) {
        state.grounded[i] = false;
        state.anchored[i] = false;
    }
    state.tail_contact = false;
    frame.stance = {false, false, false, false};
    frame.tail_pitch = 0.0;
    const WorldState next = step_quasi_static(model, state, frame, params);
    CHECK(next.fallen);
}

TEST_CASE("scenario runs are bitwise repeatable") {
    RobotModel model;
    GaitParams gait;
    SimParams params;
    params.duration_s = 3.0;
    const RunResult a = run_scenario(model, gait, std::nullopt, params);
    const RunResult b = run_scenario(model, gait, std::nullopt, params);
    REQUIRE(a.t.size() == b.t.size());
    for (std::size_t i = 0; i < a.t.size(); ++i) {
        CHECK(a.displacement_mm[i] == b.displacement_mm[i]);
        CHECK(a.cog_height_mm[i] == b.cog_height_mm[i]);
        CHECK(a.margin_mm[i] == b.margin_mm[i]);
    }
    CHECK(a.total_displacement_m == b.total_displacement_m);
    CHECK(a.min_margin_mm == b.min_margin_mm);
    CHECK(a.cog_amplitude_mm == b.cog_amplitude_mm);
}

TEST_CASE("summary statistics are consistent with the series") {
    RobotModel model;
    GaitParams gait;
    SimParams params;
    params.duration_s = 4.0;
    const RunResult r = run_scenario(model, gait, std::nullopt, params);
    REQUIRE_FALSE(r.fallen);
    REQUIRE(r.t.size() == 201);
    CHECK(r.displacement_mm.size() == r.t.size());
    CHECK(r.margin_mm.size() == r.t.size());
    CHECK(r.total_displacement_m ==
          doctest::Approx(r.displacement_mm.back() / 1000.0).epsilon(1e-12));
    double min_margin = r.margin_mm.front();
    for (double m : r.margin_mm) min_margin = std::min(min_margin, m);
    CHECK(r.min_margin_mm == doctest::Approx(min_margin));
    CHECK(r.total_displacement_m > 0.05);
}

TEST_CASE("a locked front hip slows the crawl down") {
    RobotModel model;
    GaitParams gait;
    SimParams params;
    params.duration_s = 4.0;
    const RunResult healthy = run_scenario(model, gait, std::nullopt, params);
    const RunResult lame = run_scenario(
        model, gait, FaultSpec{LegId::LQ, FaultJoint::rotational}, params);
    CHECK_FALSE(lame.fallen);
    CHECK(lame.total_displacement_m < healthy.total_displacement_m);
}

TEST_CASE("stand playback gains head height without walking anywhere") {
    RobotModel model;
    GaitParams gait;
    StandParams stand;
    const StandRun sr = run_stand(model, gait, stand, 6.0, 0.02);
    CHECK_FALSE(sr.run.fallen);
    // The body shuffles slightly while the feet repose, but it does not walk.
    CHECK(std::abs(sr.run.total_displacement_m) < 0.02);
    CHECK(sr.crawl_reach_mm == doctest::Approx(110.0).epsilon(1e-9));
    CHECK(sr.stand_reach_mm > 300.0);
    CHECK(sr.stand_reach_mm ==
          doctest::Approx(reach_height(model, gait, stand, Posture::stand))
              .epsilon(1e-9));
}

TEST_CASE("simulation parameters are validated") {
    SimParams p;
    CHECK_NOTHROW(p.validate());
    SimParams bad = p;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
    bad = p;
    bad.slip_tol_mm = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
    bad = p;
    bad.tilt_coeff_per_mm = -0.1;
    CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
    bad = p;
    bad.rise_rate_mm_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

}  // TEST_SUITE
