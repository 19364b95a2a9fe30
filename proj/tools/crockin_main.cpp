// crockin: kinematics queries and scenario runs for the crocodile-style
// quadruped model. JSON goes to stdout; scenario artifacts go to --out.
#include <croc/config.hpp>
#include <croc/scenario.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    unsigned long long seed = 0;  // reserved: the model is deterministic
    bool degrees = false;
};

croc::Config load(const CliOptions& opt) {
    if (!opt.config_path.empty()) return croc::load_config(opt.config_path);
    if (const char* env = std::getenv("CROC_KIN_CONFIG"); env != nullptr && *env != '\0') {
        return croc::load_config(env);
    }
    return croc::default_config();
}

double in_angle(const CliOptions& opt, double v) {
    return opt.degrees ? croc::deg_to_rad(v) : v;
}

double out_angle(const CliOptions& opt, double v) {
    return opt.degrees ? croc::rad_to_deg(v) : v;
}

json vec_json(const croc::Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json leg_angles_json(const CliOptions& opt, const croc::LegAngles& q) {
    return json{{"hip_yaw", out_angle(opt, q.hip_yaw)},
                {"hip_pitch", out_angle(opt, q.hip_pitch)},
                {"knee_pitch", out_angle(opt, q.knee_pitch)},
                {"ankle_pitch", out_angle(opt, q.ankle_pitch)}};
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_fk_leg(const CliOptions& opt, const croc::Config& config,
               const std::vector<double>& angles) {
    const croc::LegAngles q{in_angle(opt, angles[0]), in_angle(opt, angles[1]),
                            in_angle(opt, angles[2]), in_angle(opt, angles[3])};
    const croc::LegFk fk = leg_fk(config.model.geometry.leg, q);
    print(json{{"position_mm", vec_json(fk.position)},
               {"within_limits", config.model.geometry.leg.chain().within_limits(q.as_array())}});
    return 0;
}

int run_fk_spine(const CliOptions& opt, const croc::Config& config,
                 const std::vector<double>& angles) {
    croc::SpineAngles q{};
    for (std::size_t i = 0; i < 5; ++i) q[i] = in_angle(opt, angles[i]);
    const croc::Transform4 pose = spine_fk(config.model.geometry.spine, q);
    std::vector<double> a(q.begin(), q.end());
    print(json{{"position_mm", vec_json(pose.translation())},
               {"within_limits", config.model.geometry.spine.chain().within_limits(a)}});
    return 0;
}

int run_ik_leg(const CliOptions& opt, const croc::Config& config, const std::vector<double>& xyz,
               double ankle) {
    const croc::Vec3 target(xyz[0], xyz[1], xyz[2]);
    const croc::LegIkResult ik =
        leg_ik(config.model.geometry.leg, target, in_angle(opt, ankle));
    print(json{{"target_mm", vec_json(target)},
               {"knee_positive", json{{"angles", leg_angles_json(opt, ik.knee_positive.angles)},
                                      {"within_limits", ik.knee_positive.within_limits}}},
               {"knee_negative", json{{"angles", leg_angles_json(opt, ik.knee_negative.angles)},
                                      {"within_limits", ik.knee_negative.within_limits}}},
               {"hip_yaw_singular", ik.hip_yaw_singular}});
    return 0;
}

int run_ik_spine(const CliOptions& opt, const croc::Config& config,
                 const std::vector<double>& xyz) {
    const croc::Vec3 target(xyz[0], xyz[1], xyz[2]);
    const croc::SpineIkResult ik = spine_ik(config.model.geometry.spine, target);
    json angles = json::array();
    for (double q : ik.angles) angles.push_back(out_angle(opt, q));
    print(json{{"target_mm", vec_json(target)},
               {"angles", angles},
               {"converged", ik.converged},
               {"position_error_mm", ik.position_error_mm},
               {"iterations", ik.iterations}});
    return ik.converged ? 0 : 3;
}

int run_scenario_cmd(const CliOptions& opt, const croc::Config& config,
                     const std::string& name) {
    const croc::ScenarioOutcome outcome =
        croc::run_scenario_family(name, config, opt.out_dir + "/" + name);
    std::cout << outcome.summary << "\n";
    std::cout << "artifacts: " << opt.out_dir << "/" << name << "\n";
    return outcome.fell ? 4 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinematics and coordinated-locomotion toolkit for a spined, "
                 "tail-dragging quadruped"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CliOptions opt;
    app.add_option("--config", opt.config_path,
                   "JSON config path (falls back to $CROC_KIN_CONFIG, then defaults)");
    app.add_option("--out", opt.out_dir, "output directory for scenario artifacts");
    app.add_option("--seed", opt.seed, "reserved; runs are deterministic");
    app.add_flag("--degrees", opt.degrees, "angles in degrees at this interface");

    auto* fk = app.add_subcommand("fk", "forward kinematics");
    std::vector<double> fk_leg_angles;
    auto* fk_leg = fk->add_subcommand("leg", "foot position from 4 leg joint angles");
    fk_leg->add_option("angles", fk_leg_angles, "hip_yaw hip_pitch knee_pitch ankle_pitch")
        ->expected(4);
    std::vector<double> fk_spine_angles;
    auto* fk_spine = fk->add_subcommand("spine", "head-end position from 5 trunk joint angles");
    fk_spine->add_option("angles", fk_spine_angles, "q1 q2 q3 q4 q5")->expected(5);
    fk->require_subcommand(1);

    auto* ik = app.add_subcommand("ik", "inverse kinematics");
    std::vector<double> ik_leg_xyz;
    double ik_leg_ankle = 0.0;
    auto* ik_leg = ik->add_subcommand("leg", "leg joint angles for a foot target");
    ik_leg->add_option("target", ik_leg_xyz, "x y z in the leg frame (mm)")->expected(3);
    ik_leg->add_option("--ankle", ik_leg_ankle, "free ankle pitch passed through");
    std::vector<double> ik_spine_xyz;
    auto* ik_spine = ik->add_subcommand("spine", "trunk joint angles for a head-end target");
    ik_spine->add_option("target", ik_spine_xyz, "x y z in the trunk frame (mm)")->expected(3);
    ik->require_subcommand(1);

    auto* scenario = app.add_subcommand("scenario", "run a scenario family");
    std::string scenario_name;
    scenario->add_option("name", scenario_name, "stability|displacement|fault|stand|swim")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const croc::Config config = load(opt);
        config.validate();
        if (fk_leg->parsed()) return run_fk_leg(opt, config, fk_leg_angles);
        if (fk_spine->parsed()) return run_fk_spine(opt, config, fk_spine_angles);
        if (ik_leg->parsed()) return run_ik_leg(opt, config, ik_leg_xyz, ik_leg_ankle);
        if (ik_spine->parsed()) return run_ik_spine(opt, config, ik_spine_xyz);
        if (scenario->parsed()) return run_scenario_cmd(opt, config, scenario_name);
        std::cerr << "no command\n";
        return 1;
    } catch (const croc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const croc::ReachabilityError& e) {
        std::cerr << "unreachable: " << e.what() << "\n";
        return 3;
    } catch (const croc::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const croc::LimitError& e) {
        std::cerr << "limit violation: " << e.what() << "\n";
        return 3;
    } catch (const croc::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const croc::NoSupportError& e) {
        std::cerr << "no support: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
