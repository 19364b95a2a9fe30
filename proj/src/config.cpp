#include <croc/config.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace croc {

namespace {

using nlohmann::json;

void expect_object(const json& j, const char* section) {
    if (!j.is_object()) throw ConfigError(std::string(section) + " must be a JSON object");
}

void expect_keys(const json& j, const char* section, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key \"" + key + "\" in " + section);
        }
    }
}

void read_num(const json& j, const char* section, const char* key, double& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number()) {
        throw ConfigError(std::string(section) + "." + key + " must be a number");
    }
    out = it->get<double>();
}

void read_int(const json& j, const char* section, const char* key, int& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number_integer()) {
        throw ConfigError(std::string(section) + "." + key + " must be an integer");
    }
    out = it->get<int>();
}

void read_bool(const json& j, const char* section, const char* key, bool& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_boolean()) {
        throw ConfigError(std::string(section) + "." + key + " must be a boolean");
    }
    out = it->get<bool>();
}

template <std::size_t N>
void read_array(const json& j, const char* section, const char* key, std::array<double, N>& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array() || it->size() != N) {
        throw ConfigError(std::string(section) + "." + key + " must be an array of " +
                          std::to_string(N) + " numbers");
    }
    for (std::size_t i = 0; i < N; ++i) {
        if (!(*it)[i].is_number()) {
            throw ConfigError(std::string(section) + "." + key + " must contain numbers");
        }
        out[i] = (*it)[i].get<double>();
    }
}

void read_vec3(const json& j, const char* section, const char* key, Vec3& out) {
    std::array<double, 3> a{out.x(), out.y(), out.z()};
    read_array(j, section, key, a);
    out = Vec3(a[0], a[1], a[2]);
}

template <std::size_t N>
void read_limits(const json& j, const char* section, const char* key,
                 std::array<std::pair<double, double>, N>& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array() || it->size() != N) {
        throw ConfigError(std::string(section) + "." + key + " must be an array of " +
                          std::to_string(N) + " [lo, hi] pairs");
    }
    for (std::size_t i = 0; i < N; ++i) {
        const json& pair = (*it)[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw ConfigError(std::string(section) + "." + key + " entries must be [lo, hi]");
        }
        out[i] = {pair[0].get<double>(), pair[1].get<double>()};
    }
}

template <std::size_t N>
json limits_json(const std::array<std::pair<double, double>, N>& limits) {
    json out = json::array();
    for (const auto& [lo, hi] : limits) out.push_back(json::array({lo, hi}));
    return out;
}

void apply_leg(const json& j, LegGeometry& leg) {
    expect_object(j, "leg");
    expect_keys(j, "leg", {"hip_offset", "femur", "tibia", "limits"});
    read_num(j, "leg", "hip_offset", leg.hip_offset);
    read_num(j, "leg", "femur", leg.femur);
    read_num(j, "leg", "tibia", leg.tibia);
    read_limits(j, "leg", "limits", leg.limits);
}

void apply_spine(const json& j, SpineGeometry& spine) {
    expect_object(j, "spine");
    expect_keys(j, "spine", {"links", "twists", "limits"});
    read_array(j, "spine", "links", spine.links);
    read_array(j, "spine", "twists", spine.twists);
    read_limits(j, "spine", "limits", spine.limits);
}

void apply_tail(const json& j, TailGeometry& tail) {
    expect_object(j, "tail");
    expect_keys(j, "tail",
                {"joints", "pin_spacing", "clearance", "segment", "servo_radius", "cable_length",
                 "underdrive", "theta_max"});
    read_int(j, "tail", "joints", tail.joints);
    read_num(j, "tail", "pin_spacing", tail.pin_spacing);
    read_num(j, "tail", "clearance", tail.clearance);
    read_num(j, "tail", "segment", tail.segment);
    read_num(j, "tail", "servo_radius", tail.servo_radius);
    read_num(j, "tail", "cable_length", tail.cable_length);
    read_num(j, "tail", "underdrive", tail.underdrive);
    read_num(j, "tail", "theta_max", tail.theta_max);
}

void apply_masses(const json& j, Masses& masses) {
    expect_object(j, "masses");
    expect_keys(j, "masses", {"head", "torso", "legs", "tail_driven", "tail_tip"});
    read_num(j, "masses", "head", masses.head_kg);
    read_array(j, "masses", "torso", masses.torso_kg);
    read_array(j, "masses", "legs", masses.leg_kg);
    read_num(j, "masses", "tail_driven", masses.tail_driven_kg);
    read_num(j, "masses", "tail_tip", masses.tail_tip_kg);
}

void apply_mounts(const json& j, Mounts& mounts) {
    expect_object(j, "mounts");
    expect_keys(j, "mounts", {"lateral", "hind_x", "front_x", "tail_x"});
    read_num(j, "mounts", "lateral", mounts.lateral_mm);
    read_num(j, "mounts", "hind_x", mounts.hind_x_mm);
    read_num(j, "mounts", "front_x", mounts.front_x_mm);
    read_num(j, "mounts", "tail_x", mounts.tail_x_mm);
}

void apply_gait(const json& j, GaitParams& gait) {
    expect_object(j, "gait");
    expect_keys(j, "gait",
                {"period_s", "duty", "offsets", "step_length", "step_height", "stance_out",
                 "stance_down", "spine_yaw_amp", "spine_pitch_amp", "tail_yaw_amp", "phase_shift",
                 "tail_drag"});
    read_num(j, "gait", "period_s", gait.period_s);
    read_num(j, "gait", "duty", gait.duty);
    read_array(j, "gait", "offsets", gait.offsets);
    read_num(j, "gait", "step_length", gait.step_length);
    read_num(j, "gait", "step_height", gait.step_height);
    read_num(j, "gait", "stance_out", gait.stance_out);
    read_num(j, "gait", "stance_down", gait.stance_down);
    read_num(j, "gait", "spine_yaw_amp", gait.spine_yaw_amp);
    read_num(j, "gait", "spine_pitch_amp", gait.spine_pitch_amp);
    read_num(j, "gait", "tail_yaw_amp", gait.tail_yaw_amp);
    read_num(j, "gait", "phase_shift", gait.phase_shift);
    read_bool(j, "gait", "tail_drag", gait.tail_drag);
}

void apply_stand(const json& j, StandParams& stand) {
    expect_object(j, "stand");
    expect_keys(j, "stand", {"hind_target", "front_fold", "pitch_total"});
    read_vec3(j, "stand", "hind_target", stand.hind_target);
    read_vec3(j, "stand", "front_fold", stand.front_fold);
    read_num(j, "stand", "pitch_total", stand.pitch_total);
}

void apply_swim(const json& j, SwimWaveParams& swim) {
    expect_object(j, "swim");
    expect_keys(j, "swim", {"c1", "c2", "wave_number", "omega", "body_length"});
    read_num(j, "swim", "c1", swim.c1);
    read_num(j, "swim", "c2", swim.c2);
    read_num(j, "swim", "wave_number", swim.wave_number);
    read_num(j, "swim", "omega", swim.omega);
    read_num(j, "swim", "body_length", swim.body_length);
}

void apply_sim(const json& j, SimParams& sim) {
    expect_object(j, "sim");
    expect_keys(j, "sim",
                {"dt", "duration_s", "contact_tol", "slip_tol", "drag_weight", "tilt_coeff",
                 "tilt_dip", "rise_rate"});
    read_num(j, "sim", "dt", sim.dt);
    read_num(j, "sim", "duration_s", sim.duration_s);
    read_num(j, "sim", "contact_tol", sim.contact_tol_mm);
    read_num(j, "sim", "slip_tol", sim.slip_tol_mm);
    read_num(j, "sim", "drag_weight", sim.drag_weight);
    read_num(j, "sim", "tilt_coeff", sim.tilt_coeff_per_mm);
    read_num(j, "sim", "tilt_dip", sim.tilt_dip_mm_per_mm);
    read_num(j, "sim", "rise_rate", sim.rise_rate_mm_s);
}

json to_json(const Config& c) {
    json j;
    j["leg"] = {{"hip_offset", c.model.geometry.leg.hip_offset},
                {"femur", c.model.geometry.leg.femur},
                {"tibia", c.model.geometry.leg.tibia},
                {"limits", limits_json(c.model.geometry.leg.limits)}};
    j["spine"] = {{"links", c.model.geometry.spine.links},
                  {"twists", c.model.geometry.spine.twists},
                  {"limits", limits_json(c.model.geometry.spine.limits)}};
    j["tail"] = {{"joints", c.model.geometry.tail.joints},
                 {"pin_spacing", c.model.geometry.tail.pin_spacing},
                 {"clearance", c.model.geometry.tail.clearance},
                 {"segment", c.model.geometry.tail.segment},
                 {"servo_radius", c.model.geometry.tail.servo_radius},
                 {"cable_length", c.model.geometry.tail.cable_length},
                 {"underdrive", c.model.geometry.tail.underdrive},
                 {"theta_max", c.model.geometry.tail.theta_max}};
    j["head_length"] = c.model.geometry.head_length;
    j["masses"] = {{"head", c.model.masses.head_kg},
                   {"torso", c.model.masses.torso_kg},
                   {"legs", c.model.masses.leg_kg},
                   {"tail_driven", c.model.masses.tail_driven_kg},
                   {"tail_tip", c.model.masses.tail_tip_kg}};
    j["mounts"] = {{"lateral", c.model.mounts.lateral_mm},
                   {"hind_x", c.model.mounts.hind_x_mm},
                   {"front_x", c.model.mounts.front_x_mm},
                   {"tail_x", c.model.mounts.tail_x_mm}};
    j["gait"] = {{"period_s", c.gait.period_s},
                 {"duty", c.gait.duty},
                 {"offsets", c.gait.offsets},
                 {"step_length", c.gait.step_length},
                 {"step_height", c.gait.step_height},
                 {"stance_out", c.gait.stance_out},
                 {"stance_down", c.gait.stance_down},
                 {"spine_yaw_amp", c.gait.spine_yaw_amp},
                 {"spine_pitch_amp", c.gait.spine_pitch_amp},
                 {"tail_yaw_amp", c.gait.tail_yaw_amp},
                 {"phase_shift", c.gait.phase_shift},
                 {"tail_drag", c.gait.tail_drag}};
    j["stand"] = {{"hind_target", std::array<double, 3>{c.stand.hind_target.x(),
                                                        c.stand.hind_target.y(),
                                                        c.stand.hind_target.z()}},
                  {"front_fold", std::array<double, 3>{c.stand.front_fold.x(),
                                                       c.stand.front_fold.y(),
                                                       c.stand.front_fold.z()}},
                  {"pitch_total", c.stand.pitch_total}};
    j["swim"] = {{"c1", c.swim.c1},
                 {"c2", c.swim.c2},
                 {"wave_number", c.swim.wave_number},
                 {"omega", c.swim.omega},
                 {"body_length", c.swim.body_length}};
    j["sim"] = {{"dt", c.sim.dt},
                {"duration_s", c.sim.duration_s},
                {"contact_tol", c.sim.contact_tol_mm},
                {"slip_tol", c.sim.slip_tol_mm},
                {"drag_weight", c.sim.drag_weight},
                {"tilt_coeff", c.sim.tilt_coeff_per_mm},
                {"tilt_dip", c.sim.tilt_dip_mm_per_mm},
                {"rise_rate", c.sim.rise_rate_mm_s}};
    return j;
}

} // namespace

void Config::validate() const {
    try {
        const LegGeometry& leg = model.geometry.leg;
        if (leg.hip_offset < 0.0 || leg.femur <= 0.0 || leg.tibia <= 0.0) {
            throw ConfigError("leg link lengths must be positive");
        }
        for (const auto& [lo, hi] : leg.limits) {
            if (lo > hi) throw ConfigError("leg limits must satisfy lo <= hi");
        }
        for (double link : model.geometry.spine.links) {
            if (link <= 0.0) throw ConfigError("spine links must be positive");
        }
        for (const auto& [lo, hi] : model.geometry.spine.limits) {
            if (lo > hi) throw ConfigError("spine limits must satisfy lo <= hi");
        }
        model.geometry.tail.validate();
        if (model.geometry.head_length < 0.0) throw ConfigError("head_length must be non-negative");
        if (model.masses.total() <= 0.0) throw ConfigError("total mass must be positive");
        for (double m : model.masses.torso_kg) {
            if (m < 0.0) throw ConfigError("masses must be non-negative");
        }
        for (double m : model.masses.leg_kg) {
            if (m < 0.0) throw ConfigError("masses must be non-negative");
        }
        if (model.masses.head_kg < 0.0 || model.masses.tail_driven_kg < 0.0 ||
            model.masses.tail_tip_kg < 0.0) {
            throw ConfigError("masses must be non-negative");
        }
        if (model.mounts.lateral_mm <= 0.0) throw ConfigError("mounts.lateral must be positive");
        gait.validate();
        stand.validate();
        swim.validate();
        sim.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

Config default_config() { return Config{}; }

Config parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_object(j, "config");
    expect_keys(j, "config",
                {"leg", "spine", "tail", "head_length", "masses", "mounts", "gait", "stand",
                 "swim", "sim"});

    Config c = default_config();
    if (j.contains("leg")) apply_leg(j["leg"], c.model.geometry.leg);
    if (j.contains("spine")) apply_spine(j["spine"], c.model.geometry.spine);
    if (j.contains("tail")) apply_tail(j["tail"], c.model.geometry.tail);
    if (j.contains("head_length")) {
        if (!j["head_length"].is_number()) throw ConfigError("head_length must be a number");
        c.model.geometry.head_length = j["head_length"].get<double>();
    }
    if (j.contains("masses")) apply_masses(j["masses"], c.model.masses);
    if (j.contains("mounts")) apply_mounts(j["mounts"], c.model.mounts);
    if (j.contains("gait")) apply_gait(j["gait"], c.gait);
    if (j.contains("stand")) apply_stand(j["stand"], c.stand);
    if (j.contains("swim")) apply_swim(j["swim"], c.swim);
    if (j.contains("sim")) apply_sim(j["sim"], c.sim);
    c.validate();
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_json(const Config& config) { return to_json(config).dump(2) + "\n"; }

} // namespace croc
