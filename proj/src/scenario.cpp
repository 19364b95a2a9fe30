#include <croc/scenario.hpp>

#include <croc/batch.hpp>

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

namespace croc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Paper-reported reference ratios quoted in the reports for comparison; the
// asserted properties are directional only.
constexpr double kReferenceDisplacementRatio = 4.5625;  // 0.73 m / 0.16 m
constexpr double kReferenceReachRatio = 4.25;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("failed writing " + path.string());
}

std::string series_csv(const RunResult& run) {
    std::string csv = "t,displacement_mm,cog_height_mm,margin_mm\n";
    for (std::size_t i = 0; i < run.t.size(); ++i) {
        csv += fmt(run.t[i]) + ',' + fmt(run.displacement_mm[i]) + ',' +
               fmt(run.cog_height_mm[i]) + ',' + fmt(run.margin_mm[i]) + '\n';
    }
    return csv;
}

std::string frames_csv(const std::vector<CoordinationFrame>& frames) {
    std::string csv = "t";
    for (LegId leg : kAllLegs) {
        const std::string n = leg_name(leg);
        csv += "," + n + "_stance," + n + "_x," + n + "_y," + n + "_z";
    }
    csv += ",spine_yaw,spine_pitch,tail_yaw,tail_servo_deg,tail_pitch\n";
    for (const CoordinationFrame& f : frames) {
        csv += fmt(f.t);
        for (std::size_t i = 0; i < 4; ++i) {
            csv += ',';
            csv += f.stance[i] ? '1' : '0';
            csv += ',' + fmt(f.foot_targets[i].x()) + ',' + fmt(f.foot_targets[i].y()) + ',' +
                   fmt(f.foot_targets[i].z());
        }
        csv += ',' + fmt(f.spine_cmd.yaw_total) + ',' + fmt(f.spine_cmd.pitch_total) + ',' +
               fmt(f.tail_yaw) + ',' + fmt(f.tail_servo_deg) + ',' + fmt(f.tail_pitch) + '\n';
    }
    return csv;
}

json run_summary(const RunResult& run) {
    return json{{"samples", run.t.size()},
                {"total_displacement_m", run.total_displacement_m},
                {"min_margin_mm", run.min_margin_mm},
                {"cog_amplitude_mm", run.cog_amplitude_mm},
                {"fallen", run.fallen}};
}

void write_report(const fs::path& dir, const json& body, const Config& config) {
    json report = body;
    report["config"] = json::parse(config_json(config));
    write_text(dir / "report.json", report.dump(2) + "\n");
}

// The independent locomotion runs of a scenario, fanned out in parallel and
// written out serially in declaration order.
struct RunJob {
    std::string dir;   // subdirectory name
    Config config;
    std::optional<FaultSpec> fault;
    RunResult result;
};

void execute_jobs(std::vector<RunJob>& jobs, const fs::path& root) {
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    const auto mode = parallel_available() ? ExecutionMode::parallel : ExecutionMode::serial;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecutionMode::parallel)
#endif
    for (long long i = 0; i < static_cast<long long>(jobs.size()); ++i) {
        auto& job = jobs[static_cast<std::size_t>(i)];
        try {
            job.result = run_scenario(job.config.model, job.config.gait, job.fault,
                                      job.config.sim);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    for (const RunJob& job : jobs) {
        const fs::path dir = root / job.dir;
        fs::create_directories(dir);
        write_text(dir / "series.csv", series_csv(job.result));
    }
}

ScenarioOutcome scenario_stability(const Config& config, const fs::path& root) {
    std::vector<RunJob> jobs(2);
    jobs[0].dir = "tail_on";
    jobs[0].config = config;
    jobs[0].config.gait.tail_drag = true;
    jobs[1].dir = "tail_off";
    jobs[1].config = config;
    jobs[1].config.gait.tail_drag = false;
    execute_jobs(jobs, root);

    const RunResult& on = jobs[0].result;
    const RunResult& off = jobs[1].result;
    const bool margin_ok = on.min_margin_mm >= off.min_margin_mm;
    const bool amplitude_ok = on.cog_amplitude_mm < off.cog_amplitude_mm;

    const auto frames = frame_stream(config.model.geometry, jobs[0].config.gait, 0.0,
                                     config.sim.dt,
                                     static_cast<std::size_t>(std::lround(
                                         config.gait.period_s / config.sim.dt)) + 1,
                                     parallel_available() ? ExecutionMode::parallel
                                                          : ExecutionMode::serial);
    write_text(root / "frames.csv", frames_csv(frames));

    write_report(root,
                 json{{"scenario", "stability"},
                      {"runs", json{{"tail_on", run_summary(on)}, {"tail_off", run_summary(off)}}},
                      {"comparison",
                       json{{"min_margin_tail_on_mm", on.min_margin_mm},
                            {"min_margin_tail_off_mm", off.min_margin_mm},
                            {"margin_direction_ok", margin_ok},
                            {"cog_amplitude_tail_on_mm", on.cog_amplitude_mm},
                            {"cog_amplitude_tail_off_mm", off.cog_amplitude_mm},
                            {"amplitude_direction_ok", amplitude_ok}}}},
                 config);

    ScenarioOutcome out;
    out.name = "stability";
    out.fell = on.fallen || off.fallen;
    out.summary = "stability: min margin " + fmt(on.min_margin_mm) + " mm (tail) vs " +
                  fmt(off.min_margin_mm) + " mm (no tail); cog amplitude " +
                  fmt(on.cog_amplitude_mm) + " vs " + fmt(off.cog_amplitude_mm) + " mm";
    return out;
}

// Rigid-trunk condition: sway channels silenced and the tail carried straight
// instead of pressed to the ground, so the body rides on the legs alone.
Config uncoordinated(Config config) {
    config.gait.spine_yaw_amp = 0.0;
    config.gait.spine_pitch_amp = 0.0;
    config.gait.tail_yaw_amp = 0.0;
    config.gait.tail_drag = false;
    return config;
}

ScenarioOutcome scenario_displacement(const Config& config, const fs::path& root) {
    std::vector<RunJob> jobs(2);
    jobs[0].dir = "trunk_on";
    jobs[0].config = config;
    jobs[1].dir = "trunk_off";
    jobs[1].config = uncoordinated(config);
    execute_jobs(jobs, root);

    const double on = jobs[0].result.total_displacement_m;
    const double off = jobs[1].result.total_displacement_m;
    const double ratio = off != 0.0 ? on / off : std::numeric_limits<double>::infinity();

    write_report(
        root,
        json{{"scenario", "displacement"},
             {"runs", json{{"trunk_on", run_summary(jobs[0].result)},
                           {"trunk_off", run_summary(jobs[1].result)}}},
             {"comparison", json{{"displacement_on_m", on},
                                 {"displacement_off_m", off},
                                 {"ratio", ratio},
                                 {"reference_ratio", kReferenceDisplacementRatio},
                                 {"direction_ok", ratio > 1.0}}}},
        config);

    ScenarioOutcome out;
    out.name = "displacement";
    out.fell = jobs[0].result.fallen || jobs[1].result.fallen;
    out.summary = "displacement: " + fmt(on) + " m coordinated vs " + fmt(off) +
                  " m uncoordinated (ratio " + fmt(ratio) + ", reference " +
                  fmt(kReferenceDisplacementRatio) + ")";
    return out;
}

struct FaultCase {
    const char* label;
    FaultSpec spec;
};

constexpr std::array<FaultCase, 4> kFaultCases{{
    {"front_rotational", {LegId::LQ, FaultJoint::rotational}},
    {"front_pitching", {LegId::LQ, FaultJoint::pitching}},
    {"hind_rotational", {LegId::LH, FaultJoint::rotational}},
    {"hind_pitching", {LegId::LH, FaultJoint::pitching}},
}};

ScenarioOutcome scenario_fault(const Config& config, const fs::path& root) {
    // Every reduction is quoted against the single intact coordinated run, so
    // the trunk-off numbers fold in the cost of losing coordination itself —
    // the comparison the reference figures make.
    std::vector<RunJob> jobs;
    const Config off_config = uncoordinated(config);
    jobs.push_back({"baseline", config, std::nullopt, {}});
    for (const FaultCase& fc : kFaultCases) {
        jobs.push_back({std::string(fc.label) + "_trunk_on", config, fc.spec, {}});
        jobs.push_back({std::string(fc.label) + "_trunk_off", off_config, fc.spec, {}});
    }
    execute_jobs(jobs, root);

    const double base = jobs[0].result.total_displacement_m;

    json cases = json::object();
    bool all_ok = true;
    bool any_fell = jobs[0].result.fallen;
    std::string digest;
    for (std::size_t c = 0; c < kFaultCases.size(); ++c) {
        const RunResult& on = jobs[1 + 2 * c].result;
        const RunResult& off = jobs[2 + 2 * c].result;
        const double red_on =
            base > 0.0 ? 100.0 * (1.0 - on.total_displacement_m / base) : 100.0;
        const double red_off =
            base > 0.0 ? 100.0 * (1.0 - off.total_displacement_m / base) : 100.0;
        const bool ordering_ok = red_on < red_off;
        all_ok = all_ok && ordering_ok;
        any_fell = any_fell || on.fallen || off.fallen;
        cases[kFaultCases[c].label] =
            json{{"trunk_on", run_summary(on)},
                 {"trunk_off", run_summary(off)},
                 {"reduction_trunk_on_pct", red_on},
                 {"reduction_trunk_off_pct", red_off},
                 {"ordering_ok", ordering_ok}};
        digest += std::string(c == 0 ? "" : ", ") + kFaultCases[c].label + " " + fmt(red_on) +
                  "%<" + fmt(red_off) + "%";
    }

    const double front_pitch_off_fraction =
        base > 0.0 ? jobs[4].result.total_displacement_m / base : 0.0;
    write_report(root,
                 json{{"scenario", "fault"},
                      {"baseline", run_summary(jobs[0].result)},
                      {"cases", cases},
                      {"all_orderings_ok", all_ok},
                      {"front_pitching_trunk_off_fraction_of_baseline",
                       front_pitch_off_fraction}},
                 config);

    ScenarioOutcome out;
    out.name = "fault";
    out.fell = any_fell;
    out.summary = "fault reductions (with<without): " + digest;
    return out;
}

ScenarioOutcome scenario_stand(const Config& config, const fs::path& root) {
    const StandRun stand =
        run_stand(config.model, config.gait, config.stand, config.sim.duration_s, config.sim.dt);
    fs::create_directories(root / "stand");
    write_text(root / "stand" / "series.csv", series_csv(stand.run));

    const double ratio =
        stand.crawl_reach_mm != 0.0 ? stand.stand_reach_mm / stand.crawl_reach_mm : 0.0;
    write_report(root,
                 json{{"scenario", "stand"},
                      {"run", run_summary(stand.run)},
                      {"comparison", json{{"crawl_reach_mm", stand.crawl_reach_mm},
                                          {"stand_reach_mm", stand.stand_reach_mm},
                                          {"ratio", ratio},
                                          {"reference_ratio", kReferenceReachRatio},
                                          {"direction_ok", ratio > 3.0}}}},
                 config);

    ScenarioOutcome out;
    out.name = "stand";
    out.fell = stand.run.fallen;
    out.summary = "stand: reach " + fmt(stand.stand_reach_mm) + " mm vs crawl " +
                  fmt(stand.crawl_reach_mm) + " mm (ratio " + fmt(ratio) + ", reference " +
                  fmt(kReferenceReachRatio) + ")";
    return out;
}

ScenarioOutcome scenario_swim(const Config& config, const fs::path& root) {
    constexpr std::size_t kNx = 200;
    constexpr std::size_t kNt = 200;
    const auto mode = parallel_available() ? ExecutionMode::parallel : ExecutionMode::serial;
    const SwimGrid grid = swim_grid(config.swim, kNx, kNt, mode);

    std::string csv = "t,x,y\n";
    for (std::size_t ti = 0; ti < grid.nt; ++ti) {
        for (std::size_t xi = 0; xi < grid.nx; ++xi) {
            csv += fmt(grid.t[ti]) + ',' + fmt(grid.x[xi]) + ',' + fmt(grid.y[ti * grid.nx + xi]) +
                   '\n';
        }
    }
    write_text(root / "midline.csv", csv);

    double max_envelope_excess = 0.0;
    for (std::size_t ti = 0; ti < grid.nt; ++ti) {
        for (std::size_t xi = 0; xi < grid.nx; ++xi) {
            const double bound = swim_envelope(config.swim, grid.x[xi]);
            max_envelope_excess = std::max(
                max_envelope_excess, std::abs(grid.y[ti * grid.nx + xi]) - std::abs(bound));
        }
    }

    const double period = 2.0 * 3.14159265358979323846 / config.swim.omega;
    double periodicity_error = 0.0;
    for (std::size_t ti = 0; ti < grid.nt; ++ti) {
        for (std::size_t xi = 0; xi < grid.nx; ++xi) {
            const double a = swim_midline(config.swim, grid.x[xi], grid.t[ti]);
            const double b = swim_midline(config.swim, grid.x[xi], grid.t[ti] + period);
            periodicity_error = std::max(periodicity_error, std::abs(a - b));
        }
    }

    write_report(root,
                 json{{"scenario", "swim"},
                      {"grid", json{{"nx", kNx}, {"nt", kNt}}},
                      {"period_s", period},
                      {"max_envelope_excess_mm", max_envelope_excess},
                      {"envelope_ok", max_envelope_excess <= 0.0},
                      {"periodicity_max_abs_error_mm", periodicity_error}},
                 config);

    ScenarioOutcome out;
    out.name = "swim";
    out.summary = "swim: envelope excess " + fmt(max_envelope_excess) +
                  " mm, periodicity error " + fmt(periodicity_error) + " mm over " +
                  fmt(period) + " s";
    return out;
}

} // namespace

ScenarioOutcome run_scenario_family(const std::string& name, const Config& config,
                                    const std::string& out_dir) {
    config.validate();
    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw Error("cannot create output directory " + root.string() + ": " + ec.message());

    if (name == "stability") return scenario_stability(config, root);
    if (name == "displacement") return scenario_displacement(config, root);
    if (name == "fault") return scenario_fault(config, root);
    if (name == "stand") return scenario_stand(config, root);
    if (name == "swim") return scenario_swim(config, root);
    throw ConfigError("unknown scenario \"" + name +
                      "\" (expected stability|displacement|fault|stand|swim)");
}

} // namespace croc
