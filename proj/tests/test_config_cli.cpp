#include <doctest.h>

#include <croc/config.hpp>
#include <croc/types.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

using namespace croc;
namespace fs = std::filesystem;
using nlohmann::json;

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

// Runs the command-line binary named by CROCKIN_BIN with stderr folded into
// the captured stream, so tests can assert on exit codes and JSON output.
CommandResult run_cli(const std::string& args) {
    const char* bin = std::getenv("CROCKIN_BIN");
    REQUIRE_MESSAGE(bin != nullptr,
                    "CROCKIN_BIN must point at the command-line binary");
    const std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path temp_dir() {
    fs::path dir =
        fs::temp_directory_path() / ("croc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults echo to JSON and parse back identically") {
    const Config def = default_config();
    const std::string echoed = config_json(def);
    const Config round = parse_config(echoed);
    CHECK(config_json(round) == echoed);
    // The echo is byte-stable.
    CHECK(config_json(def) == echoed);
}

TEST_CASE("a partial document overrides only the named fields") {
    const Config c = parse_config(R"({"gait": {"duty": 0.5}})");
    CHECK(c.gait.duty == 0.5);
    CHECK(c.gait.period_s == default_config().gait.period_s);
    CHECK(c.model.geometry.leg.tibia ==
          default_config().model.geometry.leg.tibia);

    const Config deep = parse_config(
        R"({"leg": {"tibia": 95.0}, "sim": {"drag_weight": 7.5}})");
    CHECK(deep.model.geometry.leg.tibia == 95.0);
    CHECK(deep.sim.drag_weight == 7.5);
    CHECK(deep.model.geometry.leg.femur ==
          default_config().model.geometry.leg.femur);
}

TEST_CASE("every modified field survives an echo round trip") {
    Config c = default_config();
    c.gait.period_s = 3.5;
    c.gait.offsets = {0.1, 0.6, 0.7, 0.2};
    c.gait.tail_drag = false;
    c.model.geometry.tail.joints = 5;
    c.model.geometry.spine.links[0] = 51.25;
    c.model.masses.torso_kg[3] = 0.42;
    c.sim.rise_rate_mm_s = 55.0;
    c.swim.c2 = 0.25;
    c.stand.pitch_total = 1.25;
    const Config round = parse_config(config_json(c));
    CHECK(config_json(round) == config_json(c));
    CHECK(round.model.geometry.tail.joints == 5);
    CHECK(round.gait.offsets[2] == 0.7);
    CHECK(round.sim.rise_rate_mm_s == 55.0);
}

TEST_CASE("unknown keys are rejected wherever they appear") {
    CHECK_THROWS_AS(parse_config(R"({"gaits": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gait": {"dty": 0.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"leg": {"shin": 89.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sim": {"Dt": 0.01}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tail": {"segments": 6}})"), ConfigError);
}

TEST_CASE("malformed documents and wrong shapes are rejected") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gait": {"offsets": [0.0, 0.5]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gait": {"duty": "wide"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tail": {"joints": 5.5}})"), ConfigError);
}

TEST_CASE("semantic validation failures surface as config errors") {
    CHECK_THROWS_AS(parse_config(R"({"gait": {"duty": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sim": {"dt": -0.01}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tail": {"joints": 0}})"), ConfigError);
}

TEST_CASE("loading a missing file reports a config error") {
    CHECK_THROWS_AS(load_config("/nonexistent/croc.json"), ConfigError);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("forward pose subcommand prints the leg endpoint") {
    const CommandResult r = run_cli("fk leg 0 0 0 0");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["position_mm"][0].get<double>() == doctest::Approx(245.0));
    CHECK(doc["position_mm"][1].get<double>() == doctest::Approx(0.0));
    CHECK(doc["position_mm"][2].get<double>() == doctest::Approx(0.0));
    // The fully straight knee sits below the knee joint's lower bound, and
    // the report says so rather than pretending the pose is reachable.
    CHECK_FALSE(doc["within_limits"].get<bool>());
}

TEST_CASE("degree input flag converts before solving") {
    const CommandResult rad = run_cli("fk leg 0 0 1.5707963267948966 0");
    const CommandResult deg = run_cli("--degrees fk leg 0 0 90 0");
    REQUIRE(rad.exit_code == 0);
    REQUIRE(deg.exit_code == 0);
    const json a = json::parse(rad.out);
    const json b = json::parse(deg.out);
    for (int i = 0; i < 3; ++i) {
        CHECK(a["position_mm"][i].get<double>() ==
              doctest::Approx(b["position_mm"][i].get<double>()).epsilon(1e-9));
    }
}

TEST_CASE("inverse subcommand reports both branches for a reachable point") {
    const CommandResult r = run_cli("ik leg 130 0 110");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["knee_positive"]["angles"]["hip_yaw"].get<double>() ==
          doctest::Approx(0.0));
    CHECK(doc["knee_positive"]["angles"]["hip_pitch"].get<double>() ==
          doctest::Approx(0.2818449200995181).epsilon(1e-9));
    CHECK(doc["knee_positive"]["angles"]["knee_pitch"].get<double>() ==
          doctest::Approx(1.5457741181675795).epsilon(1e-9));
    CHECK(doc["knee_positive"]["within_limits"].get<bool>());
    CHECK_FALSE(doc["knee_negative"]["within_limits"].get<bool>());
    CHECK_FALSE(doc["hip_yaw_singular"].get<bool>());
}

TEST_CASE("unreachable inverse target exits with the kinematics code") {
    const CommandResult r = run_cli("ik leg 500 0 0");
    CHECK(r.exit_code == 3);
}

TEST_CASE("trunk inverse converges and echoes its error") {
    const CommandResult r = run_cli("ik spine 261.49 54.82 -85.86");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["converged"].get<bool>());
    CHECK(doc["position_error_mm"].get<double>() < 1e-3);
    CHECK(doc["angles"].size() == 5);
}

TEST_CASE("config file changes the geometry the solvers use") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "long_shin.json";
    write_file(cfg, R"({"leg": {"tibia": 100.0}})");

    const CommandResult r = run_cli("--config " + cfg.string() + " fk leg 0 0 0 0");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["position_mm"][0].get<double>() == doctest::Approx(256.0));
    fs::remove_all(dir);
}

TEST_CASE("environment variable supplies the config when no flag is given") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "env.json";
    write_file(cfg, R"({"leg": {"tibia": 100.0}})");

    ::setenv("CROC_KIN_CONFIG", cfg.string().c_str(), 1);
    const CommandResult env_used = run_cli("fk leg 0 0 0 0");
    REQUIRE(env_used.exit_code == 0);
    CHECK(json::parse(env_used.out)["position_mm"][0].get<double>() ==
          doctest::Approx(256.0));

    // An explicit flag wins over the environment.
    const fs::path other = dir / "flag.json";
    write_file(other, R"({"leg": {"tibia": 89.0}})");
    const CommandResult flag_wins =
        run_cli("--config " + other.string() + " fk leg 0 0 0 0");
    REQUIRE(flag_wins.exit_code == 0);
    CHECK(json::parse(flag_wins.out)["position_mm"][0].get<double>() ==
          doctest::Approx(245.0));

    // A broken environment path is a config failure.
    ::setenv("CROC_KIN_CONFIG", "/nonexistent/croc.json", 1);
    CHECK(run_cli("fk leg 0 0 0 0").exit_code == 2);
    ::unsetenv("CROC_KIN_CONFIG");
    fs::remove_all(dir);
}

TEST_CASE("bad config files and unknown scenarios exit with the config code") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "broken.json";
    write_file(cfg, R"({"gait": {"duty": 2.0}})");
    CHECK(run_cli("--config " + cfg.string() + " fk leg 0 0 0 0").exit_code == 2);
    CHECK(run_cli("scenario no_such_family").exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("scenario artifacts are byte-identical across reruns") {
    const fs::path dir = temp_dir();
    const fs::path out_a = dir / "a";
    const fs::path out_b = dir / "b";
    const CommandResult a =
        run_cli("--out " + out_a.string() + " scenario swim");
    const CommandResult b =
        run_cli("--out " + out_b.string() + " scenario swim");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);

    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(out_a / "swim")) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), out_a);
        CHECK(read_file(entry.path()) == read_file(out_b / rel));
        ++compared;
    }
    CHECK(compared >= 2);  // at least the report and the midline series

    // The report embeds the exact config echo.
    const json report = json::parse(read_file(out_a / "swim" / "report.json"));
    const std::string echoed = report["config"].dump(2) + "\n";
    CHECK(echoed == config_json(default_config()));
    fs::remove_all(dir);
}

}  // TEST_SUITE
