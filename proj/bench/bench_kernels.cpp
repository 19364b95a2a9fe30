// Serial-vs-parallel timing for the bulk kernels, with a bitwise equality
// check between the two modes on every workload.
#include <croc/batch.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

namespace {

using croc::ExecutionMode;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

bool bits_equal(const double* a, const double* b, std::size_t n) {
    return std::memcmp(a, b, n * sizeof(double)) == 0;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-16s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   bitwise %s\n",
                name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "equal" : "DIFFERENT");
}

} // namespace

int main() {
    const croc::LegGeometry leg;
    const croc::RobotGeometry geom;
    const croc::GaitParams gait;
    const croc::SwimWaveParams swim;

    std::printf("parallel backend: %s\n",
                croc::parallel_available() ? "OpenMP" : "unavailable (serial fallback)");

    std::mt19937_64 rng(12345);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    constexpr std::size_t kN = 200000;
    std::vector<croc::LegAngles> qs(kN);
    for (auto& q : qs) {
        q.hip_yaw = uniform(leg.limits[0].first, leg.limits[0].second);
        q.hip_pitch = uniform(leg.limits[1].first, leg.limits[1].second);
        q.knee_pitch = uniform(leg.limits[2].first, leg.limits[2].second);
        q.ankle_pitch = uniform(leg.limits[3].first, leg.limits[3].second);
    }

    const auto fk_serial = leg_fk_batch(leg, qs, ExecutionMode::serial);
    const auto fk_parallel = leg_fk_batch(leg, qs, ExecutionMode::parallel);
    bool fk_same = fk_serial.size() == fk_parallel.size();
    for (std::size_t i = 0; fk_same && i < fk_serial.size(); ++i) {
        fk_same = bits_equal(fk_serial[i].data(), fk_parallel[i].data(), 3);
    }
    report("leg_fk_batch",
           time_best_of(3, [&] { leg_fk_batch(leg, qs, ExecutionMode::serial); }),
           time_best_of(3, [&] { leg_fk_batch(leg, qs, ExecutionMode::parallel); }), fk_same);

    std::vector<croc::Vec3> targets(fk_serial);
    const auto ik_serial = leg_ik_batch(leg, targets, ExecutionMode::serial);
    const auto ik_parallel = leg_ik_batch(leg, targets, ExecutionMode::parallel);
    bool ik_same = ik_serial.size() == ik_parallel.size();
    for (std::size_t i = 0; ik_same && i < ik_serial.size(); ++i) {
        const auto a = ik_serial[i].angles.as_array();
        const auto b = ik_parallel[i].angles.as_array();
        ik_same = ik_serial[i].ok == ik_parallel[i].ok && bits_equal(a.data(), b.data(), 4);
    }
    report("leg_ik_batch",
           time_best_of(3, [&] { leg_ik_batch(leg, targets, ExecutionMode::serial); }),
           time_best_of(3, [&] { leg_ik_batch(leg, targets, ExecutionMode::parallel); }), ik_same);

    const auto sw_serial = swim_grid(swim, 600, 600, ExecutionMode::serial);
    const auto sw_parallel = swim_grid(swim, 600, 600, ExecutionMode::parallel);
    const bool sw_same = bits_equal(sw_serial.y.data(), sw_parallel.y.data(), sw_serial.y.size());
    report("swim_grid",
           time_best_of(3, [&] { swim_grid(swim, 600, 600, ExecutionMode::serial); }),
           time_best_of(3, [&] { swim_grid(swim, 600, 600, ExecutionMode::parallel); }), sw_same);

    constexpr std::size_t kFrames = 4000;
    const auto fr_serial = frame_stream(geom, gait, 0.0, 0.002, kFrames, ExecutionMode::serial);
    const auto fr_parallel = frame_stream(geom, gait, 0.0, 0.002, kFrames, ExecutionMode::parallel);
    bool fr_same = fr_serial.size() == fr_parallel.size();
    for (std::size_t i = 0; fr_same && i < fr_serial.size(); ++i) {
        for (std::size_t l = 0; fr_same && l < 4; ++l) {
            const auto a = fr_serial[i].leg_cmds[l].as_array();
            const auto b = fr_parallel[i].leg_cmds[l].as_array();
            fr_same = bits_equal(a.data(), b.data(), 4) &&
                      fr_serial[i].stance[l] == fr_parallel[i].stance[l];
        }
        fr_same = fr_same && fr_serial[i].tail_servo_deg == fr_parallel[i].tail_servo_deg;
    }
    report("frame_stream",
           time_best_of(3, [&] { frame_stream(geom, gait, 0.0, 0.002, kFrames,
                                              ExecutionMode::serial); }),
           time_best_of(3, [&] { frame_stream(geom, gait, 0.0, 0.002, kFrames,
                                              ExecutionMode::parallel); }), fr_same);

    return (fk_same && ik_same && sw_same && fr_same) ? 0 : 1;
}
