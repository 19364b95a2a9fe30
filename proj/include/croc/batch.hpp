#pragma once

#include <croc/gait.hpp>

#include <cstddef>
#include <vector>

namespace croc {

// Bulk kernels for the embarrassingly parallel workloads: large FK/IK sweeps,
// swim-wave grids, and gait frame streams. Every element is computed by the
// same scalar code path in both modes, so serial and parallel results are
// bitwise identical; serial stays as the reference implementation.
enum class ExecutionMode { serial, parallel };

// True when the parallel mode actually fans out (compiled with OpenMP).
bool parallel_available();

std::vector<Vec3> leg_fk_batch(const LegGeometry& geom, const std::vector<LegAngles>& q,
                               ExecutionMode mode);

struct BatchIkEntry {
    LegAngles angles{};
    bool ok = false;  // false when the target was outside the reachable annulus
};

std::vector<BatchIkEntry> leg_ik_batch(const LegGeometry& geom, const std::vector<Vec3>& targets,
                                       ExecutionMode mode);

// Midline samples y[ti * nx + xi] on the uniform grid x in [0, body_length],
// t in [0, 2pi/omega), both endpoints-inclusive in x and exclusive in t.
struct SwimGrid {
    std::size_t nx = 0;
    std::size_t nt = 0;
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> y;
};

SwimGrid swim_grid(const SwimWaveParams& params, std::size_t nx, std::size_t nt,
                   ExecutionMode mode);

// Coordination frames at t0 + k*dt for k in [0, count).
std::vector<CoordinationFrame> frame_stream(const RobotGeometry& geom, const GaitParams& gait,
                                            double t0, double dt, std::size_t count,
                                            ExecutionMode mode);

} // namespace croc
