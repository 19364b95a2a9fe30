#include <croc/batch.hpp>

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace croc {

bool parallel_available() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

namespace {

// Shared fan-out: identical per-index work in both modes keeps the outputs
// bitwise equal; OpenMP only changes who computes which index.
template <typename Fn>
void for_each_index(std::size_t n, ExecutionMode mode, Fn&& fn) {
    if (mode == ExecutionMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace

std::vector<Vec3> leg_fk_batch(const LegGeometry& geom, const std::vector<LegAngles>& q,
                               ExecutionMode mode) {
    std::vector<Vec3> out(q.size());
    for_each_index(q.size(), mode, [&](std::size_t i) { out[i] = leg_fk(geom, q[i]).position; });
    return out;
}

std::vector<BatchIkEntry> leg_ik_batch(const LegGeometry& geom, const std::vector<Vec3>& targets,
                                       ExecutionMode mode) {
    std::vector<BatchIkEntry> out(targets.size());
    for_each_index(targets.size(), mode, [&](std::size_t i) {
        try {
            out[i].angles = leg_ik(geom, targets[i]).knee_positive.angles;
            out[i].ok = true;
        } catch (const Error&) {
            out[i].ok = false;
        }
    });
    return out;
}

SwimGrid swim_grid(const SwimWaveParams& params, std::size_t nx, std::size_t nt,
                   ExecutionMode mode) {
    if (nx < 2 || nt < 1) throw InvalidParameterError("swim grid needs nx >= 2 and nt >= 1");
    params.validate();

    SwimGrid grid;
    grid.nx = nx;
    grid.nt = nt;
    grid.x.resize(nx);
    grid.t.resize(nt);
    grid.y.resize(nx * nt);

    const double period = 2.0 * 3.14159265358979323846 / params.omega;
    for (std::size_t i = 0; i < nx; ++i) {
        grid.x[i] = params.body_length * static_cast<double>(i) / static_cast<double>(nx - 1);
    }
    for (std::size_t j = 0; j < nt; ++j) {
        grid.t[j] = period * static_cast<double>(j) / static_cast<double>(nt);
    }

    for_each_index(nx * nt, mode, [&](std::size_t idx) {
        const std::size_t ti = idx / nx;
        const std::size_t xi = idx % nx;
        grid.y[idx] = swim_midline(params, grid.x[xi], grid.t[ti]);
    });
    return grid;
}

std::vector<CoordinationFrame> frame_stream(const RobotGeometry& geom, const GaitParams& gait,
                                            double t0, double dt, std::size_t count,
                                            ExecutionMode mode) {
    if (dt <= 0.0) throw InvalidParameterError("frame stream dt must be positive");
    gait.validate();
    std::vector<CoordinationFrame> out(count);
    // A limit violation can depend on the phase, so any element may throw;
    // capture the first error instead of letting it escape a parallel region.
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    for_each_index(count, mode, [&](std::size_t k) {
        try {
            out[k] = coordination_frame(geom, gait, t0 + static_cast<double>(k) * dt);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

} // namespace croc
