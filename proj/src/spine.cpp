#include <croc/spine.hpp>

#include <algorithm>
#include <cmath>

namespace croc {

KinematicChain SpineGeometry::chain() const {
    KinematicChain c;
    c.rows.reserve(links.size());
    for (std::size_t i = 0; i < links.size(); ++i) {
        c.rows.push_back(JointRow{0.0, 0.0, links[i], twists[i]});
    }
    c.joint_limits.assign(limits.begin(), limits.end());
    return c;
}

double SpineGeometry::total_length() const {
    double sum = 0.0;
    for (double l : links) sum += l;
    return sum;
}

Transform4 spine_fk(const SpineGeometry& geom, const SpineAngles& q) {
    return chain_fk(geom.chain(), q);
}

SpineAngles command_to_angles(const SpineGeometry& geom, const SpineCommand& cmd) {
    SpineAngles q{};
    const double yaw_each = cmd.yaw_total / static_cast<double>(SpineGeometry::yaw_joints.size());
    const double pitch_each =
        cmd.pitch_total / static_cast<double>(SpineGeometry::pitch_joints.size());
    for (int j : SpineGeometry::yaw_joints) q[static_cast<std::size_t>(j)] = yaw_each;
    for (int j : SpineGeometry::pitch_joints) q[static_cast<std::size_t>(j)] = pitch_each;

    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < geom.limits[i].first || q[i] > geom.limits[i].second) {
            throw LimitError("spine joint " + std::to_string(i + 1) + " command " +
                             std::to_string(q[i]) + " rad outside [" +
                             std::to_string(geom.limits[i].first) + ", " +
                             std::to_string(geom.limits[i].second) + "]");
        }
    }
    return q;
}

SpineIkResult spine_ik(const SpineGeometry& geom, const Vec3& target, const SpineAngles& seed) {
    const double reach = geom.total_length();
    if (target.norm() > reach) {
        throw ReachabilityError("spine target at " + std::to_string(target.norm()) +
                                    " mm outside the " + std::to_string(reach) + " mm reach",
                                target.norm(), 0.0, reach);
    }

    const KinematicChain chain = geom.chain();
    auto clamp_q = [&geom](SpineAngles& q) {
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] = std::clamp(q[i], geom.limits[i].first, geom.limits[i].second);
        }
    };

    auto error_vec = [&](const SpineAngles& angles) {
        return Vec3(target - chain_fk(chain, angles).translation());
    };

    constexpr double tol = 1e-3;
    constexpr int max_iter = 200;

    // One damped-least-squares descent from a fixed start. Steps that leave
    // the limit box are clamped, which can stall the descent against a
    // boundary; the caller compensates with restarts.
    auto descend = [&](SpineAngles q, int& iters_used, SpineAngles& best,
                       double& best_err) {
        clamp_q(q);
        double err = error_vec(q).norm();
        if (err < best_err) {
            best = q;
            best_err = err;
        }
        double lambda = 1.0;  // damping in mm
        int iter = 0;
        for (; iter < max_iter && err >= tol; ++iter) {
            const Vec3 e = error_vec(q);
            const auto jac = jacobian_numeric(chain, q);
            auto solve_step = [&](const Eigen::Matrix<double, 3, Eigen::Dynamic>& j) {
                const Mat3 jjt = j * j.transpose() + lambda * lambda * Mat3::Identity();
                return Eigen::VectorXd(j.transpose() * jjt.ldlt().solve(e));
            };

            const Eigen::VectorXd dq = solve_step(jac);
            SpineAngles trial = q;
            for (std::size_t i = 0; i < trial.size(); ++i) {
                trial[i] += dq(static_cast<Eigen::Index>(i));
            }
            clamp_q(trial);
            double trial_err = error_vec(trial).norm();

            if (trial_err >= err) {
                // The raw step may have been truncated by the limit box. Re-solve
                // with the truncated joints frozen so the remaining ones absorb
                // the whole correction instead of fighting the boundary.
                auto reduced = jac;
                bool any_frozen = false;
                for (std::size_t i = 0; i < trial.size(); ++i) {
                    const auto ei = static_cast<Eigen::Index>(i);
                    if (trial[i] != q[i] + dq(ei)) {
                        reduced.col(ei).setZero();
                        any_frozen = true;
                    }
                }
                if (any_frozen) {
                    const Eigen::VectorXd dq2 = solve_step(reduced);
                    SpineAngles trial2 = q;
                    for (std::size_t i = 0; i < trial2.size(); ++i) {
                        trial2[i] += dq2(static_cast<Eigen::Index>(i));
                    }
                    clamp_q(trial2);
                    const double err2 = error_vec(trial2).norm();
                    if (err2 < trial_err) {
                        trial = trial2;
                        trial_err = err2;
                    }
                }
            }

            if (trial_err < err) {
                q = trial;
                err = trial_err;
                lambda = std::max(lambda * 0.5, 1e-9);
                if (err < best_err) {
                    best = q;
                    best_err = err;
                }
            } else {
                lambda = std::min(lambda * 2.0, 1e9);
            }
        }
        iters_used += iter;
    };

    SpineIkResult out;
    SpineAngles best = seed;
    clamp_q(best);
    double best_err = error_vec(best).norm();
    int iters = 0;
    descend(seed, iters, best, best_err);

    if (best_err >= tol) {
        // A clamped descent can wedge against the limit box, so restart from a
        // fixed fan of bent postures (both lateral and both sagittal senses);
        // the set is deterministic and the best result over all starts wins.
        const double yx = std::atan2(target.y(), target.x());
        const double px = std::atan2(-target.z(), target.head<2>().norm());
        const std::array<SpineAngles, 5> restarts{{
            {yx / 3.0, px / 2.0, yx / 3.0, px / 2.0, yx / 3.0},
            {0.25, 0.6, 0.25, 0.6, 0.25},
            {0.25, -0.6, 0.25, -0.6, 0.25},
            {-0.25, 0.6, -0.25, 0.6, -0.25},
            {-0.25, -0.6, -0.25, -0.6, -0.25},
        }};
        for (const SpineAngles& s : restarts) {
            if (best_err < tol) break;
            descend(s, iters, best, best_err);
        }
    }

    out.angles = best;
    out.position_error_mm = best_err;
    out.converged = best_err < tol;
    out.iterations = iters;
    return out;
}

} // namespace croc
