#pragma once

#include <croc/types.hpp>

#include <span>
#include <utility>
#include <vector>

namespace croc {

// One row of a modified (proximal) D-H table. The link transform places the
// joint axis after the a_prev translation, so a_prev is the length of the link
// preceding the joint.
struct JointRow {
    double theta = 0.0;       // nominal joint angle (rad); substituted by q in chain_fk
    double d = 0.0;           // link offset (mm)
    double a_prev = 0.0;      // preceding link length (mm)
    double alpha_prev = 0.0;  // preceding link twist (rad)
};

// Rigid transform as a 4x4 homogeneous matrix.
// Invariants: bottom row is [0 0 0 1]; rotation block orthonormal with det +1.
struct Transform4 {
    Mat4 m = Mat4::Identity();

    static Transform4 identity() { return Transform4{}; }

    Mat3 rotation() const { return m.block<3, 3>(0, 0); }
    Vec3 translation() const { return m.block<3, 1>(0, 3); }

    // Checks both invariants to tol.
    bool valid(double tol = 1e-9) const;
};

Transform4 compose(const Transform4& a, const Transform4& b);

// Revolute chain: per-row fixed parameters plus symmetric joint limits.
// Limits are advisory for FK (violations are flags, not errors) so that fault
// scenarios can pin joints at arbitrary values.
struct KinematicChain {
    std::vector<JointRow> rows;
    std::vector<std::pair<double, double>> joint_limits;  // [lo, hi] rad per row

    std::size_t size() const { return rows.size(); }
    bool within_limits(std::span<const double> q) const;
};

// Single-link transform for the row with theta already set.
Transform4 link_transform(const JointRow& row);

// Product of the per-row link transforms with theta_i substituted by q[i].
// Throws ArityError when q.size() != chain.size().
Transform4 chain_fk(const KinematicChain& chain, std::span<const double> q);

// 3xN translation Jacobian by central differences, step in radians.
Eigen::Matrix<double, 3, Eigen::Dynamic> jacobian_numeric(const KinematicChain& chain,
                                                          std::span<const double> q,
                                                          double step = 1e-6);

} // namespace croc
