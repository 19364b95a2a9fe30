#include <croc/dh.hpp>

#include <cmath>

namespace croc {

bool Transform4::valid(double tol) const {
    if (std::abs(m(3, 0)) > tol || std::abs(m(3, 1)) > tol || std::abs(m(3, 2)) > tol ||
        std::abs(m(3, 3) - 1.0) > tol) {
        return false;
    }
    const Mat3 r = rotation();
    const Mat3 err = r.transpose() * r - Mat3::Identity();
    if (err.cwiseAbs().maxCoeff() > tol) return false;
    return r.determinant() > 0.0;
}

Transform4 compose(const Transform4& a, const Transform4& b) {
    Transform4 out;
    out.m = a.m * b.m;
    return out;
}

bool KinematicChain::within_limits(std::span<const double> q) const {
    if (q.size() != rows.size()) {
        throw ArityError("joint vector length " + std::to_string(q.size()) +
                         " does not match chain of " + std::to_string(rows.size()));
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i < joint_limits.size()) {
            if (q[i] < joint_limits[i].first || q[i] > joint_limits[i].second) return false;
        }
    }
    return true;
}

Transform4 link_transform(const JointRow& row) {
    const double ct = std::cos(row.theta);
    const double st = std::sin(row.theta);
    const double ca = std::cos(row.alpha_prev);
    const double sa = std::sin(row.alpha_prev);

    Transform4 t;
    t.m << ct,      -st,      0.0,  row.a_prev,
           st * ca,  ct * ca, -sa,  -row.d * sa,
           st * sa,  ct * sa,  ca,   row.d * ca,
           0.0,      0.0,      0.0,  1.0;
    return t;
}

Transform4 chain_fk(const KinematicChain& chain, std::span<const double> q) {
    if (q.size() != chain.rows.size()) {
        throw ArityError("joint vector length " + std::to_string(q.size()) +
                         " does not match chain of " + std::to_string(chain.rows.size()));
    }
    Transform4 acc;
    for (std::size_t i = 0; i < chain.rows.size(); ++i) {
        JointRow row = chain.rows[i];
        row.theta = q[i];
        acc = compose(acc, link_transform(row));
    }
    return acc;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> jacobian_numeric(const KinematicChain& chain,
                                                          std::span<const double> q,
                                                          double step) {
    if (q.size() != chain.rows.size()) {
        throw ArityError("joint vector length " + std::to_string(q.size()) +
                         " does not match chain of " + std::to_string(chain.rows.size()));
    }
    if (step <= 0.0) throw InvalidParameterError("finite-difference step must be positive");

    const auto n = static_cast<Eigen::Index>(q.size());
    Eigen::Matrix<double, 3, Eigen::Dynamic> jac(3, n);
    std::vector<double> work(q.begin(), q.end());
    for (Eigen::Index j = 0; j < n; ++j) {
        const double saved = work[static_cast<std::size_t>(j)];
        work[static_cast<std::size_t>(j)] = saved + step;
        const Vec3 plus = chain_fk(chain, work).translation();
        work[static_cast<std::size_t>(j)] = saved - step;
        const Vec3 minus = chain_fk(chain, work).translation();
        work[static_cast<std::size_t>(j)] = saved;
        jac.col(j) = (plus - minus) / (2.0 * step);
    }
    return jac;
}

} // namespace croc
