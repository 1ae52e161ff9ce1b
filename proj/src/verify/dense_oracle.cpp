#include "fastpoisson/verify.hpp"

namespace fastpoisson::verify {

Eigen::MatrixXd fd2_matrix_1d(const GridSpec& spec) {
    const double dx = grid_dx(spec);
    const auto n = static_cast<Eigen::Index>(spec.n);
    const bool regular = spec.kind == GridKind::Regular;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);

    // Adds the contribution of the neighbour of row p that falls outside the
    // grid; `edge` is p itself, `mirror` the reflected interior point.
    auto closure = [&](Eigen::Index p, Eigen::Index wrap, Eigen::Index mirror) {
        switch (spec.bc) {
            case BoundaryCondition::Periodic: m(p, wrap) += 1.0; break;
            case BoundaryCondition::Dirichlet:
                if (!regular) m(p, p) -= 1.0;
                break;
            case BoundaryCondition::Neumann:
                if (regular)
                    m(p, mirror) += 1.0;
                else
                    m(p, p) += 1.0;
                break;
        }
    };
    for (Eigen::Index p = 0; p < n; ++p) {
        m(p, p) -= 2.0;
        if (p > 0)
            m(p, p - 1) += 1.0;
        else
            closure(p, n - 1, n > 1 ? 1 : 0);
        if (p + 1 < n)
            m(p, p + 1) += 1.0;
        else
            closure(p, 0, n > 1 ? n - 2 : 0);
    }
    return m / (dx * dx);
}

Eigen::MatrixXd fd2_matrix(const SolverConfig& config) {
    classify(config);
    const Extents e = config.extents();
    const auto total = static_cast<Eigen::Index>(e.size());
    const Index3 stride = natural_strides(e);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
    for (int a = 0; a < config.dims(); ++a) {
        const auto ax = static_cast<std::size_t>(a);
        const Eigen::MatrixXd m1 = fd2_matrix_1d(config.axes[ax]);
        for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) {
            const Index3 idx{i, j, k};
            const std::size_t row = i + stride[1] * j + stride[2] * k;
            const std::size_t base = row - idx[ax] * stride[ax];
            for (Eigen::Index q = 0; q < m1.cols(); ++q) {
                const double v = m1(static_cast<Eigen::Index>(idx[ax]), q);
                if (v != 0.0)
                    m(static_cast<Eigen::Index>(row),
                      static_cast<Eigen::Index>(base + static_cast<std::size_t>(q) * stride[ax])) += v;
            }
        });
    }
    return m;
}

Eigen::VectorXd null_weights(const SolverConfig& config) {
    const Extents e = config.extents();
    Eigen::VectorXd w(static_cast<Eigen::Index>(e.size()));
    std::array<std::vector<double>, kMaxDims> axis_w;
    for (std::size_t a = 0; a < kMaxDims; ++a) {
        axis_w[a].assign(e[a], 1.0);
        if (static_cast<int>(a) < config.dims()) {
            const auto& g = config.axes[a];
            if (g.bc == BoundaryCondition::Neumann && g.kind == GridKind::Regular) {
                axis_w[a].front() = 0.5;
                axis_w[a].back() = 0.5;
            }
        }
    }
    Eigen::Index p = 0;
    for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) {
        w(p++) = axis_w[0][i] * axis_w[1][j] * axis_w[2][k];
    });
    return w;
}

FieldBuffer<double> dense_oracle_solve(const SolverConfig& config, Field<const double> rhs) {
    if (config.approximation != Approximation::FiniteDifference2)
        throw ConfigError("dense oracle solves the fd2 system only");
    classify(config);
    const Extents e = config.extents();
    if (e.size() > kDenseOracleLimit)
        throw ConfigError("dense oracle limited to " + std::to_string(kDenseOracleLimit) +
                          " unknowns (got " + std::to_string(e.size()) + ")");
    if (!(rhs.extents() == e))
        throw ExtentError("dense oracle: rhs " + to_string(rhs.extents()) + " vs config " + to_string(e));

    Eigen::VectorXd g(static_cast<Eigen::Index>(e.size()));
    Eigen::Index p = 0;
    for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) { g(p++) = rhs(i, j, k); });

    Eigen::MatrixXd m = fd2_matrix(config);
    bool singular = true;
    for (const auto& axis : config.axes) singular = singular && axis.bc != BoundaryCondition::Dirichlet;
    if (singular) {
        const Eigen::VectorXd w = null_weights(config);
        g.array() -= w.dot(g) / w.sum();
        const double c = -m.diagonal().cwiseAbs().mean() / w.sum();
        m += c * Eigen::VectorXd::Ones(m.rows()) * w.transpose();
    }
    const Eigen::VectorXd phi = m.partialPivLu().solve(g);

    FieldBuffer<double> out(e);
    p = 0;
    for_each_index(e, [&](std::size_t i, std::size_t j, std::size_t k) { out(i, j, k) = phi(p++); });
    return out;
}

}  // namespace fastpoisson::verify
