#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "minsurf/curvature.hpp"

namespace minsurf {

/// Ambient point of the level hypersurface with outward normal Y(theta).
struct SurfacePoint {
    Eigen::VectorXd x;     ///< ambient point
    int node = -1;         ///< grid node index
    double t = 0.0;        ///< height level (caller-supplied label)
};

/// x = h Y + sum_i h_i T_i; satisfies <x, Y> = h by construction.
inline SurfacePoint recover_point(const SupportSlice& slice, int node, double t = 0.0) {
    slice.covariant_derivatives();
    const SphereGrid& g = slice.grid();
    Eigen::VectorXd x = slice.h(node) * g.direction(node);
    for (int i = 0; i < g.dim() - 1; ++i) x += slice.h1()(node, i) * g.frame(node, i);
    return SurfacePoint{std::move(x), node, t};
}

/// Per-node gradient of u recovered from the height derivative of h.
struct GradientField {
    Eigen::MatrixXd du;      ///< row k = Du at node k (= Y / h_t)
    Eigen::VectorXd norm;    ///< |Du| = -1/h_t > 0
};

/// Du = Y / h_t with the orientation convention h_t < 0 (u = 1 on the inner
/// boundary, bodies shrink as t grows). Validates rather than auto-corrects.
inline GradientField reconstruct_gradient(const SphereGrid& grid, const Eigen::VectorXd& h_t) {
    if (h_t.size() != grid.num_nodes()) throw ConfigError("reconstruct_gradient: size mismatch");
    GradientField f;
    f.du.resize(grid.num_nodes(), grid.dim());
    f.norm.resize(grid.num_nodes());
    for (int k = 0; k < grid.num_nodes(); ++k) {
        if (!(h_t[k] < 0))
            throw OrientationError("reconstruct_gradient: h_t >= 0 at node " + std::to_string(k));
        f.du.row(k) = (grid.direction(k) / h_t[k]).transpose();
        f.norm[k] = -1.0 / h_t[k];
    }
    return f;
}

/// Ambient Hessian of u at one node, assembled from support-function data:
///
///   u_ab = sum_ij [-h_t^{-2} h_ti Y + h_t^{-1} T_i]_a b^{ij} [T_j - h_t^{-1} h_tj Y]_b
///          - h_t^{-3} h_tt Y_a Y_b,
///
/// symmetrized. h_ti components are in the orthonormal frame.
inline Eigen::MatrixXd reconstruct_hessian(const SupportSlice& slice, const CurvatureField& curv,
                                           int node, double h_t, const Eigen::VectorXd& h_ti,
                                           double h_tt) {
    const SphereGrid& g = slice.grid();
    const int n = g.dim(), m = n - 1;
    if (h_ti.size() != m) throw ConfigError("reconstruct_hessian: h_ti must have n-1 entries");
    if (!(h_t < 0)) throw OrientationError("reconstruct_hessian: h_t >= 0");

    const Eigen::VectorXd y = g.direction(node);
    const Eigen::MatrixXd binv = curv.binv_at(node);

    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd left = -h_ti[i] / (h_t * h_t) * y + g.frame(node, i) / h_t;
        for (int j = 0; j < m; ++j) {
            const Eigen::VectorXd right = g.frame(node, j) - h_ti[j] / h_t * y;
            u += binv(i, j) * left * right.transpose();
        }
    }
    u -= h_tt / (h_t * h_t * h_t) * y * y.transpose();
    return 0.5 * (u + u.transpose());
}

/// Residual of the minimal graph equation at one point given gradient and
/// Hessian: trace[(I - Du Du^T / (1+|Du|^2)) D2u].
inline double minimal_graph_trace(const Eigen::VectorXd& du, const Eigen::MatrixXd& hess) {
    const double w2 = 1.0 + du.squaredNorm();
    return hess.trace() - du.dot(hess * du) / w2;
}

} // namespace minsurf
