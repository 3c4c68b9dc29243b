#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>

#include "minsurf/sphere_grid.hpp"

namespace minsurf {

/// Support function h of a convex body restricted to the unit sphere, sampled
/// on a SphereGrid, with first/second covariant derivative caches in the
/// orthonormal tangent frame.
///
/// The coordinate frame is used globally with Christoffel corrections;
/// components are expressed in the orthonormal basis e_phi, e_lambda/sin(phi)
/// so that b_ij = h delta_ij + h_ij holds with a plain Kronecker delta.
class SupportSlice {
public:
    SupportSlice(GridPtr grid, Eigen::VectorXd h) : grid_(std::move(grid)), h_(std::move(h)) {
        if (h_.size() != grid_->num_nodes())
            throw ConfigError("SupportSlice: h size does not match grid");
        if (!h_.allFinite()) throw ConfigError("SupportSlice: h must be finite");
    }

    const SphereGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    const Eigen::VectorXd& h() const { return h_; }
    double h(int k) const { return h_[k]; }

    bool derivatives_ready() const { return derived_; }

    /// First covariant derivatives, orthonormal frame; column i = h_i.
    const Eigen::MatrixXd& h1() const { ensure(); return h1_; }
    /// Second covariant derivatives, orthonormal frame.
    /// n=2: column 0 = h_11. n=3: columns (h_11, h_12, h_22).
    const Eigen::MatrixXd& h2() const { ensure(); return h2_; }

    /// Symmetric (n-1)x(n-1) covariant Hessian at node k.
    Eigen::MatrixXd hess(int k) const {
        ensure();
        const int m = grid_->dim() - 1;
        Eigen::MatrixXd s(m, m);
        if (m == 1) {
            s(0, 0) = h2_(k, 0);
        } else {
            s(0, 0) = h2_(k, 0);
            s(0, 1) = s(1, 0) = h2_(k, 1);
            s(1, 1) = h2_(k, 2);
        }
        return s;
    }

    /// Populate the derivative caches.
    ///
    /// n = 2: spectral (or 4th-order central, per grid method) derivatives in
    /// theta. n = 3: 2nd-order central differences plus round-sphere
    /// Christoffel symbols, poles avoided by the half-cell offset.
    void covariant_derivatives() const {
        if (derived_) return;
        const int nn = grid_->num_nodes();
        const int m = grid_->dim() - 1;
        h1_.resize(nn, m);
        h2_.resize(nn, m == 1 ? 1 : 3);
        if (grid_->dim() == 2) {
            h1_.col(0) = grid_->dtheta1() * h_;
            h2_.col(0) = grid_->dtheta2() * h_;
        } else {
            const Eigen::VectorXd fp = grid_->d_phi(h_, 1);
            const Eigen::VectorXd fl = grid_->d_lambda(h_, 1);
            const Eigen::VectorXd fpp = grid_->d_phi(h_, 2);
            const Eigen::VectorXd fll = grid_->d_lambda(h_, 2);
            const Eigen::VectorXd fpl = grid_->d_mixed(h_, 1, 1);
            for (int k = 0; k < nn; ++k) {
                const double p = grid_->phi(grid_->node_phi(k));
                const double sp = std::sin(p), cotp = std::cos(p) / sp;
                h1_(k, 0) = fp[k];
                h1_(k, 1) = fl[k] / sp;
                // coordinate covariant Hessian -> orthonormal components
                h2_(k, 0) = fpp[k];
                h2_(k, 1) = (fpl[k] - cotp * fl[k]) / sp;
                h2_(k, 2) = fll[k] / (sp * sp) + cotp * fp[k];
            }
        }
        derived_ = true;
    }

    /// Translate the represented body by v: h <- h + <v, Y>. Derivative caches
    /// are invalidated. Curvature quantities are unchanged by construction.
    SupportSlice translated(const Eigen::VectorXd& v) const {
        if (v.size() != grid_->dim()) throw ConfigError("translated: bad vector size");
        Eigen::VectorXd hh = h_;
        for (int k = 0; k < grid_->num_nodes(); ++k) hh[k] += v.dot(grid_->direction(k));
        return SupportSlice(grid_, std::move(hh));
    }

private:
    void ensure() const { covariant_derivatives(); }

    GridPtr grid_;
    Eigen::VectorXd h_;
    mutable bool derived_ = false;
    mutable Eigen::MatrixXd h1_, h2_;
};

// -- common analytic support functions --------------------------------------

/// Ball of radius r (centered at the origin).
inline SupportSlice ball_slice(GridPtr grid, double r) {
    if (r <= 0) throw ConfigError("ball_slice: r must be positive");
    const int n = grid->num_nodes();
    return SupportSlice(std::move(grid), Eigen::VectorXd::Constant(n, r));
}

/// Support value of an axis-aligned ellipsoid with semi-axes a at direction y.
inline double ellipsoid_support(const Eigen::VectorXd& a, const Eigen::VectorXd& y) {
    double s = 0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * a[i] * y[i] * y[i];
    return std::sqrt(s);
}

/// Slice sampled from an arbitrary support function f(Y).
template <class F>
SupportSlice slice_from_function(GridPtr grid, F&& f) {
    Eigen::VectorXd h(grid->num_nodes());
    for (int k = 0; k < grid->num_nodes(); ++k) h[k] = f(grid->direction(k));
    return SupportSlice(std::move(grid), std::move(h));
}

/// Circle of radius r centered at c (n = 2 helper): h = <c, Y> + r.
inline SupportSlice circle_slice(GridPtr grid, double cx, double cy, double r) {
    if (grid->dim() != 2) throw ConfigError("circle_slice: needs an n=2 grid");
    if (r <= 0) throw ConfigError("circle_slice: radius must be positive");
    Eigen::VectorXd h(grid->num_nodes());
    for (int k = 0; k < grid->num_nodes(); ++k) {
        const double t = grid->theta(k);
        h[k] = cx * std::cos(t) + cy * std::sin(t) + r;
    }
    return SupportSlice(std::move(grid), std::move(h));
}

} // namespace minsurf
