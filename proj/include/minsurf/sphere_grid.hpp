#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/fourier.hpp"

namespace minsurf {

/// Differencing scheme for periodic (n = 2) grids.
enum class DiffMethod { spectral, central4 };

/// Discretization of S^{n-1} with tangent-frame metadata.
///
/// n = 2: uniform periodic grid theta_k = 2*pi*k/res on the circle.
/// n = 3: latitude-longitude grid, res latitudes x 2*res longitudes,
///        poles avoided by a half-cell offset:
///        phi_i = (i + 1/2) * pi / res,  lambda_j = 2*pi*j / (2*res).
///
/// General grids for n >= 4 are not built; rotationally symmetric flows
/// bypass this module entirely.
class SphereGrid {
public:
    SphereGrid(int dim_n, int resolution, DiffMethod method = DiffMethod::spectral)
        : dim_n_(dim_n), res_(resolution), method_(method) {
        if (dim_n != 2 && dim_n != 3)
            throw ConfigError("SphereGrid: unsupported dimension n=" + std::to_string(dim_n) +
                              " (only n in {2,3})");
        if (resolution < 8)
            throw ConfigError("SphereGrid: resolution must be >= 8");
        if (dim_n == 2) {
            n_theta_ = res_;
            if (method_ == DiffMethod::spectral) {
                d1_ = fourier_diff1(n_theta_);
                d2_ = fourier_diff2(n_theta_);
            } else {
                d1_ = central4_diff1(n_theta_);
                d2_ = central4_diff2(n_theta_);
            }
        } else {
            n_phi_ = res_;
            n_lambda_ = 2 * res_;
            dphi_ = pi / n_phi_;
            dlambda_ = 2.0 * pi / n_lambda_;
        }
    }

    int dim() const { return dim_n_; }
    int resolution() const { return res_; }
    DiffMethod method() const { return method_; }

    int num_nodes() const { return dim_n_ == 2 ? n_theta_ : n_phi_ * n_lambda_; }
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    int n_lambda() const { return n_lambda_; }

    double theta(int k) const { return 2.0 * pi * k / n_theta_; }
    double phi(int i) const { return (i + 0.5) * dphi_; }
    double lambda(int j) const { return j * dlambda_; }

    int node_index(int i_phi, int j_lambda) const { return i_phi * n_lambda_ + j_lambda; }
    int node_phi(int k) const { return k / n_lambda_; }
    int node_lambda(int k) const { return k % n_lambda_; }

    /// Unit direction Y at node k.
    Eigen::VectorXd direction(int k) const {
        Eigen::VectorXd y(dim_n_);
        if (dim_n_ == 2) {
            const double t = theta(k);
            y << std::cos(t), std::sin(t);
        } else {
            const double p = phi(node_phi(k)), l = lambda(node_lambda(k));
            y << std::sin(p) * std::cos(l), std::sin(p) * std::sin(l), std::cos(p);
        }
        return y;
    }

    /// Orthonormal tangent frame vector e_i (i = 0..n-2) at node k.
    /// n = 2: e_0 = dY/dtheta. n = 3: e_0 = d/dphi, e_1 = (1/sin phi) d/dlambda.
    Eigen::VectorXd frame(int k, int i) const {
        Eigen::VectorXd t(dim_n_);
        if (dim_n_ == 2) {
            const double th = theta(k);
            t << -std::sin(th), std::cos(th);
        } else {
            const double p = phi(node_phi(k)), l = lambda(node_lambda(k));
            if (i == 0)
                t << std::cos(p) * std::cos(l), std::cos(p) * std::sin(l), -std::sin(p);
            else
                t << -std::sin(l), std::cos(l), 0.0;
        }
        return t;
    }

    /// Periodic differentiation matrices (n = 2 only).
    const Eigen::MatrixXd& dtheta1() const { return d1_; }
    const Eigen::MatrixXd& dtheta2() const { return d2_; }

    // -- n = 3 partial-derivative operators ---------------------------------
    //
    // Scalar fields are differentiated with 2nd-order central stencils.
    // The latitude direction uses pole-wrap ghost rows: a smooth function on
    // the sphere satisfies f(-phi, lambda) = f(phi, lambda + pi), which the
    // half-cell offset turns into plain row copies with a half-turn shift.
    // Mixed partials always differentiate in lambda first; the resulting
    // field again wraps like a scalar, so no parity bookkeeping is needed.

    Eigen::VectorXd d_lambda(const Eigen::VectorXd& f, int order = 1) const {
        require3();
        Eigen::VectorXd g(num_nodes());
        for (int i = 0; i < n_phi_; ++i)
            for (int j = 0; j < n_lambda_; ++j) {
                auto at = [&](int jj) { return f[node_index(i, (jj % n_lambda_ + n_lambda_) % n_lambda_)]; };
                double v = 0;
                switch (order) {
                    case 1: v = (at(j + 1) - at(j - 1)) / (2 * dlambda_); break;
                    case 2: v = (at(j + 1) - 2 * at(j) + at(j - 1)) / (dlambda_ * dlambda_); break;
                    case 3:
                        v = (at(j + 2) - 2 * at(j + 1) + 2 * at(j - 1) - at(j - 2)) /
                            (2 * dlambda_ * dlambda_ * dlambda_);
                        break;
                    default: throw ConfigError("d_lambda: order 1..3");
                }
                g[node_index(i, j)] = v;
            }
        return g;
    }

    Eigen::VectorXd d_phi(const Eigen::VectorXd& f, int order = 1) const {
        require3();
        Eigen::VectorXd g(num_nodes());
        for (int i = 0; i < n_phi_; ++i)
            for (int j = 0; j < n_lambda_; ++j) {
                auto at = [&](int ii) { return wrap_phi(f, ii, j); };
                double v = 0;
                switch (order) {
                    case 1: v = (at(i + 1) - at(i - 1)) / (2 * dphi_); break;
                    case 2: v = (at(i + 1) - 2 * at(i) + at(i - 1)) / (dphi_ * dphi_); break;
                    case 3:
                        v = (at(i + 2) - 2 * at(i + 1) + 2 * at(i - 1) - at(i - 2)) /
                            (2 * dphi_ * dphi_ * dphi_);
                        break;
                    default: throw ConfigError("d_phi: order 1..3");
                }
                g[node_index(i, j)] = v;
            }
        return g;
    }

    /// Mixed partial with n_lambda lambda-derivatives applied first.
    Eigen::VectorXd d_mixed(const Eigen::VectorXd& f, int order_phi, int order_lambda) const {
        Eigen::VectorXd g = f;
        if (order_lambda > 0) g = d_lambda(g, order_lambda);
        if (order_phi > 0) g = d_phi(g, order_phi);
        return g;
    }

private:
    void require3() const {
        if (dim_n_ != 3) throw ConfigError("operation requires an n=3 grid");
    }

    // Pole-wrapped sample: rows i < 0 and i >= n_phi reflect across the poles
    // with a half-turn in lambda.
    double wrap_phi(const Eigen::VectorXd& f, int i, int j) const {
        int jj = j;
        while (i < 0 || i >= n_phi_) {
            if (i < 0) i = -1 - i;
            else i = 2 * n_phi_ - 1 - i;
            jj += n_lambda_ / 2;
        }
        jj = (jj % n_lambda_ + n_lambda_) % n_lambda_;
        return f[node_index(i, jj)];
    }

    int dim_n_;
    int res_;
    DiffMethod method_;
    int n_theta_ = 0;
    int n_phi_ = 0, n_lambda_ = 0;
    double dphi_ = 0, dlambda_ = 0;
    Eigen::MatrixXd d1_, d2_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Build a sphere grid; the usual entry point.
inline GridPtr build_grid(int dim_n, int resolution, DiffMethod method = DiffMethod::spectral) {
    return std::make_shared<const SphereGrid>(dim_n, resolution, method);
}

} // namespace minsurf
