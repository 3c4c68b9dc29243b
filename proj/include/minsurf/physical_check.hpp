#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "minsurf/fourier.hpp"
#include "minsurf/reconstruct.hpp"
#include "minsurf/ring_solver.hpp"

namespace minsurf {

/// Evaluates u at arbitrary points of the ring by locating the level through
/// the point: u(x) is the root in t of  max_theta [ <x, Y(theta)> - h(theta, t) ].
/// h is interpolated in t with cubic Hermite (values + cached h_t) and the
/// theta maximum is refined with the trigonometric interpolant of each row.
class LevelLocator {
public:
    explicit LevelLocator(const GridSolution& sol) : sol_(&sol) {
        const int nt = sol.n_t();
        rows_.reserve(nt + 1);
        rows_t_.reserve(nt + 1);
        for (int j = 0; j <= nt; ++j) {
            rows_.emplace_back(Eigen::VectorXd(sol.h.col(j)));
            rows_t_.emplace_back(Eigen::VectorXd(sol.h_t.col(j)));
        }
        cos_.resize(sol.n_theta());
        sin_.resize(sol.n_theta());
        for (int k = 0; k < sol.n_theta(); ++k) {
            cos_[k] = std::cos(sol.grid->theta(k));
            sin_[k] = std::sin(sol.grid->theta(k));
        }
    }

    /// Support value h(theta, t) (Hermite in t of the row interpolants).
    double support(double theta, double t) const {
        const auto [j, s] = bracket(t);
        const double dt = sol_->scheme.dt;
        const double y0 = rows_[j].eval(theta), y1 = rows_[j + 1].eval(theta);
        const double m0 = rows_t_[j].eval(theta), m1 = rows_t_[j + 1].eval(theta);
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * dt * m0 +
               (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * dt * m1;
    }

    double support_dtheta(double theta, double t) const {
        const auto [j, s] = bracket(t);
        const double dt = sol_->scheme.dt;
        const double y0 = rows_[j].eval(theta, 1), y1 = rows_[j + 1].eval(theta, 1);
        const double m0 = rows_t_[j].eval(theta, 1), m1 = rows_t_[j + 1].eval(theta, 1);
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * dt * m0 +
               (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * dt * m1;
    }

    /// d/dt of the Hermite-in-t support interpolant.
    double support_dt(double theta, double t) const {
        const auto [j, s] = bracket(t);
        const double dt = sol_->scheme.dt;
        const double y0 = rows_[j].eval(theta), y1 = rows_[j + 1].eval(theta);
        const double m0 = rows_t_[j].eval(theta), m1 = rows_t_[j + 1].eval(theta);
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * dt * m0 +
                (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * dt * m1) / dt;
    }

    /// max over theta of <x, Y(theta)> - h(theta, t): cheap variant (discrete
    /// scan plus parabolic vertex), used inside the bisection phase.
    double separation_cheap(const Eigen::Vector2d& x, double t, int* argmax = nullptr) const {
        const int n = sol_->n_theta();
        int k0 = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            const double q = x[0] * cos_[k] + x[1] * sin_[k] - node_support(k, t);
            if (q > best) { best = q; k0 = k; }
        }
        if (argmax) *argmax = k0;
        const double qm = sample(x, k0 - 1, t), qp = sample(x, k0 + 1, t);
        const double denom = qm - 2 * best + qp;
        if (denom < -1e-300) best -= 0.125 * (qm - qp) * (qm - qp) / denom;
        return best;
    }

    struct Separation {
        double value;   ///< refined max of <x,Y> - h
        double theta;   ///< maximizing angle
        double dt;      ///< envelope derivative d/dt = -h_t(theta, t)
    };

    /// Spectrally refined separation: Newton on q'(theta) through the
    /// trigonometric row interpolants.
    Separation separation(const Eigen::Vector2d& x, double t) const {
        const int n = sol_->n_theta();
        int k0 = 0;
        double q0 = separation_cheap(x, t, &k0);
        const double dth = 2.0 * pi / n;
        double theta = sol_->grid->theta(k0);
        const double qm = sample(x, k0 - 1, t), qc = sample(x, k0, t), qp = sample(x, k0 + 1, t);
        const double denom = qm - 2 * qc + qp;
        if (denom < -1e-300)
            theta += std::clamp(0.5 * (qm - qp) / denom, -0.75, 0.75) * dth;
        for (int it = 0; it < 3; ++it) {
            const double c = std::cos(theta), s = std::sin(theta);
            const double d1 = -x[0] * s + x[1] * c - support_dtheta(theta, t);
            const double d2 = -x[0] * c - x[1] * s - trig_d2(theta, t);
            if (std::abs(d2) < 1e-300) break;
            const double step = d1 / d2;
            if (!std::isfinite(step) || std::abs(step) > dth) break;
            theta -= step;
        }
        const double q_ref = x[0] * std::cos(theta) + x[1] * std::sin(theta) - support(theta, t);
        Separation sep;
        sep.theta = (q_ref >= q0) ? theta : sol_->grid->theta(k0);
        sep.value = std::max(q_ref, q0);
        sep.dt = -support_dt(sep.theta, t);
        return sep;
    }

    /// Height level through x, or nothing when x lies outside the closed ring.
    /// Cheap bisection brackets the root; envelope Newton polishes it
    /// (dS/dt = -h_t at the maximizer).
    std::optional<double> locate(const Eigen::Vector2d& x, double tol = 1e-12) const {
        const double s_out = separation(x, 0.0).value;
        if (s_out > tol) return std::nullopt;          // outside the outer body
        if (s_out >= 0.0) return 0.0;
        const double s_in = separation(x, 1.0).value;
        if (s_in < -tol) return std::nullopt;          // inside the inner body
        if (s_in <= 0.0) return 1.0;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 25; ++it) {
            const double mid = 0.5 * (lo + hi);
            (separation_cheap(x, mid) <= 0.0 ? lo : hi) = mid;
        }
        double t = 0.5 * (lo + hi);
        for (int it = 0; it < 6; ++it) {
            const Separation s = separation(x, t);
            if (!(s.dt > 0)) break;
            const double step = s.value / s.dt;
            t = std::clamp(t - step, 0.0, 1.0);
            if (std::abs(step) < tol) break;
        }
        return t;
    }

private:
    std::pair<int, double> bracket(double t) const {
        const int nt = sol_->n_t();
        double pos = t / sol_->scheme.dt;
        int j = std::clamp(int(std::floor(pos)), 0, nt - 1);
        return {j, pos - j};
    }
    double node_support(int k, double t) const {
        const auto [j, s] = bracket(t);
        const double dt = sol_->scheme.dt;
        const double y0 = sol_->h(k, j), y1 = sol_->h(k, j + 1);
        const double m0 = sol_->h_t(k, j), m1 = sol_->h_t(k, j + 1);
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * dt * m0 +
               (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * dt * m1;
    }
    double sample(const Eigen::Vector2d& x, int k, double t) const {
        const int n = sol_->n_theta();
        k = (k % n + n) % n;
        const double th = sol_->grid->theta(k);
        return x[0] * std::cos(th) + x[1] * std::sin(th) - node_support(k, t);
    }
    double trig_d2(double theta, double t) const {
        const auto [j, s] = bracket(t);
        const double dt = sol_->scheme.dt;
        const double y0 = rows_[j].eval(theta, 2), y1 = rows_[j + 1].eval(theta, 2);
        const double m0 = rows_t_[j].eval(theta, 2), m1 = rows_t_[j + 1].eval(theta, 2);
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * dt * m0 +
               (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * dt * m1;
    }

    const GridSolution* sol_;
    std::vector<TrigInterp> rows_, rows_t_;
    std::vector<double> cos_, sin_;
};

/// Max |div(grad u / sqrt(1+|grad u|^2))| over valid interior nodes of a
/// Cartesian sample of u, by 2nd-order finite differences. valid(i,j) marks
/// nodes where u is defined; a node needs its full 3x3 neighborhood.
inline double fd_minimal_surface_residual(const Eigen::MatrixXd& u,
                                          const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& valid,
                                          double spacing, int* points_used = nullptr) {
    const int nx = int(u.rows()), ny = int(u.cols());
    double worst = 0.0;
    int used = 0;
    for (int i = 1; i + 1 < nx; ++i)
        for (int j = 1; j + 1 < ny; ++j) {
            bool ok = true;
            for (int a = -1; a <= 1 && ok; ++a)
                for (int b = -1; b <= 1 && ok; ++b) ok = valid(i + a, j + b);
            if (!ok) continue;
            const double ux = (u(i + 1, j) - u(i - 1, j)) / (2 * spacing);
            const double uy = (u(i, j + 1) - u(i, j - 1)) / (2 * spacing);
            const double uxx = (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (spacing * spacing);
            const double uyy = (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (spacing * spacing);
            const double uxy = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) +
                                u(i - 1, j - 1)) / (4 * spacing * spacing);
            const double w2 = 1.0 + ux * ux + uy * uy;
            const double div = ((1.0 + uy * uy) * uxx - 2 * ux * uy * uxy +
                                (1.0 + ux * ux) * uyy) / std::pow(w2, 1.5);
            worst = std::max(worst, std::abs(div));
            ++used;
        }
    if (points_used) *points_used = used;
    return worst;
}

struct PhysicalResidualReport {
    double max_residual = 0;   ///< max |divergence| over well-interior points
    int points_used = 0;
    double boundary_mismatch = 0; ///< max |u - {0,1}| at recovered boundary points
    int cartesian_n = 0;
};

/// Reconstruct u on a Cartesian grid covering the ring and measure how well
/// the minimal graph equation holds in physical space. t_margin keeps the
/// finite-difference stencils away from the free columns next to the
/// boundaries.
inline PhysicalResidualReport physical_residual(const GridSolution& sol, int cartesian_n = 96,
                                                double t_margin = 0.04) {
    LevelLocator loc(sol);
    const double radius = sol.h.col(0).maxCoeff() * 1.02;
    const double spacing = 2.0 * radius / (cartesian_n - 1);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(cartesian_n, cartesian_n);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> valid(cartesian_n, cartesian_n);
    valid.setConstant(false);
    for (int i = 0; i < cartesian_n; ++i)
        for (int j = 0; j < cartesian_n; ++j) {
            const Eigen::Vector2d x(-radius + i * spacing, -radius + j * spacing);
            const auto t = loc.locate(x);
            if (t && *t > t_margin && *t < 1.0 - t_margin) {
                u(i, j) = *t;
                valid(i, j) = true;
            }
        }
    PhysicalResidualReport rep;
    rep.cartesian_n = cartesian_n;
    rep.max_residual = fd_minimal_surface_residual(u, valid, spacing, &rep.points_used);

    // sanity: boundary slices must sit at levels 0 and 1
    double mism = 0.0;
    const SupportSlice outer = sol.slice_at(0), inner = sol.slice_at(sol.n_t());
    for (int k = 0; k < sol.n_theta(); k += std::max(1, sol.n_theta() / 32)) {
        const Eigen::Vector2d xo = recover_point(outer, k).x;
        const Eigen::Vector2d xi = recover_point(inner, k).x;
        if (auto t0 = loc.locate(xo, 1e-10)) mism = std::max(mism, std::abs(*t0));
        if (auto t1 = loc.locate(xi, 1e-10)) mism = std::max(mism, std::abs(*t1 - 1.0));
    }
    rep.boundary_mismatch = mism;
    return rep;
}

} // namespace minsurf
