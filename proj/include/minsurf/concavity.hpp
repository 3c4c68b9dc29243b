#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "minsurf/profile.hpp"
#include "minsurf/ring_solver.hpp"

namespace minsurf {

/// The two curvature functionals of the analysis, sampled per grid node:
///   phi_level = [ (|grad u|^2 / (1+|grad u|^2))^{(n-3)/2} K ]^{1/(n-1)}
///   phi_aux   = rho(h_t^2) - log K,  rho(s) = (n-3)/2 * log(1+s)
/// with beta = -1/(n-1) they satisfy phi_level = exp(beta * phi_aux)
/// node-wise, since |grad u|^2/(1+|grad u|^2) = 1/(1+h_t^2).
struct PhiField {
    Eigen::MatrixXd level, aux;
    int dim_n = 2;
    double beta = -1.0;
};

/// Assemble the fields from node-wise K and h_t samples.
inline PhiField make_phi_field(const Eigen::MatrixXd& K, const Eigen::MatrixXd& h_t, int dim_n) {
    if (K.rows() != h_t.rows() || K.cols() != h_t.cols())
        throw ConfigError("make_phi_field: shape mismatch");
    PhiField p;
    p.dim_n = dim_n;
    p.beta = -1.0 / (dim_n - 1);
    p.level.resize(K.rows(), K.cols());
    p.aux.resize(K.rows(), K.cols());
    const double rho_c = 0.5 * (dim_n - 3.0);
    for (Eigen::Index j = 0; j < K.cols(); ++j)
        for (Eigen::Index i = 0; i < K.rows(); ++i) {
            if (!(K(i, j) > 0)) throw NonConvexSlice("make_phi_field: K <= 0");
            const double ht2 = h_t(i, j) * h_t(i, j);
            const double g = 1.0 / (1.0 + ht2); // |grad u|^2 / (1 + |grad u|^2)
            p.level(i, j) = std::pow(std::pow(g, rho_c) * K(i, j), 1.0 / (dim_n - 1));
            p.aux(i, j) = rho_c * std::log1p(ht2) - std::log(K(i, j));
        }
    return p;
}

/// Fields of a solved 2D ring: K = 1/(h + h_thth) per node.
inline PhiField phi_field(const GridSolution& sol) {
    Eigen::MatrixXd K = sol.b.cwiseInverse();
    if (!(sol.b.minCoeff() > 0)) throw NonConvexSlice("phi_field: solution lost convexity");
    return make_phi_field(K, sol.h_t, 2);
}

/// f(t) = min over theta of phi_level, with a 3-point parabolic sub-grid
/// refinement around the discrete minimizer; ties break to the smallest
/// theta index. Returns a profile on the solution's normalized t grid.
inline HeightProfile f_profile(const PhiField& phi, const GridSolution& sol, double tol = 1e-6) {
    const int nt = sol.n_t();
    HeightProfile p;
    p.t.setLinSpaced(nt + 1, 0.0, 1.0);
    p.t_scale = 1.0;
    p.f.resize(nt + 1);
    p.minimizer.resize(nt + 1);
    const int n = sol.n_theta();
    const double dth = 2.0 * pi / n;
    for (int j = 0; j <= nt; ++j) {
        int k0 = 0;
        double best = phi.level(0, j);
        for (int k = 1; k < n; ++k)
            if (phi.level(k, j) < best) { best = phi.level(k, j); k0 = k; }
        const double qm = phi.level((k0 - 1 + n) % n, j);
        const double qp = phi.level((k0 + 1) % n, j);
        const double denom = qm - 2 * best + qp;
        double theta = sol.grid->theta(k0), value = best;
        if (denom > 1e-14 * std::max(1.0, std::abs(best))) {
            const double delta = 0.5 * (qm - qp) / denom;
            value = best - 0.125 * (qm - qp) * (qm - qp) / denom;
            theta += std::clamp(delta, -0.5, 0.5) * dth;
        }
        p.f[j] = value;
        p.minimizer[j] = theta;
    }
    p.finish(tol);
    return p;
}

// -- near-critical node machinery --------------------------------------------

struct CriticalPoint {
    int t_index = 0;     ///< interior t row
    double theta = 0;    ///< refined angle
    double grad = 0;     ///< |d phi/d theta| at the refined angle
    bool on_node = true; ///< true if taken directly at a grid node
};

/// Relative threshold under which a node counts as exactly critical.
inline constexpr double kCriticalRel = 1e-6;

/// Locate the theta-critical points of a smooth periodic row. Rows that are
/// constant to rounding report every node (the rotationally symmetric case);
/// otherwise sign changes of the spectral derivative are refined by bisection
/// on the trigonometric interpolant, and nodes passing the relative-threshold
/// filter are included as-is.
inline std::vector<CriticalPoint> row_critical_points(const SphereGrid& grid,
                                                      const Eigen::VectorXd& row, int t_index) {
    const int n = int(row.size());
    const Eigen::VectorXd drow = grid.dtheta1() * row;
    const double scale = drow.cwiseAbs().maxCoeff();
    const double field = row.cwiseAbs().maxCoeff();
    std::vector<CriticalPoint> pts;
    if (scale <= 1e-12 * std::max(field, 1.0)) {
        for (int k = 0; k < n; ++k) pts.push_back({t_index, grid.theta(k), 0.0, true});
        return pts;
    }
    TrigInterp interp(row);
    for (int k = 0; k < n; ++k) {
        const double a = drow[k], b = drow[(k + 1) % n];
        if (std::abs(a) <= kCriticalRel * scale) {
            pts.push_back({t_index, grid.theta(k), std::abs(a), true});
            continue;
        }
        if (a * b < 0.0) {
            double lo = grid.theta(k), hi = grid.theta(k) + 2.0 * pi / n;
            double flo = interp.eval(lo, 1);
            for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = interp.eval(mid, 1);
                if (flo * fm <= 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            const double th = 0.5 * (lo + hi);
            pts.push_back({t_index, th, std::abs(interp.eval(th, 1)), false});
        }
    }
    return pts;
}

/// Evaluate a cached grid field row-interpolated at (theta, t_j).
inline double eval_field_at(const Eigen::MatrixXd& field, int j, double theta) {
    return TrigInterp(Eigen::VectorXd(field.col(j))).eval(theta);
}

namespace detail {

/// Spectral evaluation of a field's theta-derivative structure at one angle,
/// reusing one interpolant per row, with the t-stencil applied across rows.
struct RowEval {
    std::vector<TrigInterp> rows;
    explicit RowEval(const Eigen::MatrixXd& field) {
        rows.reserve(field.cols());
        for (Eigen::Index j = 0; j < field.cols(); ++j)
            rows.emplace_back(Eigen::VectorXd(field.col(j)));
    }
    double at(int j, double theta, int dtheta = 0) const { return rows[j].eval(theta, dtheta); }
    /// t-derivative via a stencil row (w1/w2 of the scheme)
    double t_stencil(const Eigen::MatrixXd& w, int j, double theta, int dtheta = 0) const {
        double acc = 0;
        for (Eigen::Index m = 0; m < w.cols(); ++m)
            if (w(j, m) != 0.0) acc += w(j, m) * rows[m].eval(theta, dtheta);
        return acc;
    }
};

} // namespace detail

/// One evaluation of the linear operator L on a grid scalar field G at an
/// off-node angle, with all coefficients taken from the solution's fields.
inline double apply_L_at(const GridSolution& sol, const detail::RowEval& G,
                         const detail::RowEval& h_eval, int j, double theta) {
    const double ht = h_eval.t_stencil(sol.scheme.w1, j, theta);
    const double htth = h_eval.t_stencil(sol.scheme.w1, j, theta, 1);
    const double b = h_eval.at(j, theta) + h_eval.at(j, theta, 2);
    const double a = (1.0 + ht * ht + htth * htth) / (b * b);
    const double g_thth = G.at(j, theta, 2);
    const double g_tth = G.t_stencil(sol.scheme.w1, j, theta, 1);
    const double g_tt = G.t_stencil(sol.scheme.w2, j, theta);
    return a * g_thth - 2.0 * htth / b * g_tth + g_tt;
}

struct CriticalPointValue {
    CriticalPoint point;
    double value = 0;
};

struct CriticalCheckReport {
    std::vector<CriticalPointValue> values;
    double worst = -std::numeric_limits<double>::infinity(); ///< max of the checked quantity
    std::vector<int> rows_without_critical;                  ///< reported, not fatal
    CriticalPointValue worst_point() const {
        CriticalPointValue w;
        for (const auto& v : values)
            if (v.value >= worst) w = v;
        return w;
    }
};

/// Evaluate L(exp(beta * phi_aux)) at near-critical nodes of phi_aux on every
/// interior t row. The differential inequality asserts values <= 0 up to
/// discretization; beta_override = +1/(n-1) provides the wrong-sign control.
inline CriticalCheckReport differential_inequality_check(
    const GridSolution& sol, std::optional<double> beta_override = std::nullopt) {
    const PhiField phi = phi_field(sol);
    const double beta = beta_override.value_or(phi.beta);
    const Eigen::MatrixXd G = (beta * phi.aux).array().exp();
    detail::RowEval g_eval(G), h_eval(sol.h);
    CriticalCheckReport rep;
    for (int j = 1; j < sol.n_t(); ++j) {
        auto pts = row_critical_points(*sol.grid, phi.aux.col(j), j);
        if (pts.empty()) {
            rep.rows_without_critical.push_back(j);
            continue;
        }
        for (const auto& pt : pts) {
            const double v = apply_L_at(sol, g_eval, h_eval, j, pt.theta);
            rep.values.push_back({pt, v});
            rep.worst = std::max(rep.worst, v);
        }
    }
    return rep;
}

/// Residual of the n = 2 sum-of-squares identity at theta-critical points of
/// phi = -log K = log b:
///   L(phi) = [b^{11} b_{11,t} - h_t b^{11}]^2 + (b^{11})^2 h_t1^2 + (b^{11})^2.
inline CriticalCheckReport remark_identity_residual(const GridSolution& sol) {
    const Eigen::MatrixXd phi = sol.b.array().log();
    detail::RowEval phi_eval(phi), h_eval(sol.h), b_eval(sol.b);
    CriticalCheckReport rep;
    rep.worst = 0.0;
    for (int j = 1; j < sol.n_t(); ++j) {
        auto pts = row_critical_points(*sol.grid, phi.col(j), j);
        if (pts.empty()) {
            rep.rows_without_critical.push_back(j);
            continue;
        }
        for (const auto& pt : pts) {
            const double lhs = apply_L_at(sol, phi_eval, h_eval, j, pt.theta);
            const double b = h_eval.at(j, pt.theta) + h_eval.at(j, pt.theta, 2);
            const double binv = 1.0 / b;
            const double bt = b_eval.t_stencil(sol.scheme.w1, j, pt.theta);
            const double ht = h_eval.t_stencil(sol.scheme.w1, j, pt.theta);
            const double ht1 = h_eval.t_stencil(sol.scheme.w1, j, pt.theta, 1);
            const double sq1 = binv * bt - ht * binv;
            const double rhs = sq1 * sq1 + binv * binv * ht1 * ht1 + binv * binv;
            const double res = std::abs(lhs - rhs);
            rep.values.push_back({pt, res});
            rep.worst = std::max(rep.worst, res);
        }
    }
    return rep;
}

/// Same residual evaluated at an arbitrary (non-critical) angle; used to show
/// the identity genuinely fails away from critical points.
inline double remark_identity_at(const GridSolution& sol, int j, double theta) {
    const Eigen::MatrixXd phi = sol.b.array().log();
    detail::RowEval phi_eval(phi), h_eval(sol.h), b_eval(sol.b);
    const double lhs = apply_L_at(sol, phi_eval, h_eval, j, theta);
    const double b = h_eval.at(j, theta) + h_eval.at(j, theta, 2);
    const double binv = 1.0 / b;
    const double bt = b_eval.t_stencil(sol.scheme.w1, j, theta);
    const double ht = h_eval.t_stencil(sol.scheme.w1, j, theta);
    const double ht1 = h_eval.t_stencil(sol.scheme.w1, j, theta, 1);
    const double sq1 = binv * bt - ht * binv;
    return std::abs(lhs - (sq1 * sq1 + binv * binv * ht1 * ht1 + binv * binv));
}

// -- maximum-principle check --------------------------------------------------

enum class SubsolutionCheck {
    pointwise, ///< verify L(G) >= -eps at every interior node
    assume     ///< caller vouches for the subsolution property (theorem route)
};

struct MaxConvexityResult {
    bool pass = false;
    Eigen::VectorXd phi_max; ///< max over theta per t row
    Eigen::VectorXd d2;      ///< centered second differences, interior rows
    double min_d2 = 0;
    int worst_row = -1;
};

/// Lemma-style check: the max over theta of a subsolution is convex in t.
/// first_order, when given, adds user-supplied c^i dG/dtheta_i terms to the
/// subsolution test.
inline MaxConvexityResult max_convexity_check(const GridSolution& sol, const Eigen::MatrixXd& G,
                                              double eps_sub, double eps_grid,
                                              SubsolutionCheck mode = SubsolutionCheck::pointwise,
                                              const Eigen::MatrixXd* first_order = nullptr) {
    if (mode == SubsolutionCheck::pointwise) {
        Eigen::MatrixXd lg = apply_L(sol, G);
        if (first_order) lg += first_order->cwiseProduct(sol.grid->dtheta1() * G);
        const double worst = lg.block(0, 1, G.rows(), G.cols() - 2).minCoeff();
        if (worst < -eps_sub)
            throw ConfigError("max_convexity_check: L(G) = " + std::to_string(worst) +
                              " violates the subsolution precondition");
    }
    MaxConvexityResult r;
    const int nt = sol.n_t(), n = sol.n_theta();
    const double dth = 2.0 * pi / n;
    r.phi_max.resize(nt + 1);
    for (int j = 0; j <= nt; ++j) {
        int k0 = 0;
        double best = G(0, j);
        for (int k = 1; k < n; ++k)
            if (G(k, j) > best) { best = G(k, j); k0 = k; }
        const double qm = G((k0 - 1 + n) % n, j), qp = G((k0 + 1) % n, j);
        const double denom = qm - 2 * best + qp;
        double value = best;
        if (denom < -1e-14 * std::max(1.0, std::abs(best)))
            value = best - 0.125 * (qm - qp) * (qm - qp) / denom;
        (void)dth;
        r.phi_max[j] = value;
    }
    r.d2 = generalized_second_derivative(r.phi_max, sol.scheme.dt);
    r.min_d2 = r.d2.minCoeff();
    for (int j = 0; j < r.d2.size(); ++j)
        if (r.d2[j] == r.min_d2) { r.worst_row = j + 1; break; }
    r.pass = (r.min_d2 >= -eps_grid);
    return r;
}

// -- radial closed-form counterparts ------------------------------------------

/// phi_tt along a rotationally symmetric solution, sampled on a uniform
/// height grid; the closed form -(n-1)(n-2) c^{(n-3)/(n-1)} r^{-n} <= 0.
inline Eigen::VectorXd radial_inequality_values(const RadialSolution& rad, int samples) {
    Eigen::VectorXd v(samples);
    for (int j = 0; j < samples; ++j) {
        const double t = rad.drop() * j / double(samples - 1);
        v[j] = rad.phi_tt_closed(rad.r_of_t(t));
    }
    return v;
}

/// Wrong-sign control for n >= 3: with beta = +1/(n-1) the corresponding
/// quantity is B r^{n-2} and its second height derivative
///   B (n-2) r^{n-4} [ (2n-4) r_t^2 + (n-1) ]
/// is strictly positive.
inline Eigen::VectorXd radial_wrong_sign_values(const RadialSolution& rad, int samples) {
    const int n = rad.dim();
    const double B = std::pow(rad.flux(), -(n - 3.0) / (n - 1.0));
    Eigen::VectorXd v(samples);
    for (int j = 0; j < samples; ++j) {
        const double t = rad.drop() * j / double(samples - 1);
        const double r = rad.r_of_t(t);
        const double rt = rad.h_t_of_r(r);
        v[j] = B * (n - 2.0) * std::pow(r, n - 4.0) * ((2.0 * n - 4.0) * rt * rt + (n - 1.0));
    }
    return v;
}

/// Closed-form n = 2 remark residual along a radial solution: both sides of
/// the identity collapse to 1/r^2.
inline double radial_remark_residual(const RadialSolution& rad, int samples) {
    if (rad.dim() != 2) throw ConfigError("radial_remark_residual: n = 2 only");
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double t = rad.drop() * j / double(samples - 1);
        const double r = rad.r_of_t(t);
        const double rt = rad.h_t_of_r(r);
        const double rtt = (1.0 + rt * rt) / r; // transformed equation, radial form
        const double lhs = (rtt * r - rt * rt) / (r * r); // (log r)_tt
        const double binv = 1.0 / r;
        const double sq1 = binv * rt - rt * binv;
        const double rhs = sq1 * sq1 + binv * binv * 0.0 + binv * binv;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace minsurf
