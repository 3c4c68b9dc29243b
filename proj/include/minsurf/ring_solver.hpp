#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "minsurf/block_banded.hpp"
#include "minsurf/curvature.hpp"
#include "minsurf/radial.hpp"
#include "minsurf/support.hpp"

namespace minsurf {

/// Dense differentiation matrices in the height direction on the uniform grid
/// t_j = j/n_t, j = 0..n_t. Interior rows use central stencils; the rows next
/// to the boundary and the boundary rows themselves use one-sided formulas of
/// matching order (2 or 4).
struct TScheme {
    int order = 4;
    int n_t = 0;
    double dt = 0;
    Eigen::MatrixXd w1, w2; ///< (n_t+1) x (n_t+1), derivative = field * w^T

    TScheme() = default;
    TScheme(int accuracy_order, int nt) : order(accuracy_order), n_t(nt), dt(1.0 / nt) {
        if (order != 2 && order != 4) throw ConfigError("TScheme: order must be 2 or 4");
        if (nt < 8) throw ConfigError("TScheme: n_t must be >= 8");
        const int m = nt + 1;
        w1 = Eigen::MatrixXd::Zero(m, m);
        w2 = Eigen::MatrixXd::Zero(m, m);
        auto put = [&](Eigen::MatrixXd& w, int j, std::initializer_list<double> c, int first,
                       double scale) {
            int k = first;
            for (double v : c) w(j, j + k++) = v * scale;
        };
        auto put_mirror = [&](Eigen::MatrixXd& w, int j, std::initializer_list<double> c, int first,
                              double scale) {
            int k = first;
            for (double v : c) w(j, j - k++) = v * scale;
        };
        const double s1 = 1.0 / dt, s2 = 1.0 / (dt * dt);
        if (order == 2) {
            for (int j = 1; j < nt; ++j) {
                put(w1, j, {-0.5, 0.0, 0.5}, -1, s1);
                put(w2, j, {1.0, -2.0, 1.0}, -1, s2);
            }
            put(w1, 0, {-1.5, 2.0, -0.5}, 0, s1);
            put_mirror(w1, nt, {1.5, -2.0, 0.5}, 0, s1);
            put(w2, 0, {2.0, -5.0, 4.0, -1.0}, 0, s2);
            put_mirror(w2, nt, {2.0, -5.0, 4.0, -1.0}, 0, s2);
        } else {
            for (int j = 2; j <= nt - 2; ++j) {
                put(w1, j, {1, -8, 0, 8, -1}, -2, s1 / 12);
                put(w2, j, {-1, 16, -30, 16, -1}, -2, s2 / 12);
            }
            put(w1, 1, {-3, -10, 18, -6, 1}, -1, s1 / 12);
            put_mirror(w1, nt - 1, {3, 10, -18, 6, -1}, -1, s1 / 12);
            put(w2, 1, {10, -15, -4, 14, -6, 1}, -1, s2 / 12);
            put_mirror(w2, nt - 1, {10, -15, -4, 14, -6, 1}, -1, s2 / 12);
            put(w1, 0, {-25, 48, -36, 16, -3}, 0, s1 / 12);
            put_mirror(w1, nt, {25, -48, 36, -16, 3}, 0, s1 / 12);
            put(w2, 0, {45, -154, 214, -156, 61, -10}, 0, s2 / 12);
            put_mirror(w2, nt, {45, -154, 214, -156, 61, -10}, 0, s2 / 12);
        }
    }
};

/// Boundary-value problem on S^1 x [0,1]: find the support function h(theta,t)
/// of the level sets of the minimal graph with prescribed convex boundary
/// slices (outer at t = 0, inner at t = 1).
struct RingProblem {
    SupportSlice outer, inner;
    int n_t;
    double tol = 1e-10;
    int t_order = 4;
    int max_iter = 80;

    RingProblem(SupportSlice outer_slice, SupportSlice inner_slice, int nt)
        : outer(std::move(outer_slice)), inner(std::move(inner_slice)), n_t(nt) {
        if (outer.grid().dim() != 2) throw ConfigError("RingProblem: boundaries must live on S^1");
        if (outer.grid_ptr() != inner.grid_ptr() &&
            (outer.grid().n_theta() != inner.grid().n_theta() ||
             outer.grid().method() != inner.grid().method()))
            throw ConfigError("RingProblem: boundary slices must share one grid");
        if (nt < 8) throw ConfigError("RingProblem: n_t must be >= 8");
        (void)second_fundamental_form(outer); // throws NonConvexSlice
        (void)second_fundamental_form(inner);
        for (int k = 0; k < outer.grid().num_nodes(); ++k)
            if (!(inner.h(k) < outer.h(k)))
                throw ConfigError("RingProblem: inner body not strictly contained in outer body");
    }
};

struct SolverReport {
    int iterations = 0;
    double final_residual = 0;
    std::vector<double> step_sizes; ///< accepted line-search factors
    double convexity_margin = 0;    ///< min over nodes of b = h + h_thth
    double orientation_margin = 0;  ///< max over nodes of h_t (negative on success)
    bool converged = false;
};

/// Solved support function on the (theta, t) grid with cached derivative
/// fields. theta derivatives are spectral (or 4th-order central, per grid),
/// t derivatives use the solver's TScheme; the same stencils back every
/// downstream analysis operator.
class GridSolution {
public:
    GridPtr grid;        ///< n = 2 sphere grid (theta direction)
    TScheme scheme;      ///< t-direction stencils
    Eigen::MatrixXd h;   ///< n_theta x (n_t+1)
    Eigen::MatrixXd h_t, h_tt, h_th, h_thth, h_tth;
    Eigen::MatrixXd b;   ///< h + h_thth (= b_11)

    int n_theta() const { return int(h.rows()); }
    int n_t() const { return scheme.n_t; }
    double t_of(int j) const { return scheme.dt * j; }

    void refresh() {
        h_th = grid->dtheta1() * h;
        h_thth = grid->dtheta2() * h;
        h_t = h * scheme.w1.transpose();
        h_tt = h * scheme.w2.transpose();
        h_tth = grid->dtheta1() * h_t;
        b = h + h_thth;
    }

    double convexity_margin() const { return b.minCoeff(); }
    double orientation_margin() const { return h_t.maxCoeff(); }

    /// Boundary/interior row as a SupportSlice (shares the theta grid).
    SupportSlice slice_at(int j) const { return SupportSlice(grid, h.col(j)); }
};

/// Pointwise residual of the transformed equation at interior nodes:
///   F(h) = h_tt - [(1 + h_t^2) + h_tth^2] / (h + h_thth).
/// Rows 0 and n_t are Dirichlet and get zero residual entries.
inline Eigen::MatrixXd discrete_residual(const GridSolution& sol) {
    const int nt = sol.n_t();
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(sol.n_theta(), nt + 1);
    for (int j = 1; j < nt; ++j)
        for (int i = 0; i < sol.n_theta(); ++i) {
            const double bb = sol.b(i, j);
            if (!(bb > 0))
                throw ConvexityLoss("discrete_residual: b <= 0 at node (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
            const double p = 1.0 + sol.h_t(i, j) * sol.h_t(i, j) + sol.h_tth(i, j) * sol.h_tth(i, j);
            f(i, j) = sol.h_tt(i, j) - p / bb;
        }
    return f;
}

/// The linearized elliptic operator associated with the equation, using the
/// solution's own stencils:
///   L = [(1+h_t^2) + h_tth^2] b^{-2} d_thth - 2 h_tth b^{-1} d_th,t + d_tt.
inline Eigen::MatrixXd apply_L(const GridSolution& sol, const Eigen::MatrixXd& g) {
    if (g.rows() != sol.h.rows() || g.cols() != sol.h.cols())
        throw ConfigError("apply_L: field shape mismatch");
    const Eigen::MatrixXd g_thth = sol.grid->dtheta2() * g;
    const Eigen::MatrixXd g_tt = g * sol.scheme.w2.transpose();
    const Eigen::MatrixXd g_tth = sol.grid->dtheta1() * (g * sol.scheme.w1.transpose());
    Eigen::MatrixXd out(g.rows(), g.cols());
    for (int j = 0; j < g.cols(); ++j)
        for (int i = 0; i < g.rows(); ++i) {
            const double bb = sol.b(i, j);
            const double a = (1.0 + sol.h_t(i, j) * sol.h_t(i, j) +
                              sol.h_tth(i, j) * sol.h_tth(i, j)) / (bb * bb);
            out(i, j) = a * g_thth(i, j) - 2.0 * sol.h_tth(i, j) / bb * g_tth(i, j) + g_tt(i, j);
        }
    return out;
}

namespace detail {

inline bool fields_admissible(const GridSolution& sol) {
    const double bmax = sol.b.cwiseAbs().maxCoeff();
    return sol.b.minCoeff() > 1e-12 * std::max(bmax, 1.0) && sol.h_t.maxCoeff() < 0.0;
}

inline double residual_norm(const Eigen::MatrixXd& f) { return f.cwiseAbs().maxCoeff(); }

} // namespace detail

/// Damped Newton solve of the discrete boundary-value problem. The initial
/// guess is the Minkowski interpolation h0 = (1-t) h_outer + t h_inner, which
/// is a support function of a convex body for every t, so the iteration
/// starts inside the admissible cone.
inline std::pair<GridSolution, SolverReport> solve(const RingProblem& prob) {
    const int nth = prob.outer.grid().n_theta();
    const int nt = prob.n_t;

    GridSolution sol;
    sol.grid = prob.outer.grid_ptr();
    sol.scheme = TScheme(prob.t_order, nt);
    sol.h.resize(nth, nt + 1);
    for (int j = 0; j <= nt; ++j) {
        const double t = double(j) / nt;
        sol.h.col(j) = (1.0 - t) * prob.outer.h() + t * prob.inner.h();
    }
    sol.refresh();
    if (!detail::fields_admissible(sol))
        throw ConvexityLoss("solve: Minkowski initial guess is not admissible");

    SolverReport rep;
    const Eigen::MatrixXd& dth1 = sol.grid->dtheta1();
    const Eigen::MatrixXd& dth2 = sol.grid->dtheta2();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(nth, nth);

    Eigen::MatrixXd f = discrete_residual(sol);
    double fnorm = detail::residual_norm(f);

    double lm = 0.0; // Levenberg damping, engaged only if line search stalls
    for (int it = 0; it < prob.max_iter; ++it) {
        if (fnorm <= prob.tol) {
            rep.converged = true;
            break;
        }
        // assemble the block-banded Jacobian over interior rows 1..nt-1
        BlockBandedMatrix jac(nt - 1, nth);
        Eigen::VectorXd rhs(Eigen::Index(nt - 1) * nth);
        for (int j = 1; j < nt; ++j) {
            rhs.segment(Eigen::Index(j - 1) * nth, nth) = -f.col(j);
            Eigen::VectorXd inv_b(nth), coef_t(nth), coef_mixed(nth), coef_diag(nth);
            for (int i = 0; i < nth; ++i) {
                const double bb = sol.b(i, j);
                const double p =
                    1.0 + sol.h_t(i, j) * sol.h_t(i, j) + sol.h_tth(i, j) * sol.h_tth(i, j);
                inv_b[i] = 1.0 / bb;
                coef_t[i] = -2.0 * sol.h_t(i, j) / bb;
                coef_mixed[i] = -2.0 * sol.h_tth(i, j) / bb;
                coef_diag[i] = p / (bb * bb);
            }
            for (int jj = 1; jj < nt; ++jj) { // Dirichlet columns 0 and nt are fixed
                const double c1 = sol.scheme.w1(j, jj);
                const double c2 = sol.scheme.w2(j, jj);
                const bool diag = (jj == j);
                if (c1 == 0.0 && c2 == 0.0 && !diag) continue;
                Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(nth, nth);
                if (c2 != 0.0) blk.diagonal().array() += c2;
                if (c1 != 0.0) {
                    blk.diagonal() += c1 * coef_t;
                    blk.noalias() += (c1 * coef_mixed).asDiagonal() * dth1;
                }
                if (diag) {
                    blk.noalias() += coef_diag.asDiagonal() * (eye + dth2);
                    if (lm > 0.0) blk.diagonal().array() += lm;
                }
                jac.block(j - 1, jj - 1) += blk;
            }
        }
        const Eigen::VectorXd step = jac.solve(std::move(rhs));

        // backtracking line search: residual must drop and the iterate must
        // keep strict convexity and orientation margins
        double alpha = 1.0;
        bool accepted = false;
        GridSolution trial = sol;
        for (int ls = 0; ls < 30; ++ls) {
            trial.h = sol.h;
            for (int j = 1; j < nt; ++j)
                trial.h.col(j) += alpha * step.segment(Eigen::Index(j - 1) * nth, nth);
            trial.refresh();
            if (detail::fields_admissible(trial)) {
                const Eigen::MatrixXd ft = discrete_residual(trial);
                const double fn = detail::residual_norm(ft);
                if (fn < fnorm) {
                    sol = trial;
                    f = ft;
                    fnorm = fn;
                    accepted = true;
                    rep.step_sizes.push_back(alpha);
                    break;
                }
            }
            alpha *= 0.5;
        }
        ++rep.iterations;
        if (!accepted) {
            // pseudo-transient fallback: damp the Newton system and retry
            lm = (lm == 0.0) ? 1.0 : lm * 10.0;
            if (lm > 1e8)
                throw ConvexityLoss("solve: line search stalled; damping could not recover "
                                    "(worst b = " + std::to_string(sol.b.minCoeff()) + ")");
        } else if (lm > 0.0) {
            lm = (lm < 1e-3) ? 0.0 : lm * 0.01;
        }
    }
    if (!rep.converged && fnorm > prob.tol)
        throw NoConvergence("solve: Newton did not reach tolerance", fnorm);

    rep.converged = true;
    rep.final_residual = fnorm;
    rep.convexity_margin = sol.convexity_margin();
    rep.orientation_margin = sol.orientation_margin();
    if (!(rep.orientation_margin < 0))
        throw OrientationLoss("solve: converged solution has h_t >= 0 somewhere");
    const double bmax = sol.b.maxCoeff();
    if (!(rep.convexity_margin > kConvexityTol * bmax))
        throw ConvexityLoss("solve: converged solution lost strict convexity");
    return {std::move(sol), std::move(rep)};
}

/// Exact rotationally symmetric data h(theta, t) = r(t) exported onto a
/// solver grid; the workhorse oracle for discrete operators.
inline GridSolution radial_grid_solution(const RadialSolution& rad, GridPtr grid, int nt,
                                         int t_order = 4) {
    if (grid->dim() != 2) throw ConfigError("radial_grid_solution: needs an n=2 grid");
    GridSolution sol;
    sol.grid = std::move(grid);
    sol.scheme = TScheme(t_order, nt);
    sol.h.resize(sol.grid->n_theta(), nt + 1);
    for (int j = 0; j <= nt; ++j)
        sol.h.col(j).setConstant(rad.r_of_t(rad.drop() * j / double(nt)));
    sol.refresh();
    return sol;
}

} // namespace minsurf
