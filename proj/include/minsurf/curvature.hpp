#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "minsurf/support.hpp"

namespace minsurf {

/// Relative threshold of the strict-convexity test: a slice is accepted when
/// min eig(b) > kConvexityTol * max eig(b). Borderline slices are rejected
/// rather than regularized.
inline constexpr double kConvexityTol = 1e-10;

/// Eigenvalues of a symmetric 1x1 or 2x2 matrix in ascending order.
/// These are the only sizes arising for n in {2,3}; no general eigensolver.
inline Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& s) {
    const int m = int(s.rows());
    Eigen::VectorXd ev(m);
    if (m == 1) {
        ev[0] = s(0, 0);
    } else if (m == 2) {
        const double tr = s(0, 0) + s(1, 1);
        const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        ev[0] = 0.5 * tr - disc;
        ev[1] = 0.5 * tr + disc;
    } else {
        throw ConfigError("sym_eigenvalues: only 1x1 and 2x2 supported");
    }
    return ev;
}

/// Per-node second fundamental form of a level hypersurface together with the
/// derived curvature quantities.
///
/// b_ij = h delta_ij + h_ij (orthonormal frame), b^{ij} its inverse,
/// K = det(b^{ij}), sigma1 = trace(b^{ij}), kappa = eigenvalues of b^{ij}.
struct CurvatureField {
    GridPtr grid;
    /// Packed symmetric b_ij: n=2 one column (b_11); n=3 columns (b_11, b_12, b_22).
    Eigen::MatrixXd b;
    Eigen::MatrixXd binv;   ///< same packing as b
    Eigen::VectorXd K;      ///< Gaussian curvature of the level set
    Eigen::VectorXd sigma1; ///< mean curvature
    Eigen::MatrixXd kappa;  ///< principal curvatures, ascending per row
    bool convex = false;
    double min_eig = 0, max_eig = 0;

    Eigen::MatrixXd b_at(int k) const {
        const int m = grid->dim() - 1;
        Eigen::MatrixXd s(m, m);
        if (m == 1) s(0, 0) = b(k, 0);
        else { s(0, 0) = b(k, 0); s(0, 1) = s(1, 0) = b(k, 1); s(1, 1) = b(k, 2); }
        return s;
    }
    Eigen::MatrixXd binv_at(int k) const {
        const int m = grid->dim() - 1;
        Eigen::MatrixXd s(m, m);
        if (m == 1) s(0, 0) = binv(k, 0);
        else { s(0, 0) = binv(k, 0); s(0, 1) = s(1, 0) = binv(k, 1); s(1, 1) = binv(k, 2); }
        return s;
    }
};

/// Assemble b_ij = h delta_ij + h_ij per node and run the convexity test.
/// Throws NonConvexSlice when the smallest eigenvalue fails the threshold;
/// downstream curvature analysis must stop on such slices.
inline CurvatureField second_fundamental_form(const SupportSlice& slice) {
    slice.covariant_derivatives();
    const SphereGrid& g = slice.grid();
    const int nn = g.num_nodes();
    const int m = g.dim() - 1;

    CurvatureField f;
    f.grid = slice.grid_ptr();
    f.b.resize(nn, m == 1 ? 1 : 3);
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (int k = 0; k < nn; ++k) {
        Eigen::MatrixXd s = slice.hess(k);
        for (int i = 0; i < m; ++i) s(i, i) += slice.h(k);
        if (m == 1) f.b(k, 0) = s(0, 0);
        else { f.b(k, 0) = s(0, 0); f.b(k, 1) = s(0, 1); f.b(k, 2) = s(1, 1); }
        const Eigen::VectorXd ev = sym_eigenvalues(s);
        mn = std::min(mn, ev[0]);
        mx = std::max(mx, ev[m - 1]);
    }
    f.min_eig = mn;
    f.max_eig = mx;
    f.convex = (mn > kConvexityTol * std::max(mx, 0.0));
    if (!f.convex)
        throw NonConvexSlice("second_fundamental_form: slice is not strictly convex (min eig " +
                             std::to_string(mn) + ", max eig " + std::to_string(mx) + ")");
    return f;
}

/// Complete a CurvatureField with b^{ij}, K, sigma1 and principal curvatures.
inline CurvatureField& curvatures(CurvatureField& f) {
    if (!f.convex) throw NonConvexSlice("curvatures: slice failed the convexity test");
    const int nn = f.grid->num_nodes();
    const int m = f.grid->dim() - 1;
    f.binv.resize(nn, m == 1 ? 1 : 3);
    f.K.resize(nn);
    f.sigma1.resize(nn);
    f.kappa.resize(nn, m);
    for (int k = 0; k < nn; ++k) {
        if (m == 1) {
            const double b11 = f.b(k, 0);
            f.binv(k, 0) = 1.0 / b11;
            f.K[k] = 1.0 / b11;
            f.sigma1[k] = 1.0 / b11;
            f.kappa(k, 0) = 1.0 / b11;
        } else {
            const double b11 = f.b(k, 0), b12 = f.b(k, 1), b22 = f.b(k, 2);
            const double det = b11 * b22 - b12 * b12;
            f.binv(k, 0) = b22 / det;
            f.binv(k, 1) = -b12 / det;
            f.binv(k, 2) = b11 / det;
            f.K[k] = 1.0 / det;
            f.sigma1[k] = (b11 + b22) / det;
            const Eigen::VectorXd ev = sym_eigenvalues(f.binv_at(k));
            f.kappa.row(k) = ev.transpose();
        }
    }
    return f;
}

/// Convenience: b_ij, convexity test, and curvature completion in one call.
inline CurvatureField curvature_field(const SupportSlice& slice) {
    CurvatureField f = second_fundamental_form(slice);
    return curvatures(f);
}

/// Max over nodes and index triples of |b_{ij,k} - b_{ik,j}| in the
/// orthonormal frame. Zero analytically; converges at the stencil order.
/// For n = 2 the statement is vacuous and 0 is returned.
///
/// Rows with sin(phi) < pole_margin are skipped: orthonormalizing a third
/// covariant derivative divides by sin^3(phi), which amplifies the stencil
/// truncation near the poles and would mask the interior convergence order.
inline double codazzi_residual(const SupportSlice& slice, double pole_margin = 0.15) {
    const SphereGrid& g = slice.grid();
    if (g.dim() == 2) return 0.0;
    // Convexity is a stated precondition, although the identity itself
    // holds for any smooth h.
    (void)second_fundamental_form(slice);

    // Differentiate the orthonormal-frame component fields b_11, b_12, b_22
    // and add the frame-connection corrections. The two index orders then
    // apply genuinely different stencil compositions, so the residual shows
    // the true truncation error (a fully algebraic assembly would satisfy
    // the identity exactly at any resolution). Component fields of smooth
    // tensors wrap across the poles like scalars, so the scalar ghost rule
    // applies unchanged.
    slice.covariant_derivatives();
    const int nn = g.num_nodes();
    Eigen::VectorXd b11(nn), b12(nn), b22(nn);
    for (int k = 0; k < nn; ++k) {
        b11[k] = slice.h(k) + slice.h2()(k, 0);
        b12[k] = slice.h2()(k, 1);
        b22[k] = slice.h(k) + slice.h2()(k, 2);
    }
    // frame derivatives e_1 = d/dphi, e_2 = (1/sin phi) d/dlambda per field
    std::vector<const Eigen::VectorXd*> comp = {&b11, &b12, &b22};
    std::vector<Eigen::VectorXd> dp, dl;
    for (const auto* f : comp) {
        dp.push_back(g.d_phi(*f, 1));
        dl.push_back(g.d_lambda(*f, 1));
    }
    auto pack = [](int i, int j) { return i + j; }; // (0,0)->0 (0,1)/(1,0)->1 (1,1)->2

    double worst = 0.0;
    for (int k = 0; k < nn; ++k) {
        const double p = g.phi(g.node_phi(k));
        const double sp = std::sin(p);
        if (sp < pole_margin) continue;
        const double cot = std::cos(p) / sp;
        auto b_at = [&](int i, int j) { return (*comp[pack(i, j)])[k]; };
        auto ederiv = [&](int kk, int i, int j) {
            return kk == 0 ? dp[pack(i, j)][k] : dl[pack(i, j)][k] / sp;
        };
        // frame connection: nabla_{e2} e1 = cot(phi) e2, nabla_{e2} e2 = -cot(phi) e1
        auto gamma = [&](int up, int k1, int lo) -> double {
            if (k1 == 1 && lo == 0 && up == 1) return cot;
            if (k1 == 1 && lo == 1 && up == 0) return -cot;
            return 0.0;
        };
        auto Db = [&](int i, int j, int kk) {
            double v = ederiv(kk, i, j);
            for (int l = 0; l < 2; ++l)
                v -= gamma(l, kk, i) * b_at(l, j) + gamma(l, kk, j) * b_at(i, l);
            return v;
        };
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int kk = 0; kk < 2; ++kk)
                    worst = std::max(worst, std::abs(Db(i, j, kk) - Db(i, kk, j)));
    }
    return worst;
}

} // namespace minsurf
