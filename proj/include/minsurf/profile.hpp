#pragma once

#include <Eigen/Dense>

#include "minsurf/errors.hpp"

namespace minsurf {

/// Centered second differences on a uniform grid; the discrete counterpart of
/// the generalized second derivative
///   D^2 f(t) = limsup_{h->0} [f(t+h) + f(t-h) - 2 f(t)] / h^2.
/// Exact for quadratics; O(dt^2) for C^2 data. Interior nodes only.
inline Eigen::VectorXd generalized_second_derivative(const Eigen::VectorXd& f, double dt) {
    if (f.size() < 3) throw ConfigError("generalized_second_derivative: need >= 3 samples");
    if (!(dt > 0)) throw ConfigError("generalized_second_derivative: dt must be positive");
    Eigen::VectorXd d2(f.size() - 2);
    for (int j = 1; j + 1 < f.size(); ++j)
        d2[j - 1] = (f[j + 1] + f[j - 1] - 2.0 * f[j]) / (dt * dt);
    return d2;
}

/// Samples of the curvature functional f(t) = min over the level set of the
/// level quantity, on a uniform height grid normalized to [0, 1].
struct HeightProfile {
    Eigen::VectorXd t;          ///< normalized heights in [0, 1], uniform, includes 0 and 1
    double t_scale = 1.0;       ///< native height span mapped onto [0, 1]
    Eigen::VectorXd f;          ///< f > 0
    Eigen::VectorXd d2f;        ///< centered second differences at interior nodes
    Eigen::VectorXd minimizer;  ///< per-t location of the minimizer (angle; NaN if symmetric)
    bool concave = false;       ///< verdict: max d2f <= tol
    double tol = 0.0;           ///< tolerance used for the verdict

    double dt() const { return t[1] - t[0]; }
    double max_d2f() const { return d2f.size() ? d2f.maxCoeff() : 0.0; }

    void finish(double tolerance) {
        if (t.size() < 3) throw ConfigError("HeightProfile: need >= 3 samples");
        d2f = generalized_second_derivative(f, dt());
        tol = tolerance;
        concave = (max_d2f() <= tolerance);
    }
};

/// Chordal margins of the corollary bound:
///   margin(t) = f(t) - [(1-t) f(0) + t f(1)].
/// Concavity of f implies margin >= 0; for n = 3 the level quantity reduces
/// to sqrt(K).
struct InequalityReport {
    Eigen::VectorXd margin;
    double min_margin = 0.0;
    int dim_n = 0;
    bool case_n3 = false;
};

inline InequalityReport corollary_margin(const HeightProfile& p, int dim_n) {
    InequalityReport r;
    r.dim_n = dim_n;
    r.case_n3 = (dim_n == 3);
    const int m = int(p.t.size());
    r.margin.resize(m);
    const double f0 = p.f[0], f1 = p.f[m - 1];
    for (int j = 0; j < m; ++j) r.margin[j] = p.f[j] - ((1.0 - p.t[j]) * f0 + p.t[j] * f1);
    r.min_margin = r.margin.minCoeff();
    return r;
}

} // namespace minsurf
