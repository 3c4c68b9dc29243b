#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "minsurf/profile.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf {

/// Concentric-sphere ring in R^n with Dirichlet heights u = 0 on the outer
/// sphere and u = drop on the inner one (drop = 1 unless stated otherwise;
/// other heights amount to an affine relabeling of t).
struct RadialConfig {
    int dim_n = 3;
    double r_inner = 0, r_outer = 0;
    double drop = 1.0;

    void validate() const {
        if (dim_n < 2) throw ConfigError("RadialConfig: dim_n must be >= 2");
        if (!(r_inner > 0) || !(r_outer > r_inner))
            throw ConfigError("RadialConfig: need r_outer > r_inner > 0");
        if (!(drop > 0)) throw ConfigError("RadialConfig: drop must be positive");
    }
};

namespace detail {

/// Integral of c / sqrt(s^{2(n-1)} - c^2) over [a, b], a >= c^{1/(n-1)}.
/// The substitution s = s0 + w^2 with s0 = c^{1/(n-1)} removes the
/// inverse-square-root behavior at s = s0, so the integrand stays smooth even
/// when a coincides with the singular point (the c -> sup flux limit).
inline double graph_height_integral(int n, double c, double a, double b, double tol = 1e-12) {
    if (b <= a) return 0.0;
    const double p = 2.0 * (n - 1);
    const double s0 = std::pow(c, 1.0 / (n - 1));
    if (a < s0 * (1.0 - 1e-12)) throw ConfigError("graph_height_integral: interval below turning radius");
    const double wa = std::sqrt(std::max(0.0, a - s0));
    const double wb = std::sqrt(b - s0);
    auto f = [&](double w) {
        const double s = s0 + w * w;
        const double d = std::pow(s, p) - c * c;
        if (d <= 0) { // only reachable at w = 0 through rounding
            // limit 2 c / sqrt(p * s0^{p-1})
            return 2.0 * c / std::sqrt(p * std::pow(s0, p - 1.0));
        }
        return 2.0 * w * c / std::sqrt(d);
    };
    return integrate(f, wa, wb, tol);
}

/// Cancellation-free tail difference integrand:
///   1/sqrt(s^{2(n-1)} - 1) - s^{1-n}  =  s^{1-n} * x / (sqrt(1-x)(1+sqrt(1-x)))
/// with x = s^{-2(n-1)}; accurate for large s where the direct difference
/// would lose all digits.
inline double tail_difference_integrand(int n, double s) {
    const double p = 2.0 * (n - 1);
    const double x = std::pow(s, -p);
    const double rt = std::sqrt(1.0 - x);
    return std::pow(s, 1.0 - n) * x / (rt * (1.0 + rt));
}

} // namespace detail

/// Total boundary-height drop of the rotationally symmetric minimal graph
/// with flux constant c over the ring [r_inner, r_outer]:
///   integral of c / sqrt(s^{2(n-1)} - c^2).
/// Strictly increasing in c on (0, r_inner^{n-1}].
inline double height_drop(const RadialConfig& cfg, double c) {
    cfg.validate();
    const double c_max = std::pow(cfg.r_inner, cfg.dim_n - 1);
    if (!(c > 0) || c > c_max) throw ConfigError("height_drop: flux outside (0, r_inner^{n-1}]");
    return detail::graph_height_integral(cfg.dim_n, c, cfg.r_inner, cfg.r_outer);
}

/// Rotationally symmetric minimal graph between concentric spheres.
/// Stores quadrature samples of u(r) on a log-spaced radius grid and inverts
/// the height map with monotone cubic Hermite interpolation whose slopes come
/// from the closed-form u'(r); all pointwise curvature quantities are closed
/// forms in (r, c).
class RadialSolution {
public:
    /// Solve for the flux constant realizing the configured drop.
    /// Monotonicity of the drop in c makes bracketed bisection robust.
    static RadialSolution solve_flux(const RadialConfig& cfg) {
        cfg.validate();
        const double c_max = std::pow(cfg.r_inner, cfg.dim_n - 1);
        const double attainable = detail::graph_height_integral(cfg.dim_n, c_max, cfg.r_inner, cfg.r_outer);
        if (attainable < cfg.drop)
            throw NoGraphSolution("solve_flux: requested drop " + std::to_string(cfg.drop) +
                                      " exceeds attainable maximum " + std::to_string(attainable),
                                  attainable);
        const double eps = 1e-9 * c_max;
        double lo = eps, hi = c_max - eps;
        auto drop_at = [&](double c) {
            return detail::graph_height_integral(cfg.dim_n, c, cfg.r_inner, cfg.r_outer);
        };
        // widen toward the singular endpoint if the root sits inside the eps margin
        int guard = 0;
        while (drop_at(hi) < cfg.drop) {
            hi = c_max - (c_max - hi) * 0.125;
            if (++guard > 60)
                throw NoGraphSolution("solve_flux: drop only attainable in the singular limit",
                                      attainable);
        }
        if (drop_at(lo) > cfg.drop) lo = eps * 1e-6; // extremely shallow rings
        for (int it = 0; it < 200 && (hi - lo) > 1e-12 * c_max; ++it) {
            const double mid = 0.5 * (lo + hi);
            (drop_at(mid) < cfg.drop ? lo : hi) = mid;
        }
        const double c = 0.5 * (lo + hi);
        RadialSolution sol(cfg, c);
        if (std::abs(sol.drop() - cfg.drop) > 1e-10)
            throw NoConvergence("solve_flux: drop mismatch after bisection", std::abs(sol.drop() - cfg.drop));
        return sol;
    }

    /// Member with prescribed flux; the drop becomes whatever the quadrature
    /// yields (the catenoid band r in [2, R] is the c = 1 member).
    static RadialSolution from_flux(int dim_n, double r_inner, double r_outer, double c) {
        RadialConfig cfg{dim_n, r_inner, r_outer, 1.0};
        cfg.validate();
        const double c_max = std::pow(r_inner, dim_n - 1);
        if (!(c > 0) || c > c_max) throw ConfigError("from_flux: flux outside (0, r_inner^{n-1}]");
        RadialSolution sol(cfg, c);
        sol.cfg_.drop = sol.drop_;
        return sol;
    }

    const RadialConfig& config() const { return cfg_; }
    int dim() const { return cfg_.dim_n; }
    double flux() const { return c_; }
    double drop() const { return drop_; }

    /// Height u(r), decreasing from drop at r_inner to 0 at r_outer.
    double u_of_r(double r) const {
        if (r < cfg_.r_inner - 1e-12 || r > cfg_.r_outer + 1e-12)
            throw ConfigError("u_of_r: radius outside the ring");
        r = std::clamp(r, cfg_.r_inner, cfg_.r_outer);
        // bracket in the radius table, then Hermite with closed-form slopes
        const auto it = std::upper_bound(r_.begin(), r_.end(), r);
        int k = int(it - r_.begin()) - 1;
        k = std::clamp(k, 0, int(r_.size()) - 2);
        return hermite(r, r_[k], r_[k + 1], u_[k], u_[k + 1], du_dr(r_[k]), du_dr(r_[k + 1]));
    }

    /// Inverse height map r(t), t in [0, drop]; strictly decreasing.
    double r_of_t(double t) const {
        if (t < -1e-12 || t > drop_ + 1e-12) throw ConfigError("r_of_t: height outside [0, drop]");
        t = std::clamp(t, 0.0, drop_);
        if (t <= 0) return cfg_.r_outer;
        if (t >= drop_) return cfg_.r_inner;
        // u_ is decreasing in the table index direction of increasing r
        int lo = 0, hi = int(u_.size()) - 1;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            (u_[mid] > t ? lo : hi) = mid;
        }
        const double m0 = dr_du(r_[lo]), m1 = dr_du(r_[hi]);
        return hermite_monotone(t, u_[lo], u_[hi], r_[lo], r_[hi], m0, m1);
    }

    // -- closed-form pointwise quantities ------------------------------------

    double grad_norm(double r) const { return c_ / std::sqrt(pw(r) - c_ * c_); }
    double du_dr(double r) const { return -grad_norm(r); }
    double dr_du(double r) const { return -std::sqrt(pw(r) - c_ * c_) / c_; }
    /// h_t of the exported support representation h(theta, t) = r(t).
    double h_t_of_r(double r) const { return dr_du(r); }
    double K_of_r(double r) const { return std::pow(r, 1.0 - cfg_.dim_n); }
    double sigma1_of_r(double r) const { return (cfg_.dim_n - 1) / r; }
    /// Level quantity phi = c^{(n-3)/(n-1)} r^{2-n}.
    double phi_of_r(double r) const { return phi_scale() * std::pow(r, 2.0 - cfg_.dim_n); }
    double phi_scale() const { return std::pow(c_, (cfg_.dim_n - 3.0) / (cfg_.dim_n - 1.0)); }

    /// d^2/dt^2 of phi along the solution, in native height units:
    ///   phi_tt = -(n-1)(n-2) c^{(n-3)/(n-1)} r^{-n}.
    /// Follows from r_tt = (n-1)(1+r_t^2)/r; identically 0 for n = 2.
    double phi_tt_closed(double r) const {
        const int n = cfg_.dim_n;
        return -(n - 1.0) * (n - 2.0) * phi_scale() * std::pow(r, -double(n));
    }

    /// First integral r^{n-1} |u'| / sqrt(1 + u'^2); equals the flux for all r.
    double first_integral(double r) const {
        const double up = grad_norm(r);
        return std::pow(r, cfg_.dim_n - 1.0) * up / std::sqrt(1.0 + up * up);
    }

private:
    RadialSolution(const RadialConfig& cfg, double c) : cfg_(cfg), c_(c) { tabulate(); }

    double pw(double r) const { return std::pow(r, 2.0 * (cfg_.dim_n - 1)); }

    void tabulate() {
        const int m = 2048;
        r_.resize(m);
        u_.resize(m);
        const double ratio = cfg_.r_outer / cfg_.r_inner;
        for (int k = 0; k < m; ++k) r_[k] = cfg_.r_inner * std::pow(ratio, double(k) / (m - 1));
        r_.front() = cfg_.r_inner;
        r_.back() = cfg_.r_outer;
        u_[m - 1] = 0.0;
        for (int k = m - 2; k >= 0; --k)
            u_[k] = u_[k + 1] + detail::graph_height_integral(cfg_.dim_n, c_, r_[k], r_[k + 1]);
        drop_ = u_[0];
    }

    static double hermite(double x, double x0, double x1, double y0, double y1, double m0,
                          double m1) {
        const double d = x1 - x0, s = (x - x0) / d;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d * m0 +
               (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d * m1;
    }

    /// Hermite with the Fritsch-Carlson monotonicity limiter. Exact slopes of
    /// a smooth strictly monotone map satisfy the condition on fine tables;
    /// the limiter only acts on degenerate spacing.
    static double hermite_monotone(double x, double x0, double x1, double y0, double y1,
                                   double m0, double m1) {
        const double sec = (y1 - y0) / (x1 - x0);
        auto limit = [&](double m) {
            if (sec == 0.0) return 0.0;
            if (m / sec < 0.0) return 0.0;
            if (std::abs(m) > 3.0 * std::abs(sec)) return 3.0 * sec;
            return m;
        };
        return hermite(x, x0, x1, y0, y1, limit(m0), limit(m1));
    }

    RadialConfig cfg_;
    double c_ = 0;
    double drop_ = 0;
    std::vector<double> r_, u_;
};

inline RadialSolution solve_flux(const RadialConfig& cfg) { return RadialSolution::solve_flux(cfg); }

// -- catenoid (base radius 2) -------------------------------------------------

/// Height of the n-dimensional catenoid above the base circle r = 2:
///   u(r) = integral over [2, r] of 1 / sqrt(s^{2(n-1)} - 1).
/// Monotone increasing; u(2) = 0.
inline double catenoid_u(double r, int dim_n) {
    if (dim_n < 2) throw ConfigError("catenoid_u: dim_n >= 2");
    if (r < 2.0) throw ConfigError("catenoid_u: r must be >= 2");
    return detail::graph_height_integral(dim_n, 1.0, 2.0, r);
}

struct CatenoidInvariants {
    double grad_norm; ///< 1 / sqrt(r^{2(n-1)} - 1)
    double K;         ///< r^{1-n}
    double phi;       ///< r^{2-n}
};

/// Closed-form invariants of the catenoid level sets at radius r >= 2.
inline CatenoidInvariants catenoid_invariants(double r, int dim_n) {
    if (dim_n < 2) throw ConfigError("catenoid_invariants: dim_n >= 2");
    if (r < 2.0) throw ConfigError("catenoid_invariants: r must be >= 2");
    CatenoidInvariants v;
    v.grad_norm = 1.0 / std::sqrt(std::pow(r, 2.0 * (dim_n - 1)) - 1.0);
    v.K = std::pow(r, 1.0 - dim_n);
    v.phi = std::pow(r, 2.0 - dim_n);
    return v;
}

/// Total height R of the catenoid for n >= 3 (log-divergent for n = 2):
/// quadrature to a cutoff S, the analytic tail S^{2-n}/(n-2), and the
/// cancellation-free remainder integrated via s = S/v.
inline double catenoid_R(int dim_n) {
    if (dim_n < 3)
        throw ConfigError("catenoid_R: the total-height integral diverges for n = " +
                          std::to_string(dim_n));
    const double cutoff = 1e4;
    const double head = detail::graph_height_integral(dim_n, 1.0, 2.0, cutoff);
    const double tail = std::pow(cutoff, 2.0 - dim_n) / (dim_n - 2.0);
    auto rem = [&](double v) {
        const double s = cutoff / v;
        return detail::tail_difference_integrand(dim_n, s) * cutoff / (v * v);
    };
    const double remainder = integrate(rem, 1e-14, 1.0, 1e-12);
    return head + tail + remainder;
}

/// Residual of the leading-order tail expansion:
///   (-u + R) - r^{2-n}/(n-2) = integral over [r, inf) of the tail difference.
/// The ratio residual / r^{4-3n} stays bounded as r grows. Computed directly
/// from the difference integrand, so no catastrophic cancellation occurs.
inline double asymptotic_residual(double r, int dim_n) {
    if (dim_n < 3) throw ConfigError("asymptotic_residual: n >= 3");
    if (r < 2.0) throw ConfigError("asymptotic_residual: r must be >= 2");
    auto f = [&](double v) {
        const double s = r / v;
        return detail::tail_difference_integrand(dim_n, s) * r / (v * v);
    };
    return integrate(f, 1e-14, 1.0, 1e-12);
}

/// Tail height -u(r) + R = integral over [r, infinity) of the catenoid
/// integrand; always positive.
inline double catenoid_tail(double r, int dim_n) {
    if (dim_n < 3) throw ConfigError("catenoid_tail: n >= 3");
    if (r < 2.0) throw ConfigError("catenoid_tail: r must be >= 2");
    return std::pow(r, 2.0 - dim_n) / (dim_n - 2.0) + asymptotic_residual(r, dim_n);
}

/// The paper's catenoid example bundled as one object.
struct CatenoidModel {
    int dim_n;
    double base_radius = 2.0;
    double R = std::numeric_limits<double>::quiet_NaN(); ///< total height, n >= 3

    explicit CatenoidModel(int n) : dim_n(n) {
        if (n < 2) throw ConfigError("CatenoidModel: dim_n >= 2");
        if (n >= 3) R = catenoid_R(n);
    }
    double u(double r) const { return catenoid_u(r, dim_n); }
    CatenoidInvariants invariants(double r) const { return catenoid_invariants(r, dim_n); }
};

/// Sample the level quantity f(t) = c^{(n-3)/(n-1)} r(t)^{2-n} of a radial
/// solution on a uniform height grid (normalized to [0, 1]); the minimum over
/// the level sphere is the value itself.
inline HeightProfile radial_phi_profile(const RadialSolution& sol, int t_samples,
                                        double tol = 1e-8) {
    if (t_samples < 3) throw ConfigError("radial_phi_profile: need >= 3 samples");
    HeightProfile p;
    p.t.setLinSpaced(t_samples, 0.0, 1.0);
    p.t_scale = sol.drop();
    p.f.resize(t_samples);
    p.minimizer = Eigen::VectorXd::Constant(t_samples, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < t_samples; ++j) p.f[j] = sol.phi_of_r(sol.r_of_t(p.t[j] * sol.drop()));
    p.finish(tol);
    return p;
}

} // namespace minsurf
