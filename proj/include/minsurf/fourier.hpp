#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

inline constexpr double pi = 3.14159265358979323846;

/// First-derivative spectral differentiation matrix for the uniform periodic
/// grid theta_j = 2*pi*j/N on [0, 2*pi).
inline Eigen::MatrixXd fourier_diff1(int n) {
    if (n < 2) throw ConfigError("fourier_diff1: need at least 2 nodes");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    const double h = 2.0 * pi / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int k = i - j;
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            if (n % 2 == 0)
                d(i, j) = 0.5 * sgn / std::tan(0.5 * k * h);
            else
                d(i, j) = 0.5 * sgn / std::sin(0.5 * k * h);
        }
    }
    return d;
}

/// Second-derivative spectral differentiation matrix (same grid convention).
inline Eigen::MatrixXd fourier_diff2(int n) {
    if (n < 2) throw ConfigError("fourier_diff2: need at least 2 nodes");
    const double h = 2.0 * pi / n;
    Eigen::MatrixXd d(n, n);
    if (n % 2 == 0) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    d(i, j) = -pi * pi / (3.0 * h * h) - 1.0 / 6.0;
                } else {
                    const int k = i - j;
                    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
                    const double s = std::sin(0.5 * k * h);
                    d(i, j) = -sgn / (2.0 * s * s);
                }
            }
        }
    } else {
        const Eigen::MatrixXd d1 = fourier_diff1(n);
        d = d1 * d1;
    }
    return d;
}

/// 4th-order central-difference matrices on the same periodic grid.
/// Fallback scheme behind the spectral default.
inline Eigen::MatrixXd central4_diff1(int n) {
    if (n < 5) throw ConfigError("central4_diff1: need at least 5 nodes");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    const double h = 2.0 * pi / n;
    for (int i = 0; i < n; ++i) {
        d(i, (i + 2) % n) += -1.0 / (12 * h);
        d(i, (i + 1) % n) += 8.0 / (12 * h);
        d(i, (i - 1 + n) % n) += -8.0 / (12 * h);
        d(i, (i - 2 + 2 * n) % n) += 1.0 / (12 * h);
    }
    return d;
}

inline Eigen::MatrixXd central4_diff2(int n) {
    if (n < 5) throw ConfigError("central4_diff2: need at least 5 nodes");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    const double h = 2.0 * pi / n;
    const double h2 = h * h;
    for (int i = 0; i < n; ++i) {
        d(i, (i + 2) % n) += -1.0 / (12 * h2);
        d(i, (i + 1) % n) += 16.0 / (12 * h2);
        d(i, i) += -30.0 / (12 * h2);
        d(i, (i - 1 + n) % n) += 16.0 / (12 * h2);
        d(i, (i - 2 + 2 * n) % n) += -1.0 / (12 * h2);
    }
    return d;
}

/// Trigonometric interpolant of N uniform periodic samples on [0, 2*pi).
/// Evaluates the interpolant and its derivatives at arbitrary angles; agrees
/// with the spectral differentiation matrices at the nodes.
class TrigInterp {
public:
    explicit TrigInterp(const Eigen::VectorXd& samples) : n_(int(samples.size())) {
        if (n_ < 2) throw ConfigError("TrigInterp: need at least 2 samples");
        const int m = n_ / 2;
        a_.assign(m + 1, 0.0);
        b_.assign(m + 1, 0.0);
        for (int k = 0; k <= m; ++k) {
            double ca = 0.0, cb = 0.0;
            for (int j = 0; j < n_; ++j) {
                const double ang = 2.0 * pi * k * j / n_;
                ca += samples[j] * std::cos(ang);
                cb += samples[j] * std::sin(ang);
            }
            a_[k] = 2.0 * ca / n_;
            b_[k] = 2.0 * cb / n_;
        }
    }

    /// Evaluate the deriv-th derivative (deriv = 0..3) at theta.
    double eval(double theta, int deriv = 0) const {
        const int m = n_ / 2;
        const bool even = (n_ % 2 == 0);
        double acc = (deriv == 0) ? 0.5 * a_[0] : 0.0;
        const int top = even ? m - 1 : m;
        for (int k = 1; k <= top; ++k) acc += mode(theta, k, a_[k], b_[k], deriv);
        if (even && m >= 1) acc += 0.5 * mode(theta, m, a_[m], 0.0, deriv);
        return acc;
    }

    int size() const { return n_; }

private:
    static double mode(double theta, int k, double a, double b, int deriv) {
        const double c = std::cos(k * theta), s = std::sin(k * theta);
        const double kk = double(k);
        switch (deriv) {
            case 0: return a * c + b * s;
            case 1: return kk * (-a * s + b * c);
            case 2: return kk * kk * (-a * c - b * s);
            case 3: return kk * kk * kk * (a * s - b * c);
            default: throw ConfigError("TrigInterp: derivative order not supported");
        }
    }

    int n_;
    std::vector<double> a_, b_;
};

} // namespace minsurf
