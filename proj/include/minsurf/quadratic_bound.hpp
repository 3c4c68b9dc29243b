#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "minsurf/errors.hpp"

namespace minsurf {

/// Sharp upper bound for the concave quadratic
///   Q(X) = - sum_k b_k X_k^2 - lambda (sum_k X_k)^2 + 4 mu sum_k c_k X_k,
/// namely Q <= 4 mu^2 Gamma with
///   Gamma = sum c_k^2/b_k - lambda (1 + lambda sum 1/b_k)^{-1} (sum c_k/b_k)^2.
/// Requires b_k > 0 and lambda >= 0; an empty variable list gives Gamma = 0.
struct QuadraticBound {
    double gamma = 0;
    double bound = 0;
};

inline QuadraticBound quadratic_bound(double lambda, double mu, const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& c) {
    if (lambda < 0) throw ConfigError("quadratic_bound: lambda must be >= 0");
    if (b.size() != c.size()) throw ConfigError("quadratic_bound: b and c sizes differ");
    double s_cc = 0, s_c = 0, s_1 = 0;
    for (int k = 0; k < b.size(); ++k) {
        if (!(b[k] > 0)) throw ConfigError("quadratic_bound: b_k must be positive");
        s_cc += c[k] * c[k] / b[k];
        s_c += c[k] / b[k];
        s_1 += 1.0 / b[k];
    }
    QuadraticBound q;
    q.gamma = s_cc - lambda * s_c * s_c / (1.0 + lambda * s_1);
    q.bound = 4.0 * mu * mu * q.gamma;
    return q;
}

/// Value of Q at a point; shared by the brute-force maximization oracle.
inline double quadratic_Q(double lambda, double mu, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& c, const Eigen::VectorXd& x) {
    double s = 0, sum = 0;
    for (int k = 0; k < b.size(); ++k) {
        s += -b[k] * x[k] * x[k] + 4.0 * mu * c[k] * x[k];
        sum += x[k];
    }
    return s - lambda * sum * sum;
}

} // namespace minsurf
