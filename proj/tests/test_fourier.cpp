#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "minsurf/fourier.hpp"

using namespace minsurf;

TEST_CASE("spectral derivatives are exact on resolved trigonometric data") {
    const int n = 16;
    Eigen::VectorXd f(n), f1(n), f2(n);
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * pi * k / n;
        f[k] = std::cos(th) + 0.3 * std::sin(3 * th);
        f1[k] = -std::sin(th) + 0.9 * std::cos(3 * th);
        f2[k] = -std::cos(th) - 2.7 * std::sin(3 * th);
    }
    const Eigen::VectorXd d1 = fourier_diff1(n) * f;
    const Eigen::VectorXd d2 = fourier_diff2(n) * f;
    REQUIRE((d1 - f1).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((d2 - f2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("odd grids work through the cosecant form") {
    const int n = 17;
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) f[k] = std::sin(2.0 * 2.0 * pi * k / n);
    const Eigen::VectorXd d2 = fourier_diff2(n) * f;
    for (int k = 0; k < n; ++k)
        REQUIRE(d2[k] == Catch::Approx(-4.0 * f[k]).margin(1e-11));
}

TEST_CASE("central4 matrices converge at 4th order") {
    auto err = [](int n) {
        Eigen::VectorXd f(n);
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * pi * k / n;
            f[k] = std::exp(std::sin(th));
        }
        const Eigen::VectorXd d1 = central4_diff1(n) * f;
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * pi * k / n;
            worst = std::max(worst, std::abs(d1[k] - std::cos(th) * std::exp(std::sin(th))));
        }
        return worst;
    };
    const double e1 = err(32), e2 = err(64);
    REQUIRE(e1 / e2 > 10.0); // ~16 for a 4th-order stencil
}

TEST_CASE("trig interpolant matches samples and spectral derivatives at nodes") {
    const int n = 24;
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * pi * k / n;
        f[k] = 1.0 / (2.0 + std::cos(th)) + 0.1 * std::sin(5 * th);
    }
    TrigInterp interp(f);
    const Eigen::VectorXd d1 = fourier_diff1(n) * f;
    const Eigen::VectorXd d2 = fourier_diff2(n) * f;
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * pi * k / n;
        REQUIRE(interp.eval(th) == Catch::Approx(f[k]).margin(1e-12));
        REQUIRE(interp.eval(th, 1) == Catch::Approx(d1[k]).margin(1e-10));
        REQUIRE(interp.eval(th, 2) == Catch::Approx(d2[k]).margin(1e-9));
    }
    // off-node evaluation converges spectrally; a smooth target at n=24 is
    // already far below single precision
    REQUIRE(interp.eval(0.4567) == Catch::Approx(1.0 / (2.0 + std::cos(0.4567)) +
                                                 0.1 * std::sin(5 * 0.4567)).margin(1e-8));
}
