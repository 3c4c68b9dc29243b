#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "minsurf/concavity.hpp"
#include "minsurf/radial.hpp"

using namespace minsurf;

namespace {

// Brute-force composite Simpson; the low-tech oracle for the adaptive
// quadrature throughout this file.
template <class F>
double simpson(F f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

template <class F>
double trapezoid(F f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h);
    return acc * h;
}

} // namespace

TEST_CASE("solve_flux recovers the closed-form n=2 member with c=1") {
    // drop over [r0, r1] at flux c=1 is arccosh(r1) - arccosh(r0)
    const double r_in = 1.2;
    const double r_out = std::cosh(1.0 + std::acosh(1.2));
    const RadialSolution sol = solve_flux({2, r_in, r_out, 1.0});
    REQUIRE(sol.flux() == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(sol.drop() == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("degenerate ring is rejected") {
    REQUIRE_THROWS_AS(solve_flux({2, 1.5, 1.5, 1.0}), ConfigError);
    REQUIRE_THROWS_AS(solve_flux({1, 1.0, 2.0, 1.0}), ConfigError);
}

TEST_CASE("n=3 drop oracle: brute-force trapezoid on 1e6 points") {
    const RadialConfig cfg{3, 2.0, 10.0, 1.0};
    const double c = 2.0;
    const double brute = trapezoid(
        [&](double s) { return c / std::sqrt(std::pow(s, 4) - c * c); }, 2.0, 10.0, 1000000);
    REQUIRE(height_drop(cfg, c) == Catch::Approx(brute).margin(1e-7));
}

TEST_CASE("requested drop above the attainable maximum reports NoGraphSolution") {
    // [2, 10], n=3: the attainable maximum at c -> r_inner^2 is finite
    const double max_drop = height_drop({3, 2.0, 10.0, 1.0}, 4.0);
    try {
        solve_flux({3, 2.0, 10.0, max_drop * 1.05});
        FAIL("expected NoGraphSolution");
    } catch (const NoGraphSolution& e) {
        REQUIRE(e.attainable_drop == Catch::Approx(max_drop).margin(1e-9));
    }
    // just below the maximum still solves
    const RadialSolution ok = solve_flux({3, 2.0, 10.0, max_drop * 0.95});
    REQUIRE(ok.drop() == Catch::Approx(max_drop * 0.95).margin(1e-10));
}

TEST_CASE("height_drop is strictly increasing in the flux") {
    const RadialConfig cfg{3, 1.5, 4.0, 1.0};
    const double c_max = std::pow(1.5, 2);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double c = c_max * i / 101.0;
        const double d = height_drop(cfg, c);
        REQUIRE(d > prev);
        prev = d;
    }
}

TEST_CASE("catenoid_u: base value, closed form for n=2, Simpson oracle for n=3") {
    REQUIRE(catenoid_u(2.0, 3) == 0.0);
    REQUIRE(catenoid_u(3.0, 2) ==
            Catch::Approx(std::acosh(3.0) - std::acosh(2.0)).margin(1e-12));
    const double brute = simpson(
        [](double s) { return 1.0 / std::sqrt(std::pow(s, 4) - 1.0); }, 2.0, 5.0, 10000000);
    REQUIRE(catenoid_u(5.0, 3) == Catch::Approx(brute).margin(1e-10));
    REQUIRE_THROWS_AS(catenoid_u(1.5, 3), ConfigError);
}

TEST_CASE("catenoid_u is monotone increasing in r") {
    double prev = 0.0;
    for (double r = 2.1; r < 12.0; r += 0.7) {
        const double u = catenoid_u(r, 4);
        REQUIRE(u > prev);
        prev = u;
    }
}

TEST_CASE("catenoid invariants match the closed forms") {
    SECTION("n=3, r=2: K = 1/4, phi = 1/2, |grad u| = 1/sqrt(15)") {
        const auto v = catenoid_invariants(2.0, 3);
        REQUIRE(v.K == Catch::Approx(0.25).epsilon(1e-14));
        REQUIRE(v.phi == Catch::Approx(0.5).epsilon(1e-14));
        REQUIRE(v.grad_norm == Catch::Approx(1.0 / std::sqrt(15.0)).epsilon(1e-14));
    }
    SECTION("n=2: phi is identically 1 (the sharp case)") {
        for (double r : {2.0, 3.7, 9.0}) REQUIRE(catenoid_invariants(r, 2).phi == 1.0);
    }
}

TEST_CASE("catenoid_R: divergence for n=2, quadrature oracle for n=3 and n=4") {
    REQUIRE_THROWS_AS(catenoid_R(2), ConfigError);
    for (int n : {3, 4}) {
        // split at 1e4 with the analytic tail, Simpson on the bounded part
        const double cutoff = 1e4;
        const double brute =
            simpson([&](double s) { return 1.0 / std::sqrt(std::pow(s, 2.0 * (n - 1)) - 1.0); },
                    2.0, cutoff, 4000000) +
            std::pow(cutoff, 2.0 - n) / (n - 2.0);
        REQUIRE(catenoid_R(n) == Catch::Approx(brute).margin(1e-8));
    }
}

TEST_CASE("asymptotic residual: sign bookkeeping and bounded ratio") {
    SECTION("n=3: -u + R is about +1/r, so the residual is small and positive") {
        const double R = catenoid_R(3);
        const double r = 10.0;
        const double tail = R - catenoid_u(r, 3);
        REQUIRE(tail > 0.0);
        REQUIRE(tail == Catch::Approx(1.0 / r).epsilon(2e-3));
        REQUIRE(asymptotic_residual(r, 3) == Catch::Approx(tail - 1.0 / r).margin(1e-9));
        REQUIRE(asymptotic_residual(r, 3) > 0.0);
    }
    SECTION("residual / r^{4-3n} stays bounded on the radius ladder") {
        for (int n : {3, 4}) {
            double lo = 1e300, hi = 0.0;
            for (double r : {10.0, 20.0, 40.0, 80.0}) {
                const double scaled = asymptotic_residual(r, n) / std::pow(r, 4.0 - 3.0 * n);
                lo = std::min(lo, scaled);
                hi = std::max(hi, scaled);
            }
            REQUIRE(hi / lo < 3.0);
            // limit value 1 / (2 (3n - 4))
            REQUIRE(lo == Catch::Approx(1.0 / (2.0 * (3 * n - 4))).epsilon(0.05));
        }
    }
}

TEST_CASE("first integral and gradient consistency along a solved profile") {
    const RadialSolution sol = solve_flux({3, 2.0, 3.0, 1.0});
    for (int i = 0; i <= 20; ++i) {
        const double r = 2.0 + i * 0.05;
        REQUIRE(sol.first_integral(r) == Catch::Approx(sol.flux()).epsilon(1e-10));
        // |u'| = -1/h_t with the exported h(theta, t) = r(t)
        REQUIRE(sol.grad_norm(r) == Catch::Approx(-1.0 / sol.h_t_of_r(r)).epsilon(1e-12));
    }
}

TEST_CASE("height map and its inverse are mutually consistent") {
    const RadialSolution sol = solve_flux({3, 2.0, 10.0, 0.3});
    REQUIRE(sol.u_of_r(10.0) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(sol.u_of_r(2.0) == Catch::Approx(0.3).margin(1e-10));
    REQUIRE(sol.r_of_t(0.0) == 10.0);
    REQUIRE(sol.r_of_t(sol.drop()) == 2.0);
    for (int i = 1; i < 40; ++i) {
        const double t = sol.drop() * i / 40.0;
        const double r = sol.r_of_t(t);
        REQUIRE(sol.u_of_r(r) == Catch::Approx(t).margin(1e-9));
    }
    // strict monotonicity
    double prev = sol.r_of_t(0.0);
    for (int i = 1; i <= 64; ++i) {
        const double r = sol.r_of_t(sol.drop() * i / 64.0);
        REQUIRE(r < prev);
        prev = r;
    }
}

TEST_CASE("the catenoid is the c = 1, r_inner = 2 member") {
    // n=2: boundary data generated from catenoid_u with a unit drop
    const double r_out = std::cosh(1.0 + std::acosh(2.0));
    const RadialSolution s2 = solve_flux({2, 2.0, r_out, 1.0});
    REQUIRE(s2.flux() == Catch::Approx(1.0).margin(1e-9));
    // n=3: the unit drop is unattainable; the prescribed-flux member carries
    // the catenoid's own drop u_cat(r_out) - u_cat(r_in)
    const RadialSolution s3 = RadialSolution::from_flux(3, 2.0, 10.0, 1.0);
    REQUIRE(s3.drop() == Catch::Approx(catenoid_u(10.0, 3)).margin(1e-10));
    const RadialSolution again = solve_flux({3, 2.0, 10.0, s3.drop()});
    REQUIRE(again.flux() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("radial phi profile: affine for n=2, concave for the n=3 catenoid") {
    SECTION("n=2: f is constant 1/c") {
        const double r_out = std::cosh(1.0 + std::acosh(1.2));
        const RadialSolution sol = solve_flux({2, 1.2, r_out, 1.0});
        const HeightProfile p = radial_phi_profile(sol, 65);
        for (int j = 0; j < p.f.size(); ++j)
            REQUIRE(p.f[j] == Catch::Approx(1.0 / sol.flux()).epsilon(1e-9));
        REQUIRE(std::abs(p.max_d2f()) < 1e-6);
        REQUIRE(p.concave);
    }
    SECTION("n=3 catenoid band r in [2,10]: f = 1/r(t), strictly concave") {
        const RadialSolution sol = RadialSolution::from_flux(3, 2.0, 10.0, 1.0);
        const HeightProfile p = radial_phi_profile(sol, 129);
        for (int j = 0; j < p.f.size(); ++j) {
            const double r = sol.r_of_t(p.t[j] * sol.drop());
            REQUIRE(p.f[j] == Catch::Approx(1.0 / r).epsilon(1e-10));
        }
        REQUIRE(p.max_d2f() <= 1e-8);
        REQUIRE(p.concave);
    }
    SECTION("affine comparison on the far band r in [20, 40]") {
        const RadialSolution sol = RadialSolution::from_flux(3, 20.0, 40.0, 1.0);
        const HeightProfile p = radial_phi_profile(sol, 65);
        const double f0 = p.f[0], f1 = p.f[p.f.size() - 1];
        double worst = 0.0;
        for (int j = 0; j < p.f.size(); ++j)
            worst = std::max(worst,
                             std::abs(p.f[j] - ((1.0 - p.t[j]) * f0 + p.t[j] * f1)));
        REQUIRE(worst <= 0.01 * std::abs(f0 - f1));
    }
}

TEST_CASE("D^2 on the catenoid profile matches the analytic second derivative") {
    const RadialSolution sol = RadialSolution::from_flux(3, 2.0, 10.0, 1.0);
    const int m = 201;
    Eigen::VectorXd f(m);
    for (int j = 0; j < m; ++j)
        f[j] = sol.phi_of_r(sol.r_of_t(sol.drop() * j / double(m - 1)));
    const double dt = sol.drop() / (m - 1);
    const Eigen::VectorXd d2 = generalized_second_derivative(f, dt);
    for (int j = 1; j + 1 < m; j += 13) {
        const double r = sol.r_of_t(sol.drop() * j / double(m - 1));
        // chain rule through dr/dt = -sqrt(r^4 - 1): f'' = -2 / r^3
        REQUIRE(d2[j - 1] == Catch::Approx(-2.0 / (r * r * r)).margin(5e-4));
    }
}

TEST_CASE("generalized second derivative is exact on quadratics") {
    Eigen::VectorXd f(9);
    for (int j = 0; j < 9; ++j) { const double t = j / 8.0; f[j] = t * t; }
    const Eigen::VectorXd d2 = generalized_second_derivative(f, 1.0 / 8.0);
    for (int j = 0; j < d2.size(); ++j) REQUIRE(d2[j] == Catch::Approx(2.0).epsilon(1e-10));
    const Eigen::VectorXd d2n = generalized_second_derivative(-f, 1.0 / 8.0);
    for (int j = 0; j < d2n.size(); ++j) REQUIRE(d2n[j] == Catch::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("radial differential inequality: closed forms for n = 2, 3, 4") {
    SECTION("n=2 is the equality case") {
        const double r_out = std::cosh(1.0 + std::acosh(1.2));
        const RadialSolution sol = solve_flux({2, 1.2, r_out, 1.0});
        const Eigen::VectorXd v = radial_inequality_values(sol, 65);
        REQUIRE(v.cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("n=3 catenoid band [2.5, 8]: all values negative, wrong sign positive") {
        const RadialSolution sol = RadialSolution::from_flux(3, 2.5, 8.0, 1.0);
        const Eigen::VectorXd v = radial_inequality_values(sol, 129);
        REQUIRE(v.maxCoeff() <= 1e-8);
        REQUIRE(v.maxCoeff() < 0.0);
        const Eigen::VectorXd w = radial_wrong_sign_values(sol, 129);
        REQUIRE(w.minCoeff() > 0.0);
    }
    SECTION("n=4") {
        const RadialSolution sol = RadialSolution::from_flux(4, 2.0, 6.0, 1.0);
        REQUIRE(radial_inequality_values(sol, 65).maxCoeff() < 0.0);
        REQUIRE(radial_wrong_sign_values(sol, 65).minCoeff() > 0.0);
    }
}

TEST_CASE("corollary margins on concentric n=3 spheres") {
    // 1/r(t) >= (1-t)/3 + t/2 with r(0)=3, r(1)=2
    const RadialSolution sol = solve_flux({3, 2.0, 3.0, 1.0});
    const HeightProfile p = radial_phi_profile(sol, 129);
    REQUIRE(p.f[0] == Catch::Approx(1.0 / 3.0).margin(1e-12));
    REQUIRE(p.f[p.f.size() - 1] == Catch::Approx(0.5).margin(1e-12));
    const InequalityReport rep = corollary_margin(p, 3);
    REQUIRE(rep.case_n3);
    REQUIRE(rep.min_margin >= -1e-8);
}
