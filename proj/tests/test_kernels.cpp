#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <doctest.h>

#include "liouville/error.hpp"
#include "liouville/kernels.hpp"

using namespace liouville;
using std::numbers::pi;

namespace
{
ErrorCode code_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (Error const& e)
    {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

Point random_interior(std::mt19937_64& rng, int d, double radius = 1.0)
{
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u;
    Point p(static_cast<std::size_t>(d));
    double s = 0;
    for (double& c : p)
    {
        c = n(rng);
        s += c * c;
    }
    double const r = radius * std::pow(u(rng), 1.0 / d) * 0.999;
    for (double& c : p)
        c *= r / std::sqrt(s);
    return p;
}

//! Profile integral by Gauss-Kronrod: in t = s^{a/2} on [0, min(w, 1)], which
//! removes the s = 0 singularity, and in v = log s beyond 1.
double profile_oracle(double w, double a, int d)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto head = [&](double t) { return (2 / a) * std::pow(1 + std::pow(t, 2 / a), -0.5 * d); };
    double v = GK::integrate(head, 0.0, std::pow(std::min(w, 1.0), 0.5 * a), 15, 1e-14);
    if (w > 1)
    {
        auto tail = [&](double u) {
            return std::exp(0.5 * a * u) * std::pow(1 + std::exp(u), -0.5 * d);
        };
        v += GK::integrate(tail, 0.0, std::log(w), 15, 1e-14);
    }
    return v;
}
}  // namespace

TEST_CASE("geometric constants")
{
    CHECK(sphere_area(1) == doctest::Approx(2));
    CHECK(sphere_area(2) == doctest::Approx(2 * pi));
    CHECK(sphere_area(3) == doctest::Approx(4 * pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4 * pi / 3));
    CHECK(green_constant(2, 1) == doctest::Approx(1 / (2 * pi * pi)));
    CHECK(poisson_constant(2, 1) == doctest::Approx(1 / (pi * pi)));
    CHECK(exit_time_constant(2, 1) == doctest::Approx(2 / pi));
    // c_{d,a} = 2^a Gamma((d+a)/2) / (pi^{d/2} |Gamma(-a/2)|)
    CHECK(frac_laplacian_constant(2, 1)
          == doctest::Approx(2 * std::tgamma(1.5) / (pi * std::abs(std::tgamma(-0.5)))));
}

TEST_CASE("green profile matches the incomplete beta function and a quadrature")
{
    for (int d : {2, 3})
    {
        for (double a : {0.3, 1.0, 1.7})
        {
            for (double w : {1e-6, 0.01, 0.5, 1.0, 3.0, 40.0, 1e5})
            {
                double const x = w / (1 + w);
                double const ib = boost::math::beta(0.5 * a, 0.5 * (d - a), x);
                double const g = green_profile(w, a, d);
                CHECK(g == doctest::Approx(ib).epsilon(1e-12));
                CHECK(g == doctest::Approx(profile_oracle(w, a, d)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("green function examples")
{
    Ball const b = origin_ball(2);
    Point const x{0.3, 0}, y{0, 0.4};
    CHECK(green_ball(x, y, b, 1) == doctest::Approx(green_ball(y, x, b, 1)).epsilon(1e-12));
    CHECK(green_ball(Point{0.9, 0.9}, y, b, 1) == 0);
    CHECK(code_of([&] { green_ball(x, x, b, 1); }) == ErrorCode::DiagonalEvaluation);

    // x = 0, y = (1/2, 0): w = (1)(3/4)/(1/4) = 3, rho = 1/2
    double const oracle = green_constant(2, 1) * std::pow(0.5, -1.0) * profile_oracle(3, 1, 2);
    CHECK(green_ball(Point{0, 0}, Point{0.5, 0}, b, 1)
          == doctest::Approx(oracle).epsilon(1e-8));
    // alpha = 1, d = 2: the profile is 2 atan(sqrt w)
    CHECK(oracle == doctest::Approx(green_constant(2, 1) * 2 * 2 * std::atan(std::sqrt(3.0))));
}

TEST_CASE("green symmetry and covariance on random pairs")
{
    std::mt19937_64 rng(5);
    for (int d : {2, 3})
    {
        for (double a : {0.5, 1.0, 1.5})
        {
            Ball const unit = origin_ball(d);
            Point c(static_cast<std::size_t>(d), 0.0);
            c[0] = 3;
            c[1] = -1;
            double const r = 2.5;
            Ball const moved{c, r};
            for (int i = 0; i < 200; ++i)
            {
                auto const x = random_interior(rng, d);
                auto const y = random_interior(rng, d);
                double const g = green_ball(x, y, unit, a);
                CHECK(g == doctest::Approx(green_ball(y, x, unit, a)).epsilon(1e-12));

                Point X = x, Y = y;
                for (int k = 0; k < d; ++k)
                {
                    X[k] = c[k] + r * x[k];
                    Y[k] = c[k] + r * y[k];
                }
                CHECK(green_ball(X, Y, moved, a)
                      == doctest::Approx(std::pow(r, a - d) * g).epsilon(1e-10));
                CHECK(expected_exit_time(X, moved, a)
                      == doctest::Approx(std::pow(r, a) * expected_exit_time(x, unit, a))
                             .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("poisson kernel")
{
    Ball const b = origin_ball(2);
    Point const o{0, 0};
    CHECK(poisson_kernel_ball(o, Point{2, 0}, b, 1)
          == doctest::Approx(1 / (pi * pi) * std::sqrt(1.0 / 3) * 0.25).epsilon(1e-14));
    CHECK(code_of([&] { poisson_kernel_ball(o, Point{1, 0}, b, 1); })
          == ErrorCode::GeometryViolation);
    CHECK(code_of([&] { poisson_kernel_ball(Point{2, 0}, Point{3, 0}, b, 1); })
          == ErrorCode::GeometryViolation);

    // Independent radial integral from the center with s = cosh(t). Below t0
    // the integrand is 2/(pi cosh t) to relative O(t^2), and points that
    // close to the sphere are snapped onto it by the kernel.
    double const t0 = 1e-4;
    auto radial = [&](double t) {
        double const s = std::cosh(t);
        return poisson_kernel_ball(o, Point{s, 0}, b, 1) * 2 * pi * s * std::sinh(t);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    double const mass = 2 / pi * t0
                        + ts.integrate(radial, t0, 50.0);
    CHECK(mass == doctest::Approx(1).epsilon(1e-8));
}

TEST_CASE("poisson normalization at interior points")
{
    std::mt19937_64 rng(9);
    for (int d : {2, 3})
    {
        for (double a : {0.5, 1.0, 1.5})
        {
            Ball const b{Point(static_cast<std::size_t>(d), 0.5), 2.0};
            for (int i = 0; i < 10; ++i)
            {
                auto x = random_interior(rng, d, 2.0);
                for (double& c : x)
                    c += 0.5;
                CHECK(std::abs(poisson_expectation(x, b, a, constant_radial(1.0)) - 1) <= 1e-6);
            }
        }
    }
}

TEST_CASE("exit time")
{
    Ball const b = origin_ball(2);
    CHECK(expected_exit_time(Point{0, 0}, b, 1) == doctest::Approx(2 / pi));
    CHECK(expected_exit_time(Point{1, 0}, b, 1) == 0);
    CHECK(expected_exit_time(Point{0, 0}, origin_ball(2, 2), 1.3)
          == doctest::Approx(std::pow(2, 1.3) * expected_exit_time(Point{0, 0}, b, 1.3))
                 .epsilon(1e-14));
}

TEST_CASE("green quadrature reproduces occupation identities")
{
    std::mt19937_64 rng(21);
    for (int d : {2, 3})
    {
        for (double a : {0.5, 1.0, 1.5})
        {
            Ball const b = origin_ball(d, 1.5);
            for (int i = 0; i < 5; ++i)
            {
                auto const x = random_interior(rng, d, 1.5);
                double const t = expected_exit_time(x, b, a);
                CHECK(green_quadrature(x, b, a, constant_radial(1.0))
                      == doctest::Approx(t).epsilon(1e-6));
                CHECK(green_quadrature(x, b, a, constant_radial(0.0)) == 0);
            }
        }
    }
}

TEST_CASE("capacity bound")
{
    CHECK(capacity_bound(0, 2, 1) == 0);
    for (auto [d, a] : {std::pair{2, 1.0}, std::pair{3, 1.5}})
    {
        CHECK(capacity_bound(2.0, d, a) / capacity_bound(1.0, d, a)
              == doctest::Approx(std::pow(2.0, (d - a) / d)).epsilon(1e-14));
        // balls: slope of log bound against log r is d - a
        double const v1 = unit_ball_volume(d) * std::pow(3.0, d);
        double const v2 = unit_ball_volume(d) * std::pow(30.0, d);
        double const slope = std::log(capacity_bound(v2, d, a) / capacity_bound(v1, d, a))
                             / std::log(10.0);
        CHECK(slope == doctest::Approx(d - a).epsilon(1e-12));
        // attained by the unit ball
        CHECK(capacity_bound(unit_ball_volume(d), d, a)
              == doctest::Approx(ball_capacity(d, a)).epsilon(1e-12));
    }
}
