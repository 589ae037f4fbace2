#include <cmath>
#include <limits>
#include <numbers>

#include <doctest.h>

#include "liouville/error.hpp"
#include "liouville/fraclap.hpp"

using namespace liouville;

TEST_CASE("constants are annihilated")
{
    for (int d : {2, 3})
        for (double a : {0.5, 1.0, 1.5})
            CHECK(std::abs(frac_laplacian_eval(constant_field(d, 3.7), Point(d, 0.3), a))
                  <= 1e-12);
}

TEST_CASE("Getoor identity")
{
    CHECK(getoor_constant(2, 1) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
    for (int d : {2, 3})
    {
        for (double a : {0.5, 1.0, 1.5})
        {
            double const c = getoor_constant(d, a);
            for (Point x : {Point(d, 0.0), Point(d, 0.3), Point(d, -0.5)})
            {
                double const v = frac_laplacian_eval(getoor_field(d, a), x, a);
                CHECK(v == doctest::Approx(c).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("Riesz kernel is harmonic away from the origin")
{
    CHECK(std::abs(frac_laplacian_eval(riesz_field(2, 1), Point{1, 0}, 1)) <= 1e-3);
    CHECK(std::abs(frac_laplacian_eval(riesz_field(3, 1.5), Point{0, 2, 0}, 1.5)) <= 1e-3);
}

TEST_CASE("linearity")
{
    double const a = 1.2;
    Field const g = getoor_field(2, a);
    Field const h = gaussian_field(Point{0.4, -0.2}, 0.7);
    Field mix = g;
    mix.eval = [&](std::span<double const> y) { return 2 * g(y) - 0.5 * h(y); };
    mix.support_radius.reset();
    mix.decay = std::numeric_limits<double>::infinity();

    for (Point x : {Point{0.1, 0.2}, Point{-0.6, 0.3}, Point{1.4, 0.0}})
    {
        double const lhs = frac_laplacian_eval(mix, x, a);
        double const rhs = 2 * frac_laplacian_eval(g, x, a) - 0.5 * frac_laplacian_eval(h, x, a);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("scaling covariance")
{
    for (double a : {0.7, 1.4})
    {
        for (double r : {0.5, 3.0})
        {
            Point const x{0.2, -0.4};
            Point const rx{r * x[0], r * x[1]};
            double const base = frac_laplacian_eval(getoor_field(2, a), x, a);
            double const scaled = frac_laplacian_eval(getoor_field(2, a, r), rx, a);
            CHECK(scaled == doctest::Approx(std::pow(r, -a) * base).epsilon(1e-6));
        }
    }
}

TEST_CASE("positive at a strict maximum")
{
    for (double a : {0.3, 1.0, 1.8})
    {
        Point const c{0.3, 0.1};
        CHECK(frac_laplacian_eval(gaussian_field(c, 0.5), c, a) > 0);
        Point const c3{0.0, 0.2, -0.1};
        if (a < 2)
            CHECK(frac_laplacian_eval(gaussian_field(c3, 2.0), c3, a) > 0);
    }
}

TEST_CASE("growing fields must have an integrable tail")
{
    Field f = constant_field(2, 1);
    f.eval = [](std::span<double const> y) { return std::pow(1 + y[0] * y[0] + y[1] * y[1], 0.75); };
    f.decay = -1.5;
    try
    {
        frac_laplacian_eval(f, Point{0, 0}, 1.0);
        FAIL("accepted a non-integrable tail");
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::TailNotIntegrable);
    }
    f.decay = -0.5;
    CHECK(std::isfinite(frac_laplacian_eval(f, Point{0, 0}, 1.0)));
}

TEST_CASE("Dynkin identity")
{
    CHECK(dynkin_residual(constant_field(2, 2.5), Point{0.3, 0}, origin_ball(2), 1) <= 1e-10);
    CHECK(dynkin_residual(getoor_field(2, 1), Point{0, 0}, origin_ball(2, 0.5), 1) <= 1e-3);
    CHECK(dynkin_residual(bump_field(2, 2), Point{0.3, 0}, origin_ball(2), 1) <= 1e-3);
}

TEST_CASE("Dynkin residual shrinks as tolerances tighten")
{
    std::vector<double> lt, lr;
    for (double tol : {1e-2, 1e-4, 1e-6})
    {
        QuadConfig q;
        q.rel_tol = tol;
        KernelConfig k;
        k.quad_rel_tol = tol;
        double const res = dynkin_residual(bump_field(2, 2), Point{0.3, 0.2}, origin_ball(2),
                                           0.8, q, k);
        lt.push_back(-std::log(tol));
        lr.push_back(std::log(std::max(res, 1e-300)));
    }
    double const slope = (lr.back() - lr.front()) / (lt.back() - lt.front());
    MESSAGE("log-log slope of residual against 1/tolerance: " << slope);
    CHECK(slope < 0);
}
