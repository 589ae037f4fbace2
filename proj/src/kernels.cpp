#include "liouville/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "liouville/error.hpp"
#include "liouville/quadrature.hpp"

namespace liouville
{
namespace
{
using std::numbers::pi;

constexpr double boundary_snap = 1e-12;

void check_alpha(double alpha, int d)
{
    if (d < 1 || !(alpha > 0) || !(alpha < std::min(2.0, double(d))))
    {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside (0, min(2, " << d << "))";
        throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
}

void check_dims(std::span<double const> x, Ball const& ball)
{
    if (static_cast<int>(x.size()) != ball.dim() || ball.dim() < 1)
        throw Error(ErrorCode::InvalidArgument, "point/ball dimension mismatch");
    if (!(ball.radius > 0))
        throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
}

//! Where a point sits relative to a ball, after boundary snapping.
enum class Where
{
    Inside,
    Boundary,
    Outside,
};

struct Located
{
    Where where;
    double dist;  //!< distance to the center (snapped onto the sphere)
};

Located locate(std::span<double const> x, Ball const& ball)
{
    double r = distance(x, ball.center);
    double const gap = r - ball.radius;
    if (std::abs(gap) <= boundary_snap * ball.radius)
        return {Where::Boundary, ball.radius};
    return {gap < 0 ? Where::Inside : Where::Outside, r};
}

//! |x - y| for |x - c| = a, |y - c| = s = a + delta at angle phi.
double chord(double a, double s, double delta, double phi)
{
    double const h = std::sin(0.5 * phi);
    return std::sqrt(delta * delta + 4 * a * s * h * h);
}

//! G for a ball of radius R with |x-c| = a, |y-c| = s, |x-y| = rho.
double green_from_distances(
    double a, double s, double rho, double R, double alpha, int d)
{
    if (a >= R || s >= R)
        return 0.0;
    if (rho <= 0)
        return 0.0;  // only reached at isolated quadrature nodes
    double const w = (R - a) * (R + a) * (R - s) * (R + s) / (R * R * rho * rho);
    return green_constant(d, alpha) * std::pow(rho, alpha - d)
           * green_profile(w, alpha, d);
}

//! Peak width of |x-y|^{-k} in the angle on the sphere of radius s.
double angular_scale(double a, double s, double delta)
{
    if (a <= 0 || s <= 0)
        return pi;
    return std::min(pi / 2, std::abs(delta) / std::sqrt(a * s));
}

/*!
 * Integral over the unit sphere of g(|x - c - s theta|), where |x - c| = a
 * and delta = s - a is passed separately so it keeps full precision.
 *
 * Parametrized by the angle to the axis through x. When s is close to a the
 * integrand peaks at phi = 0 with width ~|s - a| / sqrt(a s) and decays
 * algebraically, so panels grow geometrically from that width.
 */
template<class G>
double spherical_mean(
    int d, double a, double s, double delta, double rel_tol, G&& g)
{
    if (d == 1)
        return g(std::abs(delta)) + g(s + a);
    if (a == 0)
        return sphere_area(d) * g(s);
    double const weight = sphere_area(d - 1);
    auto integrand = [&](double phi) {
        double const jac = d == 2 ? 1.0 : std::pow(std::sin(phi), d - 2);
        return jac * g(chord(a, s, delta, phi));
    };
    std::vector<double> brk;
    for (double b = std::max(angular_scale(a, s, delta), 1e-15); b < pi; b *= 4)
        brk.push_back(b);
    auto r = quad::gauss_kronrod(integrand, 0.0, pi, rel_tol, 10, brk);
    return weight * r.value;
}
}  // namespace

//---------------------------------------------------------------------------//
Ball origin_ball(int d, double radius)
{
    return Ball{Point(static_cast<std::size_t>(d), 0.0), radius};
}

RadialFunction constant_radial(double value)
{
    return RadialFunction{[value](double) { return value; }, {}};
}

double norm(std::span<double const> x)
{
    double s = 0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

double distance(std::span<double const> x, std::span<double const> y)
{
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const t = x[i] - y[i];
        s += t * t;
    }
    return std::sqrt(s);
}

double sphere_area(int d)
{
    return 2 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double unit_ball_volume(int d)
{
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1);
}

double frac_laplacian_constant(int d, double alpha)
{
    return std::pow(2.0, alpha) * std::tgamma(0.5 * (d + alpha))
           / (std::pow(pi, 0.5 * d) * std::abs(std::tgamma(-0.5 * alpha)));
}

double green_constant(int d, double alpha)
{
    double const g = std::tgamma(0.5 * alpha);
    return std::tgamma(0.5 * d)
           / (std::pow(2.0, alpha) * std::pow(pi, 0.5 * d) * g * g);
}

double poisson_constant(int d, double alpha)
{
    return std::tgamma(0.5 * d) * std::pow(pi, -0.5 * d - 1)
           * std::sin(0.5 * pi * alpha);
}

double exit_time_constant(int d, double alpha)
{
    return std::tgamma(0.5 * d)
           / (std::pow(2.0, alpha) * std::tgamma(1 + 0.5 * alpha)
              * std::tgamma(0.5 * (d + alpha)));
}

double green_profile(double w, double alpha, int d)
{
    if (!(w > 0))
        return 0.0;
    double const a = 0.5 * alpha;
    double const b = 0.5 * (d - alpha);
    // s = x / (1 - x) turns the integral into the incomplete beta B_x(a, b)
    // at x = w / (1 + w). The series ratio is x, so it is only summed for
    // x <= 1/2 and the complement B(a, b) - B_{1-x}(b, a) is used otherwise.
    auto partial = [](double x, double one_minus_x, double p, double q) {
        double term = 1.0;
        double sum = 1.0;
        for (int n = 0; n < 200 && term > 1e-17 * sum; ++n)
        {
            term *= (p + q + n) / (p + 1 + n) * x;
            sum += term;
        }
        return std::pow(x, p) * std::pow(one_minus_x, q) / p * sum;
    };
    if (w <= 1)
        return partial(w / (1 + w), 1 / (1 + w), a, b);
    double const total
        = std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    return total - partial(1 / (1 + w), 1 / (1 + 1 / w), b, a);
}

//---------------------------------------------------------------------------//
double green_ball(std::span<double const> x,
                  std::span<double const> y,
                  Ball const& ball,
                  double alpha)
{
    check_dims(x, ball);
    check_dims(y, ball);
    int const d = ball.dim();
    check_alpha(alpha, d);
    auto const lx = locate(x, ball);
    auto const ly = locate(y, ball);
    if (lx.where != Where::Inside || ly.where != Where::Inside)
        return 0.0;
    double const rho = distance(x, y);
    if (rho == 0)
        throw Error(ErrorCode::DiagonalEvaluation,
                    "Green function is singular at x = y");
    return green_from_distances(lx.dist, ly.dist, rho, ball.radius, alpha, d);
}

double poisson_kernel_ball(std::span<double const> x,
                           std::span<double const> y,
                           Ball const& ball,
                           double alpha)
{
    check_dims(x, ball);
    check_dims(y, ball);
    int const d = ball.dim();
    check_alpha(alpha, d);
    auto const lx = locate(x, ball);
    auto const ly = locate(y, ball);
    if (lx.where != Where::Inside)
        throw Error(ErrorCode::GeometryViolation,
                    "Poisson kernel needs x strictly inside the ball");
    if (ly.where != Where::Outside)
        throw Error(ErrorCode::GeometryViolation,
                    "Poisson kernel needs y strictly outside the closed ball");
    double const R = ball.radius;
    double const ratio = (R - lx.dist) * (R + lx.dist)
                         / ((ly.dist - R) * (ly.dist + R));
    return poisson_constant(d, alpha) * std::pow(ratio, 0.5 * alpha)
           * std::pow(distance(x, y), -d);
}

double expected_exit_time(std::span<double const> x,
                          Ball const& ball,
                          double alpha)
{
    check_dims(x, ball);
    int const d = ball.dim();
    check_alpha(alpha, d);
    auto const lx = locate(x, ball);
    if (lx.where != Where::Inside)
        return 0.0;
    double const R = ball.radius;
    return exit_time_constant(d, alpha)
           * std::pow((R - lx.dist) * (R + lx.dist), 0.5 * alpha);
}

double green_quadrature(std::span<double const> x,
                        Ball const& ball,
                        double alpha,
                        RadialFunction const& f,
                        KernelConfig const& cfg)
{
    check_dims(x, ball);
    int const d = ball.dim();
    check_alpha(alpha, d);
    auto const lx = locate(x, ball);
    if (lx.where != Where::Inside)
        return 0.0;
    double const R = ball.radius;
    double const a = lx.dist;
    double const tol = cfg.quad_rel_tol;

    // Shells at s = a + delta. The sphere through x carries an integrable
    // singularity, so both sides are integrated in delta to keep |s - a|
    // resolved down to underflow.
    auto shell = [&](double delta) {
        double const s = a + delta;
        // Below 1e-150 R the shell weight underflows while |x-y|^{a-d}
        // overflows; the skipped mass is of order (1e-150)^a.
        if (s <= 1e-150 * R || s >= R || delta == 0)
            return 0.0;
        double const fs = f(s);
        if (fs == 0)
            return 0.0;
        double const mean
            = spherical_mean(d, a, s, delta, 0.1 * tol, [&](double rho) {
                  return green_from_distances(a, s, rho, R, alpha, d);
              });
        return fs * std::pow(s, d - 1) * mean;
    };

    std::vector<double> inner_brk;
    std::vector<double> outer_brk;
    for (double b : f.breakpoints)
        (b < a ? inner_brk : outer_brk).push_back(std::abs(b - a));
    auto r = quad::tanh_sinh(shell, 0.0, R - a, tol, outer_brk);
    if (a > 0)
    {
        auto in = quad::tanh_sinh(
            [&](double u) { return shell(-u); }, 0.0, a, tol, inner_brk);
        r = {r.value + in.value, r.error + in.error, r.l1 + in.l1};
    }
    return quad::checked(r, tol, "green_quadrature");
}

double poisson_expectation(std::span<double const> x,
                           Ball const& ball,
                           double alpha,
                           RadialFunction const& f,
                           KernelConfig const& cfg)
{
    check_dims(x, ball);
    int const d = ball.dim();
    check_alpha(alpha, d);
    auto const lx = locate(x, ball);
    if (lx.where != Where::Inside)
        throw Error(ErrorCode::GeometryViolation,
                    "exit expectation needs x strictly inside the ball");
    double const R = ball.radius;
    double const a = lx.dist;
    double const tol = cfg.quad_rel_tol;
    double const prefactor = poisson_constant(d, alpha)
                             * std::pow((R - a) * (R + a), 0.5 * alpha);

    // Shells at s = R + u; u is kept separately so the (s - R)^{-a/2}
    // singularity stays resolved.
    auto shell_at = [&](double s, double u) {
        if (!(u > 0) || !std::isfinite(s))
            return 0.0;
        double const fs = f(s);
        if (fs == 0)
            return 0.0;
        double const mean = spherical_mean(
            d, a, s, s - a, 0.1 * tol, [d](double rho) {
                return std::pow(rho, -d);
            });
        return fs * std::pow(s, d - 1) * std::pow(u * (s + R), -0.5 * alpha)
               * mean;
    };

    // Near range [R, 2R] in u = s - R; the rest through s = 2R / t.
    double const mid = 2 * R;
    std::vector<double> near_brk;
    for (double b : f.breakpoints)
        near_brk.push_back(b - R);
    auto near = quad::tanh_sinh(
        [&](double u) { return shell_at(R + u, u); }, 0.0, R, tol, near_brk);

    std::vector<double> tail_brk;
    for (double b : f.breakpoints)
    {
        if (b > mid)
            tail_brk.push_back(mid / b);
    }
    auto far = quad::tanh_sinh(
        [&](double t) {
            // The integrand is O(t^{a-1}) here; the cut-off mass is O(1e-100 a).
            if (t <= 1e-100)
                return 0.0;
            double const s = mid / t;
            return shell_at(s, s - R) * mid / (t * t);
        },
        0.0,
        1.0,
        tol,
        tail_brk);

    quad::Result total{near.value + far.value,
                       near.error + far.error,
                       near.l1 + far.l1};
    return prefactor * quad::checked(total, tol, "poisson_expectation");
}

//---------------------------------------------------------------------------//
double ball_capacity(int d, double alpha)
{
    check_alpha(alpha, d);
    double const ga = std::tgamma(0.5 * alpha);
    double const riesz = std::tgamma(0.5 * (d - alpha))
                         / (std::pow(2.0, alpha) * std::pow(pi, 0.5 * d) * ga);
    // Equilibrium measure of the unit ball is proportional to
    // (1-|y|^2)^{-a/2}; its potential at the origin fixes the constant.
    double const beta_fn = std::tgamma(0.5 * d) * std::tgamma(1 - 0.5 * alpha)
                           / std::tgamma(0.5 * d + 1 - 0.5 * alpha);
    return beta_fn / (riesz * ga * std::tgamma(1 - 0.5 * alpha));
}

double capacity_kappa(int d, double alpha)
{
    return ball_capacity(d, alpha)
           * std::pow(unit_ball_volume(d), -(d - alpha) / double(d));
}

double capacity_bound(double volume, int d, double alpha)
{
    if (!(volume >= 0))
        throw Error(ErrorCode::InvalidArgument, "volume must be nonnegative");
    if (volume == 0)
        return 0.0;
    return capacity_kappa(d, alpha) * std::pow(volume, (d - alpha) / double(d));
}

}  // namespace liouville
