#pragma once

#include <functional>
#include <span>
#include <vector>

namespace liouville
{
using Point = std::vector<double>;

struct Ball
{
    Point center;
    double radius = 1.0;

    int dim() const { return static_cast<int>(center.size()); }
};

//! Closed ball of the given radius about the origin.
Ball origin_ball(int d, double radius = 1.0);

struct KernelConfig
{
    double quad_rel_tol = 1e-8;
    unsigned max_quad_subdivisions = 15;
};

/*!
 * Function of the distance to a ball's center.
 *
 * Radii where the function is not smooth (kinks, support edges) go in
 * `breakpoints` so quadrature can split there.
 */
struct RadialFunction
{
    std::function<double(double)> f;
    std::vector<double> breakpoints;

    double operator()(double s) const { return f(s); }
};

RadialFunction constant_radial(double value);

//---------------------------------------------------------------------------//
// Geometry and normalization constants
//---------------------------------------------------------------------------//

double norm(std::span<double const> x);
double distance(std::span<double const> x, std::span<double const> y);

//! Surface area of the unit sphere S^{d-1} (2 for d = 1).
double sphere_area(int d);
//! Volume of the unit ball in R^d.
double unit_ball_volume(int d);

//! Constant c_{d,a} of the singular-integral form of (-Laplacian)^{a/2}.
double frac_laplacian_constant(int d, double alpha);
//! Prefactor of the ball Green function, Gamma(d/2)/(2^a pi^{d/2} Gamma(a/2)^2).
double green_constant(int d, double alpha);
//! Prefactor of the ball Poisson kernel, Gamma(d/2) pi^{-d/2-1} sin(pi a/2).
double poisson_constant(int d, double alpha);
//! E_0[exit time of the unit ball], Gamma(d/2)/(2^a Gamma(1+a/2) Gamma((d+a)/2)).
double exit_time_constant(int d, double alpha);

/*!
 * Integral of s^{a/2-1} (1+s)^{-d/2} over [0, w]; the Green function of a
 * ball is green_constant * |x-y|^{a-d} times this at
 * w = (r^2-|x|^2)(r^2-|y|^2) / (r^2 |x-y|^2).
 *
 * Summed as the hypergeometric series of the incomplete beta function
 * B_x(a/2, (d-a)/2), x = w / (1 + w), switching to the complement for w > 1.
 */
double green_profile(double w, double alpha, int d);

//---------------------------------------------------------------------------//
// Kernels
//---------------------------------------------------------------------------//

/*!
 * Green function of the alpha-stable process killed on leaving the open
 * ball. Zero if either point is outside; throws DiagonalEvaluation when
 * x = y inside the ball.
 */
double green_ball(std::span<double const> x,
                  std::span<double const> y,
                  Ball const& ball,
                  double alpha);

//! Density of the exit position from the ball started at interior x.
double poisson_kernel_ball(std::span<double const> x,
                           std::span<double const> y,
                           Ball const& ball,
                           double alpha);

//! E_x[exit time], zero on and outside the boundary.
double expected_exit_time(std::span<double const> x,
                          Ball const& ball,
                          double alpha);

/*!
 * Integral of G(x, y) f(|y - center|) over the ball, i.e. the expected
 * occupation E_x[int_0^tau f(X_s) ds].
 *
 * Integrates over spheres |y - center| = s; the diagonal singularity sits on
 * the sphere through x, so the radial range is split there.
 */
double green_quadrature(std::span<double const> x,
                        Ball const& ball,
                        double alpha,
                        RadialFunction const& f,
                        KernelConfig const& cfg = {});

//! E_x[f(|X_tau - center|)] by quadrature of the Poisson kernel.
double poisson_expectation(std::span<double const> x,
                           Ball const& ball,
                           double alpha,
                           RadialFunction const& f,
                           KernelConfig const& cfg = {});

//---------------------------------------------------------------------------//
// Capacity
//---------------------------------------------------------------------------//

/*!
 * Capacity of the unit ball for the alpha-stable process, normalized so the
 * equilibrium potential is built from the whole-space Green function
 * Gamma((d-a)/2) / (2^a pi^{d/2} Gamma(a/2)) |x-y|^{a-d}.
 */
double ball_capacity(int d, double alpha);

/*!
 * kappa in capacity_bound: chosen so the bound is attained by balls, which
 * minimize capacity among sets of a given volume.
 */
double capacity_kappa(int d, double alpha);

//! kappa * volume^{(d-a)/d}, a lower bound for the capacity of any set.
double capacity_bound(double volume, int d, double alpha);

}  // namespace liouville
