#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "kernels.hpp"

namespace liouville
{
struct QuadConfig
{
    double split_radius = 0.1;  //!< near/far boundary around x
    int near_order = 2;         //!< Taylor order of the innermost piece
    int radial_nodes = 4;       //!< initial panels of the near-field rule
    int angular_nodes = 4;      //!< initial panels per angle (d <= 3)
    double rel_tol = 1e-9;
    std::uint64_t seed = 0;  //!< direction sampling for d > 3
};

//! Sphere where a field is not C^2; radius 0 marks a point singularity.
struct KinkSphere
{
    Point center;
    double radius = 0;
};

/*!
 * Scalar field on R^d given as an evaluation callback.
 *
 * decay is g in |f(y)| = O(|y|^{-g}) (negative for growth, infinity for
 * faster than any power). With a support radius the field vanishes outside
 * the closed ball of that radius about the origin.
 */
struct Field
{
    int dim = 2;
    std::function<double(std::span<double const>)> eval;
    double decay = 0;
    std::optional<double> support_radius;
    std::vector<KinkSphere> kinks;

    double operator()(std::span<double const> y) const { return eval(y); }
};

struct FracLapResult
{
    double value = 0;
    double error = 0;              //!< estimate from the angular rule
    double angular_variance = 0;   //!< sampling variance, d > 3 only
    std::size_t directions = 0;    //!< radial integrals evaluated
};

/*!
 * (-Laplacian)^{a/2} f at x as the symmetrized singular integral
 * (c/2) int (2 f(x) - f(x+z) - f(x-z)) |z|^{-d-a} dz.
 *
 * Polar coordinates about x: for |z| below 1e-2 split_radius the second
 * difference is replaced by its quadratic Taylor term, up to split_radius
 * the radius is integrated in u = |z|^{2-a}, beyond that directly, and the
 * tail past the last kink or the support uses s = R/t with the 2 f(x) part
 * done analytically. Radial pieces are cut where the ray crosses a kink
 * sphere or passes closest to a singular point.
 */
FracLapResult frac_laplacian_detailed(Field const& f,
                                      std::span<double const> x,
                                      double alpha,
                                      QuadConfig const& cfg = {});

double frac_laplacian_eval(Field const& f,
                           std::span<double const> x,
                           double alpha,
                           QuadConfig const& cfg = {});

struct DynkinTerms
{
    double value = 0;        //!< f(x)
    double exit = 0;         //!< E_x[f(X_tau)]
    double occupation = 0;   //!< int_ball G(x,y) (-D)^{a/2} f(y) dy
    double residual = 0;     //!< |value - exit - occupation|
};

/*!
 * Terms of the Dynkin identity on a ball for a field radial about the
 * ball's center. Both expectations are deterministic quadratures.
 */
DynkinTerms dynkin_terms(Field const& f,
                         std::span<double const> x,
                         Ball const& ball,
                         double alpha,
                         QuadConfig const& qcfg = {},
                         KernelConfig const& kcfg = {});

double dynkin_residual(Field const& f,
                       std::span<double const> x,
                       Ball const& ball,
                       double alpha,
                       QuadConfig const& qcfg = {},
                       KernelConfig const& kcfg = {});

//---------------------------------------------------------------------------//
// Test fields
//---------------------------------------------------------------------------//

//! 2^a Gamma(1+a/2) Gamma((d+a)/2) / Gamma(d/2)
double getoor_constant(int d, double alpha);

Field constant_field(int d, double value);
//! (1 - |y|^2/r^2)_+^{a/2}; its operator value inside is getoor_constant r^{-a}.
Field getoor_field(int d, double alpha, double radius = 1.0);
//! |y|^{a-d}, a-harmonic away from the origin.
Field riesz_field(int d, double alpha);
//! exp(1 - 1/(1 - |y|^2/r^2)) inside B(0, r), zero outside.
Field bump_field(int d, double radius);
//! exp(-|y - c|^2 / (2 w^2))
Field gaussian_field(Point center, double width);

}  // namespace liouville
