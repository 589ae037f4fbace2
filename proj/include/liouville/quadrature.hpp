#pragma once

#include <functional>
#include <span>
#include <vector>

namespace liouville::quad
{
using Integrand = std::function<double(double)>;

struct Result
{
    double value = 0;
    double error = 0;  //!< estimated absolute error
    double l1 = 0;     //!< estimated integral of |f|
};

/*!
 * Adaptive 31-point Gauss-Kronrod on [a, b].
 *
 * The interval is cut at every breakpoint strictly inside it and into
 * `panels` equal pieces before adaptive bisection starts.
 */
Result gauss_kronrod(Integrand const& f,
                     double a,
                     double b,
                     double rel_tol,
                     unsigned max_depth = 15,
                     std::span<double const> breaks = {},
                     int panels = 1);

/*!
 * Double-exponential rule on [a, b], for integrands with algebraic or
 * logarithmic endpoint singularities. Breakpoints are handled as above.
 */
Result tanh_sinh(Integrand const& f,
                 double a,
                 double b,
                 double rel_tol,
                 std::span<double const> breaks = {});

//! Throw QuadratureNonConvergence when the error estimate misses rel_tol.
double checked(Result const& r, double rel_tol, char const* what);

//! Sorted, de-duplicated breakpoints strictly inside (a, b).
std::vector<double> interior_breaks(double a, double b,
                                    std::span<double const> breaks);

}  // namespace liouville::quad
