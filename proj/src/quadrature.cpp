#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "liouville/error.hpp"

namespace liouville::quad
{
std::vector<double>
interior_breaks(double a, double b, std::span<double const> breaks)
{
    std::vector<double> pts;
    double const lo = std::min(a, b);
    double const hi = std::max(a, b);
    double const eps = 1e-14 * std::max(1.0, hi - lo);
    for (double x : breaks)
    {
        if (std::isfinite(x) && x > lo + eps && x < hi - eps)
            pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(),
                          pts.end(),
                          [eps](double u, double v) { return v - u < eps; }),
              pts.end());
    return pts;
}

namespace
{
template<class Segment>
Result split_and_sum(double a,
                     double b,
                     std::span<double const> breaks,
                     int panels,
                     Segment&& segment)
{
    Result total;
    if (a == b)
        return total;
    double const sign = b > a ? 1.0 : -1.0;
    double const lo = std::min(a, b);
    double const hi = std::max(a, b);

    std::vector<double> nodes{lo};
    for (double x : interior_breaks(lo, hi, breaks))
        nodes.push_back(x);
    nodes.push_back(hi);

    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    {
        int const n = std::max(panels, 1);
        double const width = (nodes[i + 1] - nodes[i]) / n;
        for (int k = 0; k < n; ++k)
        {
            double const x0 = nodes[i] + k * width;
            double const x1 = (k + 1 == n) ? nodes[i + 1] : x0 + width;
            Result piece = segment(x0, x1);
            total.value += piece.value;
            total.error += piece.error;
            total.l1 += piece.l1;
        }
    }
    total.value *= sign;
    return total;
}
}  // namespace

Result gauss_kronrod(Integrand const& f,
                     double a,
                     double b,
                     double rel_tol,
                     unsigned max_depth,
                     std::span<double const> breaks,
                     int panels)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    return split_and_sum(a, b, breaks, panels, [&](double x0, double x1) {
        // Mapped to [0, 1]: the rule's error estimate has an absolute floor
        // that would otherwise stall convergence on short panels.
        double const h = x1 - x0;
        auto g = [&](double u) { return f(x0 + h * u); };
        Result r;
        r.value = GK::integrate(g, 0.0, 1.0, max_depth, rel_tol, &r.error, &r.l1);
        r.value *= h;
        r.error *= h;
        r.l1 *= h;
        return r;
    });
}

Result tanh_sinh(Integrand const& f,
                 double a,
                 double b,
                 double rel_tol,
                 std::span<double const> breaks)
{
    // Abscissa tables are expensive to build; one integrator per thread.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    auto half = [&](auto&& g, double h) {
        Result r;
        try
        {
            r.value = integrator.integrate(g, 0.0, h, rel_tol, &r.error, &r.l1);
        }
        catch (std::domain_error const& e)
        {
            throw Error(ErrorCode::QuadratureNonConvergence, e.what());
        }
        catch (boost::math::evaluation_error const& e)
        {
            throw Error(ErrorCode::QuadratureNonConvergence, e.what());
        }
        return r;
    };
    return split_and_sum(a, b, breaks, 1, [&](double x0, double x1) {
        // Each half is integrated in the offset from its endpoint so nodes
        // crowd the endpoint at full precision. Offsets below one ulp of
        // the endpoint cannot be represented and are dropped.
        double const h = 0.5 * (x1 - x0);
        Result left = half(
            [&](double u) {
                double const x = x0 + u;
                return x == x0 ? 0.0 : f(x);
            },
            h);
        Result right = half(
            [&](double u) {
                double const x = x1 - u;
                return x == x1 ? 0.0 : f(x);
            },
            h);
        return Result{left.value + right.value,
                      left.error + right.error,
                      left.l1 + right.l1};
    });
}

double checked(Result const& r, double rel_tol, char const* what)
{
    double const scale = std::max(std::abs(r.value), r.l1);
    // Error estimates of both rules are pessimistic by about an order of
    // magnitude once converged.
    if (!std::isfinite(r.value) || r.error > 100 * rel_tol * scale + 1e-300)
    {
        throw Error(ErrorCode::QuadratureNonConvergence,
                    std::string(what) + ": estimated error "
                        + std::to_string(r.error) + " for value "
                        + std::to_string(r.value));
    }
    return r.value;
}

}  // namespace liouville::quad
