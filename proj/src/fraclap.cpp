#include "liouville/fraclap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/stable_sim.hpp"

namespace liouville
{
namespace
{
using std::numbers::pi;

// Below taylor_fraction * split the second difference is replaced by its
// quadratic term; the rounding noise of D(rho) / rho^2 grows like
// eps / rho^2, which sets near_noise_tol.
constexpr double taylor_fraction = 1e-2;
constexpr double near_noise_tol = 1e-9;

double dot(std::span<double const> a, std::span<double const> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

void check_inputs(Field const& f,
                  std::span<double const> x,
                  double alpha,
                  QuadConfig const& cfg)
{
    int const d = f.dim;
    if (d < 1 || static_cast<int>(x.size()) != d || !f.eval)
        throw Error(ErrorCode::InvalidArgument, "field/point dimension mismatch");
    if (!(alpha > 0) || !(alpha < std::min(2.0, double(d))))
        throw Error(ErrorCode::IndexOutOfRange, "alpha outside (0, min(2, d))");
    if (!(cfg.split_radius > 0) || !(cfg.rel_tol > 0))
        throw Error(ErrorCode::InvalidArgument,
                    "split_radius and rel_tol must be positive");
    if (cfg.near_order != 2)
        throw Error(ErrorCode::InvalidArgument, "near_order is fixed at 2");
    if (cfg.radial_nodes < 4 || cfg.angular_nodes < 4)
        throw Error(ErrorCode::InvalidArgument, "node counts must be >= 4");
    if (!f.support_radius && !(f.decay + alpha > 0))
        throw Error(ErrorCode::TailNotIntegrable,
                    "field must grow slower than |y|^alpha");
}

//! Integral of the second difference along +-theta against rho^{-1-a}.
class RayIntegrator
{
  public:
    RayIntegrator(Field const& f,
                  std::span<double const> x,
                  double alpha,
                  QuadConfig const& cfg)
        : f_(f), x_(x), alpha_(alpha), cfg_(cfg), fx_(f(x))
    {
        double extent = 1.0;
        for (auto const& k : f.kinks)
            extent = std::max(extent, norm(k.center) + k.radius);
        if (f.support_radius)
            far_ = *f.support_radius + norm(x);
        else
            far_ = 2 * (extent + norm(x));
        far_ = std::max(far_, 2 * cfg.split_radius);
    }

    double operator()(std::span<double const> theta) const
    {
        std::size_t const d = x_.size();
        std::vector<double> yp(d), ym(d);
        auto second_difference = [&](double rho) {
            for (std::size_t i = 0; i < d; ++i)
            {
                yp[i] = x_[i] + rho * theta[i];
                ym[i] = x_[i] - rho * theta[i];
            }
            return 2 * fx_ - f_(yp) - f_(ym);
        };
        auto const brk = crossings(theta);
        double const a = alpha_;
        double const split = cfg_.split_radius;
        double const inner_tol = 0.1 * cfg_.rel_tol;

        // Innermost piece: second difference ~ rho^2 times its value at rt.
        double const rt = taylor_fraction * split;
        double total = second_difference(rt) * std::pow(rt, -a) / (2 - a);
        double size = std::abs(total);

        // Near field in u = rho^{2-a}, where the integrand is D / rho^2.
        double const e = 2 - a;
        std::vector<double> near_brk;
        for (double b : brk)
        {
            if (b > rt && b < split)
                near_brk.push_back(std::pow(b, e));
        }
        auto const near = quad::gauss_kronrod(
            [&](double u) {
                double const rho = std::pow(u, 1 / e);
                return second_difference(rho) / (rho * rho) / e;
            },
            std::pow(rt, e),
            std::pow(split, e),
            std::max(inner_tol, near_noise_tol),
            8,
            near_brk,
            cfg_.radial_nodes);
        total += near.value;

        // Far field up to the support or past every kink.
        double const far = far_;
        auto const mid = quad::tanh_sinh(
            [&](double rho) {
                return second_difference(rho) * std::pow(rho, -1 - a);
            },
            split,
            far,
            inner_tol,
            brk);
        total += mid.value;

        // Tail: the 2 f(x) part in closed form, the rest through rho = far/t.
        double const constant_part = 2 * fx_ * std::pow(far, -a) / a;
        total += constant_part;
        size += near.l1 + mid.l1 + std::abs(constant_part);
        if (!f_.support_radius)
        {
            auto tail = quad::tanh_sinh(
                [&](double t) {
                    if (t <= 0)
                        return 0.0;
                    double const rho = far / t;
                    for (std::size_t i = 0; i < d; ++i)
                    {
                        yp[i] = x_[i] + rho * theta[i];
                        ym[i] = x_[i] - rho * theta[i];
                    }
                    double const v = (f_(yp) + f_(ym)) * std::pow(t, a - 1);
                    // A growing field overflows at radii where the
                    // integrable tail no longer contributes.
                    return std::isfinite(v) ? v : 0.0;
                },
                0.0,
                1.0,
                inner_tol);
            total -= std::pow(far, -a) * tail.value;
            size += std::pow(far, -a) * tail.l1;
        }
        magnitude_ = std::max(magnitude_, size);
        return total;
    }

    //! Largest sum of absolute radial contributions seen on any ray; the
    //! scale against which a cancelling angular integral is converged.
    double magnitude() const { return magnitude_; }

  private:
    //! Radii along +-theta where the ray meets a kink sphere or passes
    //! closest to a singular point.
    std::vector<double> crossings(std::span<double const> theta) const
    {
        std::vector<double> out;
        std::vector<double> v(x_.size());
        for (auto const& k : f_.kinks)
        {
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = x_[i] - k.center[i];
            double const vv = dot(v, v);
            for (double sign : {1.0, -1.0})
            {
                double const b = sign * dot(v, theta);
                if (k.radius == 0)
                {
                    if (-b > 0)
                        out.push_back(-b);
                    continue;
                }
                double const disc = b * b - (vv - k.radius * k.radius);
                if (disc < 0)
                    continue;
                double const sq = std::sqrt(disc);
                for (double root : {-b - sq, -b + sq})
                {
                    if (root > 0)
                        out.push_back(root);
                }
            }
        }
        return out;
    }

    Field const& f_;
    std::span<double const> x_;
    double alpha_;
    QuadConfig cfg_;
    double fx_;
    double far_ = 1;
    mutable double magnitude_ = 0;
};

double wrap_half_turn(double t)
{
    t = std::fmod(t, pi);
    return t < 0 ? t + pi : t;
}

FracLapResult planar(RayIntegrator const& ray,
                     Field const& f,
                     std::span<double const> x,
                     QuadConfig const& cfg)
{
    // Directions theta in [0, pi); breaks where the ray aims at a singular
    // point or grazes a kink sphere.
    std::vector<double> brk;
    for (auto const& k : f.kinks)
    {
        double const vx = k.center[0] - x[0];
        double const vy = k.center[1] - x[1];
        double const dist = std::hypot(vx, vy);
        if (dist == 0)
            continue;
        double const psi = std::atan2(vy, vx);
        if (k.radius == 0)
            brk.push_back(wrap_half_turn(psi));
        else if (k.radius < dist)
        {
            double const t = std::asin(k.radius / dist);
            brk.push_back(wrap_half_turn(psi + t));
            brk.push_back(wrap_half_turn(psi - t));
        }
    }
    FracLapResult out;
    double theta[2];
    // Aiming at a singular point makes the radial integral diverge
    // logarithmically, which the double-exponential rule absorbs at a break.
    for (int i = 1; i < cfg.angular_nodes; ++i)
        brk.push_back(pi * i / cfg.angular_nodes);
    auto r = quad::tanh_sinh(
        [&](double t) {
            ++out.directions;
            theta[0] = std::cos(t);
            theta[1] = std::sin(t);
            return ray(theta);
        },
        0.0,
        pi,
        cfg.rel_tol,
        brk);
    r.l1 = std::max(r.l1, pi * ray.magnitude());
    out.value = quad::checked(r, cfg.rel_tol, "frac_laplacian angular");
    out.error = r.error;
    return out;
}

FracLapResult spatial(RayIntegrator const& ray,
                      Field const& f,
                      std::span<double const> x,
                      QuadConfig const& cfg)
{
    // Polar axis toward the first kink center so that concentric kinks only
    // depend on the polar angle.
    double e3[3] = {0, 0, 1};
    for (auto const& k : f.kinks)
    {
        double v[3] = {k.center[0] - x[0], k.center[1] - x[1], k.center[2] - x[2]};
        double const n = std::sqrt(dot(v, v));
        if (n > 0)
        {
            for (int i = 0; i < 3; ++i)
                e3[i] = v[i] / n;
            break;
        }
    }
    double e1[3];
    {
        // Any vector not parallel to e3, orthogonalized.
        double t[3] = {1, 0, 0};
        if (std::abs(e3[0]) > 0.9)
            t[0] = 0, t[1] = 1;
        double const p = dot(t, e3);
        for (int i = 0; i < 3; ++i)
            e1[i] = t[i] - p * e3[i];
        double const n = std::sqrt(dot(e1, e1));
        for (double& c : e1)
            c /= n;
    }
    double const e2[3] = {e3[1] * e1[2] - e3[2] * e1[1],
                          e3[2] * e1[0] - e3[0] * e1[2],
                          e3[0] * e1[1] - e3[1] * e1[0]};

    std::vector<double> brk;
    for (auto const& k : f.kinks)
    {
        double v[3] = {k.center[0] - x[0], k.center[1] - x[1], k.center[2] - x[2]};
        double const dist = std::sqrt(dot(v, v));
        if (dist == 0 || k.radius == 0 || k.radius >= dist)
            continue;
        double const c = dot(v, e3) / dist;
        if (std::abs(std::abs(c) - 1) > 1e-12)
            continue;
        double const t = std::asin(k.radius / dist);
        brk.push_back(t);
        brk.push_back(pi - t);
    }

    FracLapResult out;
    double theta[3];
    auto polar = [&](double phi) {
        double const sp = std::sin(phi);
        double const cp = std::cos(phi);
        auto r = quad::gauss_kronrod(
            [&](double psi) {
                ++out.directions;
                double const c = std::cos(psi);
                double const s = std::sin(psi);
                for (int i = 0; i < 3; ++i)
                    theta[i] = sp * (c * e1[i] + s * e2[i]) + cp * e3[i];
                return ray(theta);
            },
            0.0,
            2 * pi,
            0.1 * cfg.rel_tol,
            15,
            {},
            cfg.angular_nodes);
        return sp * r.value;
    };
    auto r = quad::gauss_kronrod(
        polar, 0.0, pi, cfg.rel_tol, 15, brk, cfg.angular_nodes);
    r.l1 = std::max(r.l1, 4 * pi * ray.magnitude());
    // Full sphere, while the symmetrized difference counts each line twice.
    out.value = 0.5 * quad::checked(r, cfg.rel_tol, "frac_laplacian angular");
    out.error = 0.5 * r.error;
    return out;
}

FracLapResult randomized(RayIntegrator const& ray,
                         std::span<double const> x,
                         QuadConfig const& cfg)
{
    int const d = static_cast<int>(x.size());
    std::size_t const n
        = 16 * static_cast<std::size_t>(cfg.angular_nodes * cfg.angular_nodes);
    Rng rng(splitmix64(cfg.seed));
    std::normal_distribution<double> normal;
    std::vector<double> theta(static_cast<std::size_t>(d));
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double s = 0;
        do
        {
            s = 0;
            for (double& v : theta)
            {
                v = normal(rng);
                s += v * v;
            }
        } while (s == 0);
        s = 1 / std::sqrt(s);
        for (double& v : theta)
            v *= s;
        values[i] = ray(theta);
    }
    double const mean = pairwise_sum(values) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = (values[i] - mean) * (values[i] - mean);
    double const var = pairwise_sum(sq) / static_cast<double>(n - 1);

    double const half_area = 0.5 * sphere_area(d);
    FracLapResult out;
    out.value = half_area * mean;
    out.angular_variance = half_area * half_area * var / static_cast<double>(n);
    out.error = std::sqrt(out.angular_variance);
    out.directions = n;
    return out;
}
}  // namespace

//---------------------------------------------------------------------------//
FracLapResult frac_laplacian_detailed(Field const& f,
                                      std::span<double const> x,
                                      double alpha,
                                      QuadConfig const& cfg)
{
    check_inputs(f, x, alpha, cfg);
    int const d = f.dim;
    RayIntegrator const ray(f, x, alpha, cfg);

    FracLapResult out;
    if (d == 1)
    {
        double const theta[1] = {1.0};
        out.value = ray(theta);
        out.directions = 1;
    }
    else if (d == 2)
        out = planar(ray, f, x, cfg);
    else if (d == 3)
        out = spatial(ray, f, x, cfg);
    else
        out = randomized(ray, x, cfg);

    double const c = frac_laplacian_constant(d, alpha);
    out.value *= c;
    out.error *= c;
    out.angular_variance *= c * c;
    if (!std::isfinite(out.value))
        throw Error(ErrorCode::QuadratureNonConvergence,
                    "fractional Laplacian evaluated to a non-finite value");
    return out;
}

double frac_laplacian_eval(Field const& f,
                           std::span<double const> x,
                           double alpha,
                           QuadConfig const& cfg)
{
    return frac_laplacian_detailed(f, x, alpha, cfg).value;
}

DynkinTerms dynkin_terms(Field const& f,
                         std::span<double const> x,
                         Ball const& ball,
                         double alpha,
                         QuadConfig const& qcfg,
                         KernelConfig const& kcfg)
{
    if (f.dim != ball.dim() || static_cast<int>(x.size()) != ball.dim())
        throw Error(ErrorCode::InvalidArgument, "field/ball dimension mismatch");
    if (!(distance(x, ball.center) < ball.radius))
        throw Error(ErrorCode::GeometryViolation,
                    "Dynkin identity needs x strictly inside the ball");

    // The field is radial about the center, so it is sampled along e_1.
    auto along_axis = [&ball](double s) {
        Point y = ball.center;
        y[0] += s;
        return y;
    };
    std::vector<double> radii;
    for (auto const& k : f.kinks)
    {
        if (distance(k.center, ball.center) == 0)
            radii.push_back(k.radius);
    }
    if (f.support_radius && norm(ball.center) == 0)
        radii.push_back(*f.support_radius);

    RadialFunction profile{[&](double s) { return f(along_axis(s)); }, radii};
    RadialFunction operator_profile{
        [&](double s) {
            return frac_laplacian_eval(f, along_axis(s), alpha, qcfg);
        },
        radii};

    DynkinTerms t;
    t.value = f(x);
    t.exit = poisson_expectation(x, ball, alpha, profile, kcfg);
    t.occupation = green_quadrature(x, ball, alpha, operator_profile, kcfg);
    t.residual = std::abs(t.value - t.exit - t.occupation);
    return t;
}

double dynkin_residual(Field const& f,
                       std::span<double const> x,
                       Ball const& ball,
                       double alpha,
                       QuadConfig const& qcfg,
                       KernelConfig const& kcfg)
{
    return dynkin_terms(f, x, ball, alpha, qcfg, kcfg).residual;
}

//---------------------------------------------------------------------------//
double getoor_constant(int d, double alpha)
{
    return std::pow(2.0, alpha) * std::tgamma(1 + 0.5 * alpha)
           * std::tgamma(0.5 * (d + alpha)) / std::tgamma(0.5 * d);
}

Field constant_field(int d, double value)
{
    Field f;
    f.dim = d;
    f.eval = [value](std::span<double const>) { return value; };
    f.decay = 0;
    return f;
}

Field getoor_field(int d, double alpha, double radius)
{
    Field f;
    f.dim = d;
    f.eval = [alpha, radius](std::span<double const> y) {
        double const t = 1 - dot(y, y) / (radius * radius);
        return t > 0 ? std::pow(t, 0.5 * alpha) : 0.0;
    };
    f.decay = std::numeric_limits<double>::infinity();
    f.support_radius = radius;
    f.kinks.push_back({Point(static_cast<std::size_t>(d), 0.0), radius});
    return f;
}

Field riesz_field(int d, double alpha)
{
    Field f;
    f.dim = d;
    f.eval = [alpha, d](std::span<double const> y) {
        return std::pow(dot(y, y), 0.5 * (alpha - d));
    };
    f.decay = d - alpha;
    f.kinks.push_back({Point(static_cast<std::size_t>(d), 0.0), 0.0});
    return f;
}

Field bump_field(int d, double radius)
{
    Field f;
    f.dim = d;
    f.eval = [radius](std::span<double const> y) {
        double const t = dot(y, y) / (radius * radius);
        return t < 1 ? std::exp(1 - 1 / (1 - t)) : 0.0;
    };
    f.decay = std::numeric_limits<double>::infinity();
    f.support_radius = radius;
    return f;
}

Field gaussian_field(Point center, double width)
{
    Field f;
    f.dim = static_cast<int>(center.size());
    f.eval = [center, width](std::span<double const> y) {
        double s = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            s += (y[i] - center[i]) * (y[i] - center[i]);
        return std::exp(-0.5 * s / (width * width));
    };
    f.decay = std::numeric_limits<double>::infinity();
    return f;
}

}  // namespace liouville
