#include "liouville/stable_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include "liouville/error.hpp"

namespace liouville
{
namespace
{
constexpr double walk_fraction = 0.99;

void check_config(MCConfig const& cfg)
{
    if (cfg.n_paths < 1 || cfg.max_steps_per_path < 1 || cfg.workers < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "n_paths, max_steps_per_path and workers must be >= 1");
}

void check_geometry(std::span<double const> x, Ball const& ball, double alpha)
{
    int const d = ball.dim();
    if (static_cast<int>(x.size()) != d || d < 1 || !(ball.radius > 0))
        throw Error(ErrorCode::InvalidArgument, "point/ball mismatch");
    if (!(alpha > 0) || !(alpha < std::min(2.0, double(d))))
        throw Error(ErrorCode::IndexOutOfRange, "alpha outside (0, min(2, d))");
}

//! Per-path distributions; they carry state, so never share across paths.
class WalkSampler
{
  public:
    WalkSampler(double alpha, int d)
        : alpha_(alpha)
        , d_(d)
        , shape_a_(0.5 * alpha)
        , shape_b_(1 - 0.5 * alpha)
        , green_total_(std::tgamma(0.5 * alpha) * std::tgamma(0.5 * (d - alpha))
                       / std::tgamma(0.5 * d))
        , dir_(static_cast<std::size_t>(d))
    {
    }

    //! Unit vector, uniform on the sphere.
    std::span<double const> direction(Rng& rng)
    {
        double s = 0;
        do
        {
            s = 0;
            for (double& v : dir_)
            {
                v = normal_(rng);
                s += v * v;
            }
        } while (s == 0);
        s = 1 / std::sqrt(s);
        for (double& v : dir_)
            v *= s;
        return dir_;
    }

    //! |X_tau| / r for the ball of radius r entered at its center; > 1.
    double exit_radius_factor(Rng& rng)
    {
        for (;;)
        {
            double const g1 = shape_a_(rng);
            double const g2 = shape_b_(rng);
            double const v = g1 / (g1 + g2);
            if (v > 0 && v < 1)
            {
                double const f = 1 / std::sqrt(v);
                if (f > 1 && std::isfinite(f))
                    return f;
            }
        }
    }

    /*!
     * |Y| / r for Y drawn from the normalized Green density of B(0, r) at 0.
     *
     * The radial density is proportional to s^{a-1} I((1-s^2)/s^2) with I
     * increasing to its limit green_total_, so s = U^{1/a} is accepted with
     * probability I / green_total_.
     */
    double green_radius_fraction(Rng& rng)
    {
        for (;;)
        {
            double const s = std::pow(uniform_(rng), 1 / alpha_);
            if (!(s < 1))
                continue;
            double const w = s > 0 ? (1 - s) * (1 + s) / (s * s) : HUGE_VAL;
            if (uniform_(rng) * green_total_ <= green_profile(w, alpha_, d_))
                return s;
        }
    }

  private:
    double alpha_;
    int d_;
    std::gamma_distribution<double> shape_a_;
    std::gamma_distribution<double> shape_b_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
    double green_total_;
    std::vector<double> dir_;
};

//! y = z + scale * direction
void step_to(std::span<double const> z,
             double scale,
             std::span<double const> dir,
             std::span<double> y)
{
    for (std::size_t i = 0; i < z.size(); ++i)
        y[i] = z[i] + scale * dir[i];
}

struct PathResult
{
    std::vector<double> values;
    std::vector<unsigned char> truncated;
};

/*!
 * Run `path(rng, truncated&) -> double` for every path.
 *
 * Each path owns its generator and its output slot, so the results do not
 * depend on how paths are spread over workers.
 */
template<class Path>
PathResult run_paths(MCConfig const& cfg, Path&& path)
{
    auto const n = static_cast<long long>(cfg.n_paths);
    PathResult out{std::vector<double>(cfg.n_paths, 0.0),
                   std::vector<unsigned char>(cfg.n_paths, 0)};
    std::vector<std::exception_ptr> errors(cfg.n_paths);

#pragma omp parallel for num_threads(cfg.workers) schedule(static)
    for (long long i = 0; i < n; ++i)
    {
        try
        {
            Rng rng = path_rng(cfg.seed, static_cast<std::uint64_t>(i));
            bool truncated = false;
            out.values[i] = path(rng, truncated);
            out.truncated[i] = truncated;
        }
        catch (...)
        {
            errors[i] = std::current_exception();
        }
    }
    for (auto const& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
    return out;
}

MCEstimate summarize(PathResult const& r)
{
    MCEstimate est;
    est.n = r.values.size();
    est.mean = pairwise_sum(r.values) / static_cast<double>(est.n);
    if (est.n > 1)
    {
        std::vector<double> sq(est.n);
        for (std::size_t i = 0; i < est.n; ++i)
        {
            double const dv = r.values[i] - est.mean;
            sq[i] = dv * dv;
        }
        double const var = pairwise_sum(sq) / static_cast<double>(est.n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(est.n));
    }
    for (unsigned char t : r.truncated)
        est.truncated_paths += t;
    return est;
}
}  // namespace

//---------------------------------------------------------------------------//
std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng path_rng(std::uint64_t seed, std::uint64_t path)
{
    return Rng(splitmix64(splitmix64(seed) ^ path));
}

double pairwise_sum(std::span<double const> values)
{
    if (values.size() <= 8)
    {
        double s = 0;
        for (double v : values)
            s += v;
        return s;
    }
    auto const half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

//---------------------------------------------------------------------------//
Point sample_ball_exit(std::span<double const> x,
                       Ball const& ball,
                       double alpha,
                       Rng& rng)
{
    check_geometry(x, ball, alpha);
    double const R = ball.radius;
    if (!(distance(x, ball.center) < R))
        throw Error(ErrorCode::GeometryViolation,
                    "exit sampling needs x strictly inside the ball");

    WalkSampler sampler(alpha, ball.dim());
    Point z(x.begin(), x.end());
    Point y(z.size());
    // Bounded only as a guard; the walk needs a handful of steps on average.
    for (int step = 0; step < 100000000; ++step)
    {
        double const dz = distance(z, ball.center);
        // From the exact center the ball itself is the walk ball.
        double const r = dz == 0 ? R : walk_fraction * (R - dz);
        double const f = sampler.exit_radius_factor(rng);
        step_to(z, r * f, sampler.direction(rng), y);
        double const dy = distance(y, ball.center);
        if (dy > R)
            return y;
        if (dy < R)
            z.swap(y);
        // dy == R has probability zero; redraw the step.
    }
    throw Error(ErrorCode::InternalInconsistency, "exit walk did not terminate");
}

MCEstimate estimate_hitting_probability(std::span<double const> x,
                                        Ball const& target,
                                        Ball const& enclosure,
                                        double alpha,
                                        MCConfig const& cfg)
{
    check_config(cfg);
    check_geometry(x, enclosure, alpha);
    check_geometry(x, target, alpha);
    if (!(distance(x, enclosure.center) < enclosure.radius))
        throw Error(ErrorCode::GeometryViolation,
                    "start point must lie inside the enclosure");
    if (!(distance(target.center, enclosure.center)
          < enclosure.radius + target.radius))
        throw Error(ErrorCode::GeometryViolation,
                    "target does not meet the enclosure");

    if (distance(x, target.center) <= target.radius)
    {
        MCEstimate est;
        est.mean = 1.0;
        est.n = cfg.n_paths;
        return est;
    }

    int const d = enclosure.dim();
    auto path = [&](Rng& rng, bool& truncated) -> double {
        WalkSampler sampler(alpha, d);
        Point z(x.begin(), x.end());
        Point y(z.size());
        for (std::size_t step = 0; step < cfg.max_steps_per_path; ++step)
        {
            double const room
                = std::min(enclosure.radius - distance(z, enclosure.center),
                           distance(z, target.center) - target.radius);
            double const r = walk_fraction * room;
            step_to(z, r * sampler.exit_radius_factor(rng),
                    sampler.direction(rng), y);
            if (distance(y, enclosure.center) >= enclosure.radius)
                return 0.0;
            if (distance(y, target.center) <= target.radius)
                return 1.0;
            z.swap(y);
        }
        truncated = true;
        return 0.0;
    };
    return summarize(run_paths(cfg, path));
}

MCEstimate estimate_exit_functional(std::span<double const> x,
                                    Ball const& ball,
                                    double alpha,
                                    RadialFunction const& f,
                                    MCConfig const& cfg)
{
    check_config(cfg);
    check_geometry(x, ball, alpha);
    double const R = ball.radius;
    if (!(distance(x, ball.center) < R))
        throw Error(ErrorCode::GeometryViolation,
                    "exit functional needs x strictly inside the ball");

    int const d = ball.dim();
    double const tau_unit = exit_time_constant(d, alpha);
    auto path = [&](Rng& rng, bool& truncated) -> double {
        WalkSampler sampler(alpha, d);
        Point z(x.begin(), x.end());
        Point y(z.size());
        double total = 0;
        for (std::size_t step = 0; step < cfg.max_steps_per_path; ++step)
        {
            double const r = walk_fraction * (R - distance(z, ball.center));
            double const s = sampler.green_radius_fraction(rng);
            step_to(z, r * s, sampler.direction(rng), y);
            total += tau_unit * std::pow(r, alpha) * f(distance(y, ball.center));

            step_to(z, r * sampler.exit_radius_factor(rng),
                    sampler.direction(rng), y);
            if (distance(y, ball.center) >= R)
                return total;
            z.swap(y);
        }
        truncated = true;
        return total;
    };
    return summarize(run_paths(cfg, path));
}

}  // namespace liouville
