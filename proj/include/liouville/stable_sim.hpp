#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "kernels.hpp"

namespace liouville
{
struct MCConfig
{
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    std::size_t max_steps_per_path = 10000;
    int workers = 1;
};

struct MCEstimate
{
    double mean = 0;
    double std_error = 0;
    std::size_t n = 0;
    std::size_t truncated_paths = 0;
};

using Rng = std::mt19937_64;

//! Generator identity recorded in reports.
inline constexpr std::string_view rng_description
    = "mt19937_64 per path, seeded by splitmix64(seed, path index)";

std::uint64_t splitmix64(std::uint64_t x);

//! Independent stream for one path; a function of (seed, path) only.
Rng path_rng(std::uint64_t seed, std::uint64_t path);

//! Sum with O(log n) error growth; also fixes the reduction order.
double pairwise_sum(std::span<double const> values);

/*!
 * Draw X at the first exit from the open ball, started at interior x.
 *
 * From the center this is a single exact draw: |X - c|^{-2} r^2 is
 * Beta(a/2, 1 - a/2) with a uniform direction. From other points the
 * process is walked through balls centered on the current position.
 */
Point sample_ball_exit(std::span<double const> x,
                       Ball const& ball,
                       double alpha,
                       Rng& rng);

/*!
 * Estimate P_x(hit the closed target before leaving the open enclosure).
 *
 * Each step exits the ball of radius 0.99 * dist(z, boundary of
 * enclosure minus target) about the current point z. Landing outside the
 * enclosure is a miss, landing in the target a hit. Paths still running
 * after max_steps_per_path are scored as misses and counted.
 */
MCEstimate estimate_hitting_probability(std::span<double const> x,
                                        Ball const& target,
                                        Ball const& enclosure,
                                        double alpha,
                                        MCConfig const& cfg);

/*!
 * Estimate E_x[int_0^tau f(|X_s - center|) ds] for the exit time tau of
 * the ball.
 *
 * The walk is the one of sample_ball_exit; every sub-ball contributes its
 * expected exit time times f at a point drawn from its normalized Green
 * density, which is unbiased by the strong Markov property.
 */
MCEstimate estimate_exit_functional(std::span<double const> x,
                                    Ball const& ball,
                                    double alpha,
                                    RadialFunction const& f,
                                    MCConfig const& cfg);

}  // namespace liouville
