#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "kernels.hpp"

namespace liouville
{
//! Geometric radius grid r_k = r0 * ratio^k, k < count.
struct RGrid
{
    double r0 = 4;
    double ratio = 2;
    int count = 8;

    std::vector<double> values() const;
};

/*!
 * inf over r/2 <= |x| <= 3r/2 of the integral of U over B(x, r/4).
 *
 * For a power law the infimum sits at |x| = r/2 (m >= 0) or 3r/2 (m < 0)
 * and the value is c r^{d+m} times the unit-scale integral. Tabulated
 * potentials are scanned in |x| and refined with Brent's method.
 */
double phi(Potential const& pot, double r, int d, KernelConfig const& cfg = {});

//! Integral of U over B(x, r/4) for |x| = s, by radial shells.
double ball_integral(Potential const& pot, double s, double r, int d,
                     KernelConfig const& cfg = {});

/*!
 * r^{-rate} * integral over r/2 < |y| < 3r/2 of U^{-1/(inner - 1)}.
 *
 * Throws ExponentOutOfRange unless inner > 1.
 */
double ell(Potential const& pot,
           double r,
           int d,
           double inner_exponent,
           double rate_exponent,
           KernelConfig const& cfg = {});

//---------------------------------------------------------------------------//
// Limit classification
//---------------------------------------------------------------------------//

inline constexpr double slope_deadband = 0.05;
inline constexpr double min_r_squared = 0.9;

/*!
 * Classify r -> infinity from positive samples (r, value).
 *
 * Fits log value against log r over the trailing half of the samples.
 * Throws InsufficientSamples for fewer than 4 samples or non-increasing r.
 */
LimitClass classify_limit(std::vector<std::pair<double, double>> const& samples);

//! Same on (r, log value) samples.
LimitClass classify_log_limit(std::vector<std::pair<double, double>> const& log_samples);

//! Replace each value by the inf (Liminf) or sup (Limsup) of the trace up to it.
std::vector<std::pair<double, double>> tail_envelope(
    std::vector<std::pair<double, double>> samples, LimitKind kind);

bool requirement_met(Requirement req, LimitTag tag);

//---------------------------------------------------------------------------//
// Closed-form dimension thresholds
//---------------------------------------------------------------------------//

struct ThresholdRecord
{
    Criterion rule = Criterion::RuleConstantPotentials;
    std::vector<double> thresholds;
    double threshold = 0;  //!< the one that decides: max of thresholds
    bool satisfied = false;  //!< d strictly below threshold
    bool boundary = false;   //!< d within 1e-9 of threshold
};

/*!
 * Exact exponent arithmetic for power-law potentials.
 *
 * exterior-pair: constant potentials (m = n = 0) or power laws, pq > 1.
 * product-whole-space and product-exterior with alpha = beta, constant
 * potentials and p1 + p2 = q1 + q2 = eta > 1. Anything else throws
 * RuleNotApplicable.
 */
ThresholdRecord closed_form_threshold(ProblemSpec const& spec);

//---------------------------------------------------------------------------//
// Decision engine
//---------------------------------------------------------------------------//

//! log Phi_U, log Phi_V on a grid.
struct PhiTrace
{
    std::vector<double> r;
    std::vector<double> log_phi_u;
    std::vector<double> log_phi_v;  //!< empty for a single equation
};

PhiTrace phi_trace(ProblemSpec const& spec, RGrid const& grid,
                   KernelConfig const& cfg = {});

/*!
 * Evaluate every sufficient condition for spec.family on the grid.
 *
 * If a closed-form rule applies it is appended as a case; when d is
 * strictly off its threshold the numeric conclusion must agree
 * (InternalInconsistency otherwise), and on the threshold the conclusion
 * is Inconclusive. Throws GridTooCoarse when nothing is satisfied and some
 * relevant condition is Indeterminate.
 */
Verdict decide_liouville(ProblemSpec const& spec,
                         RGrid const& grid = {},
                         KernelConfig const& cfg = {});

/*!
 * Integral conditions on r^{-rate} int U^{-1/(p-1)} for exterior-pair
 * specs with p, q > 1: [ell_U^{(p-1)/p} ell_V^{q-1} -> 0,
 * ell_U^{p-1} ell_V^{(q-1)/q} -> 0].
 */
CaseResult integral_conditions(ProblemSpec const& spec,
                               RGrid const& grid = {},
                               KernelConfig const& cfg = {});

nlohmann::json to_json(LimitClass const& c);
nlohmann::json to_json(Verdict const& v);
nlohmann::json to_json(ThresholdRecord const& t);

}  // namespace liouville
