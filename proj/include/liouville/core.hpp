#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"

namespace liouville
{
//---------------------------------------------------------------------------//
// Stability indices
//---------------------------------------------------------------------------//

//! Dimension plus the stability indices of the u- and v-equations.
struct StableIndexPair
{
    int d = 2;
    double alpha = 1.0;
    double beta = 1.0;
};

//! Distance kept from the open-interval endpoints of (0, min(2, d)).
inline constexpr double default_index_margin = 1e-9;

//---------------------------------------------------------------------------//
// Exponents
//---------------------------------------------------------------------------//

struct ScalarP
{
    double p = 1.0;

    bool operator==(ScalarP const&) const = default;
};

struct PairPQ
{
    double p = 1.0;
    double q = 1.0;

    bool operator==(PairPQ const&) const = default;
};

/*!
 * Four-exponent nonlinearity.
 *
 * p1, p2 are the powers of u and v in the u-equation; q1, q2 the powers of
 * u and v in the v-equation. The same labeling is used by every family.
 */
struct Quad
{
    double p1 = 1.0;
    double p2 = 0.0;
    double q1 = 0.0;
    double q2 = 1.0;

    bool operator==(Quad const&) const = default;
};

using ExponentSet = std::variant<ScalarP, PairPQ, Quad>;

//---------------------------------------------------------------------------//
// Potentials
//---------------------------------------------------------------------------//

//! c * |x|^m
struct PowerLaw
{
    double c = 1.0;
    double m = 0.0;

    bool operator==(PowerLaw const&) const = default;
};

/*!
 * Radial profile given at knots.
 *
 * Between knots the profile is interpolated linearly in (log r, log value).
 * Below the first knot it is constant; past the last knot it continues as
 * value(last) * (r / r_last)^m_tail.
 */
struct TabulatedRadial
{
    std::vector<std::pair<double, double>> knots;
    double m_tail = 0.0;

    bool operator==(TabulatedRadial const&) const = default;
};

using Potential = std::variant<PowerLaw, TabulatedRadial>;

//! Evaluate a potential at radius r = |x|.
double evaluate(Potential const& pot, double r);

//! Knot radii in (lo, hi), useful as quadrature breakpoints.
std::vector<double> breakpoints(Potential const& pot, double lo, double hi);

//! Positive lower bound of the potential on |x| >= 1, if one exists.
std::optional<double> lower_bound_outside_unit_ball(Potential const& pot);

//---------------------------------------------------------------------------//
// Problem specification
//---------------------------------------------------------------------------//

enum class Family
{
    ExteriorPair,       //!< (-D)^a u >= f(x,v), (-D)^b v >= g(x,u) outside B
    WholeSpace,         //!< general f(x,u,v), g(x,u,v) on all of R^d
    ProductWholeSpace,  //!< U u^p1 v^p2, V u^q1 v^q2 on all of R^d
    ProductExterior,    //!< U u^p1 v^p2, V u^q1 v^q2 outside B
    ExteriorScalar,     //!< single equation (-D)^a u >= f(x,u) outside B
};

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

//! True for the families posed on the complement of the closed unit ball.
bool is_exterior(Family f);

struct ProblemSpec
{
    Family family = Family::ExteriorPair;
    StableIndexPair indices;
    ExponentSet exponents = PairPQ{};
    Potential U = PowerLaw{};
    std::optional<Potential> V = PowerLaw{};
    double index_margin = default_index_margin;
};

bool operator==(ProblemSpec const& a, ProblemSpec const& b);

/*!
 * Check every invariant of a candidate spec and return it unchanged.
 *
 * Throws Error with IndexOutOfRange, ExponentSignViolation or
 * PotentialInvalid.
 */
ProblemSpec validate_problem(ProblemSpec const& raw);

//---------------------------------------------------------------------------//
// Limit classification and verdicts
//---------------------------------------------------------------------------//

enum class LimitTag
{
    TendsToZero,
    DivergesToInfinity,
    BoundedAway,
    Indeterminate,
};

std::string_view to_string(LimitTag t);

struct LimitClass
{
    LimitTag tag = LimitTag::Indeterminate;
    double fitted_exponent = 0.0;  //!< trailing log-log slope
    double confidence = 0.0;       //!< in [0, 1]
};

//! Sufficient criteria the decision engine can apply.
enum class Criterion
{
    ExteriorPair,
    WholeSpace,
    ProductWholeSpaceI,
    ProductWholeSpaceII,
    ProductWholeSpaceIII,
    ProductWholeSpaceIV,
    ProductExteriorI,
    ProductExteriorII,
    ProductExteriorIII,
    ProductExteriorIV,
    ExteriorScalar,
    RuleConstantPotentials,
    RulePowerPotentials,
    RuleHomogeneousWholeSpace,
    RuleIntegralPotentials,
    RuleHomogeneousExterior,
};

std::string_view to_string(Criterion c);

enum class Conclusion
{
    LiouvilleHolds,
    Inconclusive,
};

std::string_view to_string(Conclusion c);

//! What a condition needs from its limit class to count as satisfied.
enum class Requirement
{
    TendsToZero,     //!< lim (or liminf) = 0
    Diverges,        //!< lim (or limsup) = infinity
    PositiveLiminf,  //!< liminf > 0
};

std::string_view to_string(Requirement r);

//! How the grid trace is reduced before regression.
enum class LimitKind
{
    Lim,
    Liminf,
    Limsup,
};

struct ConditionTrace
{
    std::string label;
    Requirement requirement = Requirement::TendsToZero;
    LimitKind kind = LimitKind::Lim;
    LimitClass limit;
    bool satisfied = false;
    bool non_monotone = false;
    std::vector<std::pair<double, double>> samples;  //!< (r, log value)
};

struct CaseResult
{
    Criterion criterion = Criterion::ExteriorPair;
    std::string label;
    bool hypotheses_hold = false;
    bool satisfied = false;
    std::vector<ConditionTrace> conditions;
};

struct Verdict
{
    Criterion theorem_applied = Criterion::ExteriorPair;
    Conclusion conclusion = Conclusion::Inconclusive;
    std::vector<CaseResult> cases;
};

}  // namespace liouville
