#include "liouville/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace liouville
{
//---------------------------------------------------------------------------//
std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::ExponentSignViolation: return "ExponentSignViolation";
        case ErrorCode::PotentialInvalid: return "PotentialInvalid";
        case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
        case ErrorCode::DiagonalEvaluation: return "DiagonalEvaluation";
        case ErrorCode::GeometryViolation: return "GeometryViolation";
        case ErrorCode::QuadratureNonConvergence:
            return "QuadratureNonConvergence";
        case ErrorCode::TailNotIntegrable: return "TailNotIntegrable";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::RuleNotApplicable: return "RuleNotApplicable";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
        case ErrorCode::UnknownExperiment: return "UnknownExperiment";
        case ErrorCode::ConfigParse: return "ConfigParse";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string const& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , code_(code)
{
}

//---------------------------------------------------------------------------//
// Potentials
//---------------------------------------------------------------------------//
namespace
{
struct Evaluator
{
    double r;

    double operator()(PowerLaw const& p) const
    {
        return p.c * std::pow(r, p.m);
    }

    double operator()(TabulatedRadial const& t) const
    {
        auto const& k = t.knots;
        if (r <= k.front().first)
            return k.front().second;
        if (r >= k.back().first)
            return k.back().second * std::pow(r / k.back().first, t.m_tail);
        auto hi = std::upper_bound(
            k.begin(), k.end(), r, [](double v, auto const& kn) {
                return v < kn.first;
            });
        auto lo = std::prev(hi);
        double s = std::log(r / lo->first) / std::log(hi->first / lo->first);
        return std::exp((1 - s) * std::log(lo->second)
                        + s * std::log(hi->second));
    }
};
}  // namespace

double evaluate(Potential const& pot, double r)
{
    return std::visit(Evaluator{r}, pot);
}

std::vector<double> breakpoints(Potential const& pot, double lo, double hi)
{
    std::vector<double> result;
    if (auto const* t = std::get_if<TabulatedRadial>(&pot))
    {
        for (auto const& [radius, value] : t->knots)
        {
            if (radius > lo && radius < hi)
                result.push_back(radius);
        }
    }
    return result;
}

std::optional<double> lower_bound_outside_unit_ball(Potential const& pot)
{
    if (auto const* p = std::get_if<PowerLaw>(&pot))
    {
        if (p->m >= 0)
            return p->c;
        return std::nullopt;
    }
    auto const& t = std::get<TabulatedRadial>(pot);
    if (t.m_tail < 0)
        return std::nullopt;
    double lowest = t.knots.back().second;
    for (auto const& [radius, value] : t.knots)
    {
        // Interpolation is monotone between knots, so knot values bound it.
        lowest = std::min(lowest, value);
    }
    return lowest;
}

//---------------------------------------------------------------------------//
// Families
//---------------------------------------------------------------------------//
std::string_view to_string(Family f)
{
    switch (f)
    {
        case Family::ExteriorPair: return "exterior-pair";
        case Family::WholeSpace: return "whole-space";
        case Family::ProductWholeSpace: return "product-whole-space";
        case Family::ProductExterior: return "product-exterior";
        case Family::ExteriorScalar: return "exterior-scalar";
    }
    return "unknown";
}

Family family_from_string(std::string_view s)
{
    for (auto f : {Family::ExteriorPair,
                   Family::WholeSpace,
                   Family::ProductWholeSpace,
                   Family::ProductExterior,
                   Family::ExteriorScalar})
    {
        if (to_string(f) == s)
            return f;
    }
    throw Error(ErrorCode::ConfigParse,
                "unknown family '" + std::string(s) + "'");
}

bool is_exterior(Family f)
{
    return f == Family::ExteriorPair || f == Family::ProductExterior
           || f == Family::ExteriorScalar;
}

//---------------------------------------------------------------------------//
// Validation
//---------------------------------------------------------------------------//
namespace
{
void check_index(char const* name, double value, int d, double margin)
{
    double upper = std::min(2.0, static_cast<double>(d));
    if (!(value >= margin && value <= upper - margin))
    {
        std::ostringstream os;
        os << name << " = " << value << " outside (0, " << upper
           << ") with margin " << margin;
        throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
}

void require_exponent(bool ok, std::string const& what)
{
    if (!ok)
        throw Error(ErrorCode::ExponentSignViolation, what);
}

void check_potential(Potential const& pot,
                     char const* name,
                     bool exterior,
                     double index)
{
    if (auto const* p = std::get_if<PowerLaw>(&pot))
    {
        if (!(p->c > 0) || !std::isfinite(p->c) || !std::isfinite(p->m))
        {
            throw Error(ErrorCode::PotentialInvalid,
                        std::string(name) + ": power-law coefficient must "
                                            "be positive and finite");
        }
        if (exterior && !(p->m > -index))
        {
            std::ostringstream os;
            os << name << ": power-law exponent " << p->m
               << " must exceed -" << index << " on an exterior domain";
            throw Error(ErrorCode::PotentialInvalid, os.str());
        }
        return;
    }
    auto const& t = std::get<TabulatedRadial>(pot);
    if (t.knots.empty())
        throw Error(ErrorCode::PotentialInvalid,
                    std::string(name) + ": no knots");
    for (std::size_t i = 0; i < t.knots.size(); ++i)
    {
        auto [radius, value] = t.knots[i];
        if (!(radius > 0) || !(value > 0) || !std::isfinite(radius)
            || !std::isfinite(value))
        {
            throw Error(ErrorCode::PotentialInvalid,
                        std::string(name)
                            + ": knots need positive radius and value");
        }
        if (i > 0 && !(radius > t.knots[i - 1].first))
        {
            throw Error(ErrorCode::PotentialInvalid,
                        std::string(name) + ": knot radii must increase");
        }
    }
    if (!std::isfinite(t.m_tail))
        throw Error(ErrorCode::PotentialInvalid,
                    std::string(name) + ": tail exponent must be finite");
    if (exterior && !(t.m_tail > -index))
    {
        throw Error(ErrorCode::PotentialInvalid,
                    std::string(name)
                        + ": tail exponent must exceed -index on an exterior "
                          "domain");
    }
}

void check_exponents(Family family, ExponentSet const& exps)
{
    auto finite = [](std::initializer_list<double> xs) {
        return std::all_of(
            xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
    };
    switch (family)
    {
        case Family::ExteriorScalar: {
            auto const* e = std::get_if<ScalarP>(&exps);
            require_exponent(e != nullptr,
                             "exterior-scalar needs a single exponent p");
            require_exponent(finite({e->p}) && e->p >= 1, "need p >= 1");
            return;
        }
        case Family::ExteriorPair: {
            auto const* e = std::get_if<PairPQ>(&exps);
            require_exponent(e != nullptr,
                             "exterior-pair needs exponents p, q");
            require_exponent(finite({e->p, e->q}) && e->p > 0 && e->q > 0,
                             "need p > 0 and q > 0");
            return;
        }
        default: break;
    }
    auto const* e = std::get_if<Quad>(&exps);
    require_exponent(e != nullptr,
                     std::string(to_string(family))
                         + " needs exponents p1, p2, q1, q2");
    require_exponent(finite({e->p1, e->p2, e->q1, e->q2}),
                     "exponents must be finite");
    switch (family)
    {
        case Family::WholeSpace:
            require_exponent(e->p2 >= 0 && e->q1 >= 0,
                             "need p2 >= 0 and q1 >= 0");
            require_exponent(e->p1 >= 1 && e->q2 >= 1,
                             "need p1 >= 1 and q2 >= 1");
            break;
        case Family::ProductWholeSpace:
            require_exponent(e->p1 > 0 && e->q2 > 0,
                             "need p1 > 0 and q2 > 0");
            require_exponent(e->p2 >= 0 && e->q1 >= 0,
                             "need p2 >= 0 and q1 >= 0");
            break;
        case Family::ProductExterior:
            require_exponent(e->p1 >= 0 && e->q2 >= 0,
                             "need p1 >= 0 and q2 >= 0");
            require_exponent(e->p2 > 0 && e->q1 > 0,
                             "need p2 > 0 and q1 > 0");
            break;
        default: break;
    }
}
}  // namespace

bool operator==(ProblemSpec const& a, ProblemSpec const& b)
{
    return a.family == b.family && a.indices.d == b.indices.d
           && a.indices.alpha == b.indices.alpha
           && a.indices.beta == b.indices.beta && a.exponents == b.exponents
           && a.U == b.U && a.V == b.V && a.index_margin == b.index_margin;
}

ProblemSpec validate_problem(ProblemSpec const& raw)
{
    auto const& idx = raw.indices;
    if (idx.d < 1)
        throw Error(ErrorCode::IndexOutOfRange, "dimension must be >= 1");
    if (!(raw.index_margin >= 1e-9))
        throw Error(ErrorCode::IndexOutOfRange, "index margin below 1e-9");
    check_index("alpha", idx.alpha, idx.d, raw.index_margin);
    bool const single = raw.family == Family::ExteriorScalar;
    if (!single)
        check_index("beta", idx.beta, idx.d, raw.index_margin);

    check_exponents(raw.family, raw.exponents);

    bool const exterior = is_exterior(raw.family);
    check_potential(raw.U, "U", exterior, idx.alpha);
    if (!single)
    {
        if (!raw.V)
            throw Error(ErrorCode::PotentialInvalid, "V is required");
        check_potential(*raw.V, "V", exterior, idx.beta);
    }
    return raw;
}

//---------------------------------------------------------------------------//
// Labels
//---------------------------------------------------------------------------//
std::string_view to_string(LimitTag t)
{
    switch (t)
    {
        case LimitTag::TendsToZero: return "TendsToZero";
        case LimitTag::DivergesToInfinity: return "DivergesToInfinity";
        case LimitTag::BoundedAway: return "BoundedAway";
        case LimitTag::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

std::string_view to_string(Criterion c)
{
    switch (c)
    {
        case Criterion::ExteriorPair: return "exterior-pair";
        case Criterion::WholeSpace: return "whole-space";
        case Criterion::ProductWholeSpaceI: return "product-whole-space(i)";
        case Criterion::ProductWholeSpaceII: return "product-whole-space(ii)";
        case Criterion::ProductWholeSpaceIII:
            return "product-whole-space(iii)";
        case Criterion::ProductWholeSpaceIV: return "product-whole-space(iv)";
        case Criterion::ProductExteriorI: return "product-exterior(i)";
        case Criterion::ProductExteriorII: return "product-exterior(ii)";
        case Criterion::ProductExteriorIII: return "product-exterior(iii)";
        case Criterion::ProductExteriorIV: return "product-exterior(iv)";
        case Criterion::ExteriorScalar: return "exterior-scalar";
        case Criterion::RuleConstantPotentials:
            return "closed-form:constant-potentials";
        case Criterion::RulePowerPotentials:
            return "closed-form:power-potentials";
        case Criterion::RuleHomogeneousWholeSpace:
            return "closed-form:homogeneous-whole-space";
        case Criterion::RuleIntegralPotentials:
            return "closed-form:integral-potentials";
        case Criterion::RuleHomogeneousExterior:
            return "closed-form:homogeneous-exterior";
    }
    return "unknown";
}

std::string_view to_string(Conclusion c)
{
    return c == Conclusion::LiouvilleHolds ? "LiouvilleHolds" : "Inconclusive";
}

std::string_view to_string(Requirement r)
{
    switch (r)
    {
        case Requirement::TendsToZero: return "tends-to-zero";
        case Requirement::Diverges: return "diverges";
        case Requirement::PositiveLiminf: return "positive-liminf";
    }
    return "unknown";
}

}  // namespace liouville
