#include "liouville/phi_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/minima.hpp>

#include "liouville/error.hpp"
#include "liouville/quadrature.hpp"

namespace liouville
{
std::vector<double> RGrid::values() const
{
    if (!(r0 >= 4) || !(ratio > 1) || count < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "grid needs r0 >= 4, ratio > 1 and count >= 1");
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        r[k] = r0 * std::pow(ratio, k);
    return r;
}

//---------------------------------------------------------------------------//
// Phi
//---------------------------------------------------------------------------//
namespace
{
constexpr double pi = std::numbers::pi;
constexpr int scan_points = 41;

/*!
 * Area of the part of the sphere |y| = s + delta inside B(x, rho), |x| = s.
 *
 * 1 - cos(phi_max) is written as (rho - delta)(rho + delta) / (2 t s) so it
 * stays accurate where the sphere barely touches the ball.
 */
double cap_area(int d, double s, double delta, double rho)
{
    double const t = s + delta;
    if (d == 1)
        return 1.0;
    double const one_minus_c
        = std::clamp((rho - delta) * (rho + delta) / (2 * t * s), 0.0, 2.0);
    if (d == 2)
        return 2 * t * 2 * std::asin(std::min(1.0, std::sqrt(0.5 * one_minus_c)));
    if (d == 3)
        return 2 * pi * t * t * one_minus_c;
    // phi_max < pi/2 here because s > rho.
    double const sin2 = one_minus_c * (2 - one_minus_c);
    double const a = 0.5 * (d - 1);
    return sphere_area(d - 1) * std::pow(t, d - 1) * 0.5
           * boost::math::beta(a, 0.5, std::min(1.0, sin2));
}
}  // namespace

double ball_integral(Potential const& pot, double s, double r, int d,
                     KernelConfig const& cfg)
{
    double const rho = 0.25 * r;
    if (d < 1 || !(s > rho))
        throw Error(ErrorCode::InvalidArgument,
                    "ball integral needs d >= 1 and |x| > r/4");
    std::vector<double> brk;
    for (double k : breakpoints(pot, s - rho, s + rho))
        brk.push_back(k - s);
    auto res = quad::tanh_sinh(
        [&](double delta) {
            return evaluate(pot, s + delta) * cap_area(d, s, delta, rho);
        },
        -rho, rho, cfg.quad_rel_tol, brk);
    return quad::checked(res, cfg.quad_rel_tol, "ball integral");
}

double phi(Potential const& pot, double r, int d, KernelConfig const& cfg)
{
    if (!(r >= 4))
        throw Error(ErrorCode::InvalidArgument, "phi needs r >= 4");
    if (auto const* p = std::get_if<PowerLaw>(&pot))
    {
        double const s = p->m >= 0 ? 0.5 : 1.5;
        double const unit = ball_integral(PowerLaw{1.0, p->m}, s, 1.0, d, cfg);
        return p->c * std::pow(r, d + p->m) * unit;
    }

    double const lo = 0.5 * r;
    double const hi = 1.5 * r;
    auto J = [&](double s) { return ball_integral(pot, s, r, d, cfg); };
    std::vector<double> values(scan_points);
    double const h = (hi - lo) / (scan_points - 1);
    for (int i = 0; i < scan_points; ++i)
        values[i] = J(lo + h * i);
    auto const best = static_cast<int>(
        std::min_element(values.begin(), values.end()) - values.begin());
    double a = lo + h * std::max(0, best - 1);
    double b = lo + h * std::min(scan_points - 1, best + 1);
    std::uintmax_t max_iter = 100;
    auto const refined = boost::math::tools::brent_find_minima(J, a, b, 40, max_iter);
    return std::min(values[best], refined.second);
}

double ell(Potential const& pot,
           double r,
           int d,
           double inner_exponent,
           double rate_exponent,
           KernelConfig const& cfg)
{
    if (!(inner_exponent > 1))
        throw Error(ErrorCode::ExponentOutOfRange,
                    "integral condition needs an exponent > 1");
    if (!(r > 0))
        throw Error(ErrorCode::InvalidArgument, "ell needs r > 0");
    double const power = -1 / (inner_exponent - 1);
    double const lo = 0.5 * r;
    double const hi = 1.5 * r;
    auto const brk = breakpoints(pot, lo, hi);
    auto res = quad::gauss_kronrod(
        [&](double t) {
            return std::pow(t, d - 1) * std::pow(evaluate(pot, t), power);
        },
        lo, hi, cfg.quad_rel_tol, cfg.max_quad_subdivisions, brk);
    double const integral = quad::checked(res, cfg.quad_rel_tol, "ell");
    return std::pow(r, -rate_exponent) * sphere_area(d) * integral;
}

//---------------------------------------------------------------------------//
// Classification
//---------------------------------------------------------------------------//
LimitClass classify_log_limit(std::vector<std::pair<double, double>> const& log_samples)
{
    auto const n = log_samples.size();
    if (n < 4)
        throw Error(ErrorCode::InsufficientSamples,
                    "limit classification needs at least 4 samples");
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!(log_samples[i].first > 0)
            || (i > 0 && !(log_samples[i].first > log_samples[i - 1].first)))
            throw Error(ErrorCode::InsufficientSamples,
                        "sample radii must be positive and increasing");
    }

    LimitClass out;
    std::size_t const first = n - (n + 1) / 2;
    std::size_t const m = n - first;
    double mx = 0, my = 0;
    for (std::size_t i = first; i < n; ++i)
    {
        double const y = log_samples[i].second;
        if (!std::isfinite(y))
            return out;
        mx += std::log(log_samples[i].first);
        my += y;
    }
    mx /= double(m);
    my /= double(m);

    double sxx = 0, sxy = 0, syy = 0;
    double ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (std::size_t i = first; i < n; ++i)
    {
        double const dx = std::log(log_samples[i].first) - mx;
        double const dy = log_samples[i].second - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        ymin = std::min(ymin, log_samples[i].second);
        ymax = std::max(ymax, log_samples[i].second);
    }
    double const slope = sxy / sxx;
    double r2 = 1.0;
    // A trace that is constant up to quadrature noise is a perfect fit.
    if (ymax - ymin > 1e-9 * std::max(1.0, std::abs(my)))
        r2 = std::clamp(1 - (syy - slope * sxy) / syy, 0.0, 1.0);

    out.fitted_exponent = slope;
    out.confidence = r2;
    if (r2 < min_r_squared)
        out.tag = LimitTag::Indeterminate;
    else if (slope > slope_deadband)
        out.tag = LimitTag::DivergesToInfinity;
    else if (slope < -slope_deadband)
        out.tag = LimitTag::TendsToZero;
    else
        out.tag = LimitTag::BoundedAway;
    return out;
}

LimitClass classify_limit(std::vector<std::pair<double, double>> const& samples)
{
    std::vector<std::pair<double, double>> logs;
    logs.reserve(samples.size());
    for (auto const& [r, v] : samples)
    {
        if (v < 0 || std::isnan(v))
            throw Error(ErrorCode::InvalidArgument,
                        "limit classification needs nonnegative values");
        logs.emplace_back(r, std::log(v));
    }
    return classify_log_limit(logs);
}

std::vector<std::pair<double, double>> tail_envelope(
    std::vector<std::pair<double, double>> samples, LimitKind kind)
{
    if (kind == LimitKind::Lim || samples.size() < 2)
        return samples;
    for (std::size_t i = 1; i < samples.size(); ++i)
    {
        double const prev = samples[i - 1].second;
        double& v = samples[i].second;
        v = kind == LimitKind::Liminf ? std::min(v, prev) : std::max(v, prev);
    }
    return samples;
}

bool requirement_met(Requirement req, LimitTag tag)
{
    switch (req)
    {
        case Requirement::TendsToZero: return tag == LimitTag::TendsToZero;
        case Requirement::Diverges: return tag == LimitTag::DivergesToInfinity;
        case Requirement::PositiveLiminf:
            return tag == LimitTag::BoundedAway
                   || tag == LimitTag::DivergesToInfinity;
    }
    return false;
}

//---------------------------------------------------------------------------//
// Closed-form thresholds
//---------------------------------------------------------------------------//
namespace
{
constexpr double exact_tol = 1e-12;

[[noreturn]] void not_applicable(std::string const& why)
{
    throw Error(ErrorCode::RuleNotApplicable, why);
}

PowerLaw const& power_law(std::optional<Potential> const& pot, char const* name)
{
    if (!pot || !std::holds_alternative<PowerLaw>(*pot))
        not_applicable(std::string(name) + " is not a power law");
    return std::get<PowerLaw>(*pot);
}

double homogeneous_eta(ProblemSpec const& spec, Quad const& e)
{
    auto const& idx = spec.indices;
    if (std::abs(idx.alpha - idx.beta) > exact_tol)
        not_applicable("needs alpha = beta");
    if (power_law(spec.U, "U").m != 0 || power_law(spec.V, "V").m != 0)
        not_applicable("needs constant potentials");
    double const eta = e.p1 + e.p2;
    if (std::abs(eta - (e.q1 + e.q2)) > exact_tol)
        not_applicable("needs p1 + p2 = q1 + q2");
    if (!(eta > 1))
        not_applicable("needs p1 + p2 > 1");
    return eta;
}
}  // namespace

ThresholdRecord closed_form_threshold(ProblemSpec const& spec)
{
    ThresholdRecord rec;
    auto const& idx = spec.indices;
    double const a = idx.alpha;
    double const b = idx.beta;
    switch (spec.family)
    {
        case Family::ExteriorPair: {
            auto const& e = std::get<PairPQ>(spec.exponents);
            double const m = power_law(spec.U, "U").m;
            double const n = power_law(spec.V, "V").m;
            double const pq = e.p * e.q;
            if (!(pq > 1))
                not_applicable("needs pq > 1");
            if (!(m > -a) || !(n > -b))
                not_applicable("needs m > -alpha and n > -beta");
            rec.rule = (m == 0 && n == 0) ? Criterion::RuleConstantPotentials
                                          : Criterion::RulePowerPotentials;
            rec.thresholds = {(m + n * e.p + (b + a * e.q) * e.p) / (pq - 1),
                              (m * e.q + n + (b * e.p + a) * e.q) / (pq - 1)};
            break;
        }
        case Family::ProductWholeSpace: {
            auto const& e = std::get<Quad>(spec.exponents);
            double const eta = homogeneous_eta(spec, e);
            rec.rule = Criterion::RuleHomogeneousWholeSpace;
            rec.thresholds = {a * eta / (eta - 1)};
            break;
        }
        case Family::ProductExterior: {
            auto const& e = std::get<Quad>(spec.exponents);
            double const eta = homogeneous_eta(spec, e);
            if (e.p2 * e.q1 + e.p1 < 1 || e.p2 * e.q1 + e.q2 < 1)
                not_applicable("needs p2 q1 + p1 >= 1 and p2 q1 + q2 >= 1");
            rec.rule = Criterion::RuleHomogeneousExterior;
            rec.thresholds = {a * eta / (eta - 1)};
            break;
        }
        default:
            not_applicable("no closed-form rule for "
                           + std::string(to_string(spec.family)));
    }
    rec.threshold = *std::max_element(rec.thresholds.begin(), rec.thresholds.end());
    double const d = idx.d;
    rec.boundary = std::abs(d - rec.threshold) <= 1e-9 * std::max(1.0, std::abs(rec.threshold));
    rec.satisfied = !rec.boundary && d < rec.threshold;
    return rec;
}

//---------------------------------------------------------------------------//
// Decision engine
//---------------------------------------------------------------------------//
PhiTrace phi_trace(ProblemSpec const& spec, RGrid const& grid,
                   KernelConfig const& cfg)
{
    PhiTrace t;
    t.r = grid.values();
    int const d = spec.indices.d;
    for (double r : t.r)
    {
        t.log_phi_u.push_back(std::log(phi(spec.U, r, d, cfg)));
        if (spec.V)
            t.log_phi_v.push_back(std::log(phi(*spec.V, r, d, cfg)));
    }
    return t;
}

namespace
{
//! cu log Phi_U + cv log Phi_V + cr log r
struct Condition
{
    std::string label;
    Requirement requirement;
    LimitKind kind;
    double cu = 0;
    double cv = 0;
    double cr = 0;
};

ConditionTrace evaluate_condition(Condition const& c,
                                  std::vector<double> const& r,
                                  std::vector<double> const& lu,
                                  std::vector<double> const& lv)
{
    ConditionTrace out;
    out.label = c.label;
    out.requirement = c.requirement;
    out.kind = c.kind;
    bool up = true, down = true;
    for (std::size_t i = 0; i < r.size(); ++i)
    {
        double v = c.cu * lu[i] + c.cr * std::log(r[i]);
        if (c.cv != 0)
            v += c.cv * lv[i];
        if (i > 0)
        {
            double const prev = out.samples.back().second;
            double const tol = 1e-12 * std::max(1.0, std::abs(v));
            up = up && v >= prev - tol;
            down = down && v <= prev + tol;
        }
        out.samples.emplace_back(r[i], v);
    }
    out.non_monotone = !up && !down;
    out.limit = classify_log_limit(tail_envelope(out.samples, c.kind));
    out.satisfied = requirement_met(c.requirement, out.limit.tag);
    return out;
}

CaseResult make_case(Criterion criterion,
                     std::string label,
                     bool hypotheses,
                     std::vector<Condition> const& conds,
                     PhiTrace const& t)
{
    CaseResult cr;
    cr.criterion = criterion;
    cr.label = std::move(label);
    cr.hypotheses_hold = hypotheses;
    for (auto const& c : conds)
        cr.conditions.push_back(evaluate_condition(c, t.r, t.log_phi_u, t.log_phi_v));
    cr.satisfied = hypotheses
                   && std::all_of(cr.conditions.begin(), cr.conditions.end(),
                                  [](auto const& c) { return c.satisfied; });
    return cr;
}

std::vector<Condition> growth(double d, double a, double b)
{
    return {{"r^(d-alpha) / Phi_U -> 0", Requirement::TendsToZero, LimitKind::Lim,
             -1, 0, d - a},
            {"r^(d-beta) / Phi_V -> 0", Requirement::TendsToZero, LimitKind::Lim,
             0, -1, d - b}};
}

std::vector<Condition> with(std::vector<Condition> base, Condition extra)
{
    base.push_back(std::move(extra));
    return base;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<CaseResult> exterior_pair_cases(ProblemSpec const& spec, PhiTrace const& t)
{
    auto const& e = std::get<PairPQ>(spec.exponents);
    double const d = spec.indices.d, a = spec.indices.alpha, b = spec.indices.beta;
    auto const g = growth(d, a, b);
    Condition cu{"Phi_U^(1/p) Phi_V / r^((q+1)d-beta-alpha q) -> inf",
                 Requirement::Diverges, LimitKind::Lim,
                 1 / e.p, 1, -((e.q + 1) * d - b - a * e.q)};
    Condition cv{"Phi_U Phi_V^(1/q) / r^((p+1)d-beta p-alpha) -> inf",
                 Requirement::Diverges, LimitKind::Lim,
                 1, 1 / e.q, -((e.p + 1) * d - b * e.p - a)};
    bool const small = e.p * e.q <= 1 && lower_bound_outside_unit_ball(spec.U)
                       && lower_bound_outside_unit_ball(*spec.V);
    return {make_case(Criterion::ExteriorPair, "growth and coupled u-condition",
                      true, with(g, cu), t),
            make_case(Criterion::ExteriorPair, "growth and coupled v-condition",
                      true, with(g, cv), t),
            make_case(Criterion::ExteriorPair,
                      "pq <= 1 with potentials bounded below", small, g, t)};
}

std::vector<CaseResult> whole_space_cases(ProblemSpec const& spec, PhiTrace const& t)
{
    auto const& e = std::get<Quad>(spec.exponents);
    double const d = spec.indices.d, a = spec.indices.alpha, b = spec.indices.beta;
    double const S = e.p1 + e.p2 + e.q1 + e.q2;
    std::vector<Condition> conds{
        {"r^(d-alpha) / Phi_U^(1/p1) -> 0", Requirement::TendsToZero,
         LimitKind::Lim, -1 / e.p1, 0, d - a},
        {"r^(d-beta) / Phi_V^(1/q2) -> 0", Requirement::TendsToZero,
         LimitKind::Lim, 0, -1 / e.q2, d - b},
        {"r^(Sd-alpha(p1+q1)-beta(p2+q2)) / (Phi_U Phi_V) -> 0",
         Requirement::TendsToZero, LimitKind::Lim, -1, -1,
         S * d - a * (e.p1 + e.q1) - b * (e.p2 + e.q2)}};
    return {make_case(Criterion::WholeSpace, "three-way growth", true, conds, t)};
}

std::vector<CaseResult> product_whole_space_cases(ProblemSpec const& spec,
                                                  PhiTrace const& t)
{
    auto const& e = std::get<Quad>(spec.exponents);
    double const d = spec.indices.d, a = spec.indices.alpha, b = spec.indices.beta;
    double const S = e.p1 + e.p2 + e.q1 + e.q2;
    std::vector<CaseResult> out;

    out.push_back(make_case(
        Criterion::ProductWholeSpaceI, "(i) min(p1+q1, p2+q2) >= 1",
        std::min(e.p1 + e.q1, e.p2 + e.q2) >= 1,
        {{"liminf r^(Sd-alpha(p1+q1)-beta(p2+q2)) / (Phi_U Phi_V) = 0",
          Requirement::TendsToZero, LimitKind::Liminf, -1, -1,
          S * d - a * (e.p1 + e.q1) - b * (e.p2 + e.q2)}},
        t));

    double const s2 = (e.p1 - 1) * (1 - e.q2) + e.p2 * e.q1;
    Condition c2 = s2 < 0
        ? Condition{"limsup (Phi_U/r^(d-alpha))^(1-q2) (Phi_V/r^(d-beta))^p2 = inf",
                    Requirement::Diverges, LimitKind::Limsup, 1 - e.q2, e.p2,
                    -(d - a) * (1 - e.q2) - (d - b) * e.p2}
        : Condition{"limsup Phi_V^p2 Phi_U^(1-q2) / r^((d-beta)p2+(d-alpha)(p2q1+p1(1-q2))) = inf",
                    Requirement::Diverges, LimitKind::Limsup, 1 - e.q2, e.p2,
                    -(d - b) * e.p2 - (d - a) * (e.p2 * e.q1 + e.p1 * (1 - e.q2))};
    out.push_back(make_case(Criterion::ProductWholeSpaceII,
                            s2 < 0 ? "(ii) q2 < 1, (p1-1)(1-q2)+p2q1 < 0"
                                   : "(ii) q2 < 1, (p1-1)(1-q2)+p2q1 >= 0",
                            e.q2 < 1, {c2}, t));

    double const s3 = (1 - e.p1) * (e.q2 - 1) + e.p2 * e.q1;
    Condition c3 = s3 < 0
        ? Condition{"limsup (Phi_U/r^(d-alpha))^q1 (Phi_V/r^(d-beta))^(1-p1) = inf",
                    Requirement::Diverges, LimitKind::Limsup, e.q1, 1 - e.p1,
                    -(d - a) * e.q1 - (d - b) * (1 - e.p1)}
        : Condition{"limsup Phi_U^q1 Phi_V^(1-p1) / r^((d-alpha)q1+(d-beta)(p2q1+q2(1-p1))) = inf",
                    Requirement::Diverges, LimitKind::Limsup, e.q1, 1 - e.p1,
                    -(d - a) * e.q1 - (d - b) * (e.p2 * e.q1 + e.q2 * (1 - e.p1))};
    out.push_back(make_case(Criterion::ProductWholeSpaceIII,
                            s3 < 0 ? "(iii) p1 < 1, (1-p1)(q2-1)+p2q1 < 0"
                                   : "(iii) p1 < 1, (1-p1)(q2-1)+p2q1 >= 0",
                            e.p1 < 1, {c3}, t));

    out.push_back(make_case(
        Criterion::ProductWholeSpaceIV, "(iv) max(p1+q1, p2+q2) <= 1",
        std::max(e.p1 + e.q1, e.p2 + e.q2) <= 1,
        {{"liminf r^(d-alpha) r^(d-beta) / (Phi_U Phi_V) = 0",
          Requirement::TendsToZero, LimitKind::Liminf, -1, -1, 2 * d - a - b}},
        t));
    return out;
}

/*
 * u-equation U u^p1 v^p2, v-equation V u^q1 v^q2. Both branches and the
 * growth condition are needed at once.
 */
std::vector<CaseResult> product_exterior_cases(ProblemSpec const& spec,
                                               PhiTrace const& t)
{
    auto const& e = std::get<Quad>(spec.exponents);
    double const d = spec.indices.d, a = spec.indices.alpha, b = spec.indices.beta;
    auto const g = growth(d, a, b);
    std::vector<CaseResult> out;

    double const ku = e.p2 * e.q1 + e.p1;
    if (ku < 1)
    {
        out.push_back(make_case(
            Criterion::ProductExteriorI, "(i) p2 q1 + p1 < 1", true,
            with(g, {"liminf (Phi_V/r^((d-beta)(1+q2)))^p2 Phi_U/r^(d-alpha) > 0",
                     Requirement::PositiveLiminf, LimitKind::Liminf, 1, e.p2,
                     -(d - b) * (1 + e.q2) * e.p2 - (d - a)}),
            t));
    }
    else
    {
        out.push_back(make_case(
            Criterion::ProductExteriorIII, "(iii) p2 q1 + p1 >= 1", true,
            with(g, {"Phi_U Phi_V^p2 / r^((d-alpha)(p2q1+p1)+(d-beta)(p2q2+p2)) -> inf",
                     Requirement::Diverges, LimitKind::Lim, 1, e.p2,
                     -(d - a) * ku - (d - b) * (e.p2 * e.q2 + e.p2)}),
            t));
    }

    double const kv = e.p2 * e.q1 + e.q2;
    if (kv < 1)
    {
        out.push_back(make_case(
            Criterion::ProductExteriorII, "(ii) p2 q1 + q2 < 1", true,
            with(g, {"liminf (Phi_U/r^((d-alpha)(1+p1)))^q1 Phi_V/r^(d-beta) > 0",
                     Requirement::PositiveLiminf, LimitKind::Liminf, e.q1, 1,
                     -(d - a) * (1 + e.p1) * e.q1 - (d - b)}),
            t));
    }
    else
    {
        out.push_back(make_case(
            Criterion::ProductExteriorIV, "(iv) p2 q1 + q2 >= 1", true,
            with(g, {"Phi_V Phi_U^q1 / r^((d-beta)(p2q1+q2)+(d-alpha)(p1q1+q1)) -> inf",
                     Requirement::Diverges, LimitKind::Lim, e.q1, 1,
                     -(d - b) * kv - (d - a) * (e.p1 * e.q1 + e.q1)}),
            t));
    }
    return out;
}

std::vector<CaseResult> exterior_scalar_cases(ProblemSpec const& spec,
                                              PhiTrace const& t)
{
    double const p = std::get<ScalarP>(spec.exponents).p;
    double const d = spec.indices.d, a = spec.indices.alpha;
    return {make_case(Criterion::ExteriorScalar, "single-equation growth", true,
                      {{"r^(d-alpha) / Phi_U^(1/p) -> 0", Requirement::TendsToZero,
                        LimitKind::Lim, -1 / p, 0, d - a}},
                      t)};
}
}  // namespace

Verdict decide_liouville(ProblemSpec const& raw, RGrid const& grid,
                         KernelConfig const& cfg)
{
    ProblemSpec const spec = validate_problem(raw);
    PhiTrace const t = phi_trace(spec, grid, cfg);

    Verdict v;
    switch (spec.family)
    {
        case Family::ExteriorPair: v.cases = exterior_pair_cases(spec, t); break;
        case Family::WholeSpace: v.cases = whole_space_cases(spec, t); break;
        case Family::ProductWholeSpace:
            v.cases = product_whole_space_cases(spec, t);
            break;
        case Family::ProductExterior:
            v.cases = product_exterior_cases(spec, t);
            break;
        case Family::ExteriorScalar: v.cases = exterior_scalar_cases(spec, t); break;
    }

    bool holds = false;
    if (spec.family == Family::ProductExterior)
        holds = std::all_of(v.cases.begin(), v.cases.end(),
                            [](auto const& c) { return c.satisfied; });
    else
        holds = std::any_of(v.cases.begin(), v.cases.end(),
                            [](auto const& c) { return c.satisfied; });

    v.theorem_applied = v.cases.front().criterion;
    for (auto const& c : v.cases)
    {
        if (c.satisfied)
        {
            v.theorem_applied = c.criterion;
            break;
        }
    }

    if (!holds)
    {
        for (auto const& c : v.cases)
        {
            if (!c.hypotheses_hold)
                continue;
            for (auto const& cond : c.conditions)
            {
                if (cond.limit.tag == LimitTag::Indeterminate)
                    throw Error(ErrorCode::GridTooCoarse,
                                "condition '" + cond.label + "' of " + c.label
                                    + " is indeterminate on this grid");
            }
        }
    }

    std::optional<ThresholdRecord> rule;
    try
    {
        rule = closed_form_threshold(spec);
    }
    catch (Error const& err)
    {
        if (err.code() != ErrorCode::RuleNotApplicable)
            throw;
    }
    if (rule)
    {
        CaseResult rc;
        rc.criterion = rule->rule;
        rc.label = "closed form: d < " + fmt(rule->threshold);
        rc.hypotheses_hold = true;
        rc.satisfied = rule->satisfied;
        v.cases.push_back(rc);
        if (rule->boundary)
        {
            holds = false;
        }
        else if (rule->satisfied != holds)
        {
            throw Error(ErrorCode::InternalInconsistency,
                        std::string(to_string(rule->rule)) + " says "
                            + (rule->satisfied ? "holds" : "inconclusive")
                            + " at d = " + std::to_string(spec.indices.d)
                            + " (threshold " + fmt(rule->threshold)
                            + ") but the grid conditions disagree");
        }
    }
    v.conclusion = holds ? Conclusion::LiouvilleHolds : Conclusion::Inconclusive;
    return v;
}

CaseResult integral_conditions(ProblemSpec const& raw, RGrid const& grid,
                               KernelConfig const& cfg)
{
    ProblemSpec const spec = validate_problem(raw);
    if (spec.family != Family::ExteriorPair)
        throw Error(ErrorCode::RuleNotApplicable,
                    "integral conditions are stated for exterior pairs");
    auto const& e = std::get<PairPQ>(spec.exponents);
    if (!(e.p > 1) || !(e.q > 1))
        throw Error(ErrorCode::ExponentOutOfRange, "integral conditions need p, q > 1");

    double const a = spec.indices.alpha, b = spec.indices.beta;
    int const d = spec.indices.d;
    PhiTrace t;
    t.r = grid.values();
    for (double r : t.r)
    {
        // Reuses the trace slots for log ell_U, log ell_V.
        t.log_phi_u.push_back(std::log(ell(spec.U, r, d, e.p, b * e.p / (e.p - 1), cfg)));
        t.log_phi_v.push_back(std::log(ell(*spec.V, r, d, e.q, a * e.q / (e.q - 1), cfg)));
    }
    CaseResult cr;
    cr.criterion = Criterion::RuleIntegralPotentials;
    cr.label = "integral conditions on U^(-1/(p-1)), V^(-1/(q-1))";
    cr.hypotheses_hold = true;
    std::vector<Condition> conds{
        {"ell_U^((p-1)/p) ell_V^(q-1) -> 0", Requirement::TendsToZero,
         LimitKind::Lim, (e.p - 1) / e.p, e.q - 1, 0},
        {"ell_U^(p-1) ell_V^((q-1)/q) -> 0", Requirement::TendsToZero,
         LimitKind::Lim, e.p - 1, (e.q - 1) / e.q, 0}};
    for (auto const& c : conds)
        cr.conditions.push_back(evaluate_condition(c, t.r, t.log_phi_u, t.log_phi_v));
    cr.satisfied = cr.conditions[0].satisfied || cr.conditions[1].satisfied;
    return cr;
}

//---------------------------------------------------------------------------//
// JSON
//---------------------------------------------------------------------------//
nlohmann::json to_json(LimitClass const& c)
{
    return {{"tag", to_string(c.tag)},
            {"fitted_exponent", c.fitted_exponent},
            {"confidence", c.confidence}};
}

nlohmann::json to_json(ThresholdRecord const& t)
{
    return {{"rule", to_string(t.rule)},
            {"thresholds", t.thresholds},
            {"threshold", t.threshold},
            {"satisfied", t.satisfied},
            {"boundary", t.boundary}};
}

nlohmann::json to_json(Verdict const& v)
{
    nlohmann::json criteria = nlohmann::json::array();
    nlohmann::json cases = nlohmann::json::array();
    for (auto const& c : v.cases)
    {
        criteria.push_back({{"criterion", to_string(c.criterion)},
                            {"label", c.label},
                            {"hypotheses_hold", c.hypotheses_hold},
                            {"satisfied", c.satisfied}});
        for (auto const& cond : c.conditions)
        {
            nlohmann::json samples = nlohmann::json::array();
            for (auto const& [r, lv] : cond.samples)
                samples.push_back({r, lv});
            cases.push_back({{"case", c.label},
                             {"label", cond.label},
                             {"requirement", to_string(cond.requirement)},
                             {"limit_class", to_string(cond.limit.tag)},
                             {"fitted_exponent", cond.limit.fitted_exponent},
                             {"confidence", cond.limit.confidence},
                             {"satisfied", cond.satisfied},
                             {"non_monotone", cond.non_monotone},
                             {"samples", samples}});
        }
    }
    return {{"theorem", to_string(v.theorem_applied)},
            {"conclusion", to_string(v.conclusion)},
            {"criteria", criteria},
            {"cases", cases}};
}

}  // namespace liouville
