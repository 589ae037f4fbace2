#include "liouville/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "liouville/error.hpp"
#include "liouville/fraclap.hpp"
#include "liouville/kernels.hpp"
#include "liouville/phi_criteria.hpp"
#include "liouville/stable_sim.hpp"

namespace liouville
{
std::string to_csv(Table const& t)
{
    std::string out;
    auto line = [&](std::vector<std::string> const& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(t.columns);
    for (auto const& row : t.rows)
        line(row);
    return out;
}

nlohmann::json to_json(ExperimentReport const& r, bool include_runtime)
{
    nlohmann::json j;
    j["name"] = r.name;
    j["parameters"] = r.parameters.values();
    j["metrics"] = r.metrics;
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    j["artifact_version"] = r.version;
    j["rng"] = r.rng;
    if (include_runtime)
        j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

namespace
{
using Clock = std::chrono::steady_clock;

std::string num(double v)
{
    return format_double(v);
}

//! Point of dimension d from the leading coordinates, zero padded.
Point point(int d, std::initializer_list<double> coords)
{
    Point p(static_cast<std::size_t>(d), 0.0);
    std::size_t i = 0;
    for (double c : coords)
    {
        if (i < p.size())
            p[i++] = c;
    }
    return p;
}

double ols_slope(std::vector<double> const& x, std::vector<double> const& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(y.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

std::string radius_key(std::string const& prefix, double r)
{
    return prefix + "_r" + num(r);
}

MCConfig mc_config(Config const& p, int workers, std::uint64_t stream)
{
    MCConfig mc;
    mc.n_paths = static_cast<std::size_t>(p.get_int("n_paths"));
    mc.max_steps_per_path = static_cast<std::size_t>(p.get_int("max_steps"));
    mc.seed = p.get_uint("seed", 0) + stream;
    mc.workers = workers;
    return mc;
}

//---------------------------------------------------------------------------//
// Two-sided Green bounds
//---------------------------------------------------------------------------//
void lemma21(Config const& p, int, ExperimentReport& rep)
{
    int const d = static_cast<int>(p.get_int("d"));
    double const alpha = p.get_double("alpha");
    auto const pairs = p.get_int("pairs");
    double const min_delta = p.get_double("min_delta");
    Ball const ball = origin_ball(d);

    rep.samples.columns
        = {"delta_x", "delta_y", "distance", "green", "ratio_lower", "ratio_upper"};
    double sup_upper = 0, inf_lower = HUGE_VAL;
    double sup_lower = 0, inf_upper = HUGE_VAL;
    long long used = 0;
    for (long long i = 0; i < pairs; ++i)
    {
        Rng rng = path_rng(rep.seed, static_cast<std::uint64_t>(i));
        std::uniform_real_distribution<double> u;
        std::normal_distribution<double> n;
        auto direction = [&] {
            Point v(static_cast<std::size_t>(d));
            double s = 0;
            while (s == 0)
            {
                s = 0;
                for (double& c : v)
                {
                    c = n(rng);
                    s += c * c;
                }
            }
            for (double& c : v)
                c /= std::sqrt(s);
            return v;
        };
        // Distances to the boundary are log-uniform down to min_delta; a
        // third of the pairs put y close to x.
        double const lg = std::log(min_delta);
        double const dx = std::exp(lg * u(rng));
        Point x = direction();
        for (double& c : x)
            c *= 1 - dx;
        Point y;
        if (u(rng) < 1.0 / 3)
        {
            double const eps = dx * std::exp(lg * u(rng));
            Point e = direction();
            y = x;
            for (int k = 0; k < d; ++k)
                y[k] += 0.5 * eps * e[k];
        }
        else
        {
            y = direction();
            double const dy = std::exp(lg * u(rng));
            for (double& c : y)
                c *= 1 - dy;
        }
        double const rho = distance(x, y);
        double const delta_x = 1 - norm(x);
        double const delta_y = 1 - norm(y);
        if (!(rho > 0) || !(delta_y > 0))
            continue;

        double const g = green_ball(x, y, ball, alpha);
        double const upper = std::pow(delta_x * delta_y, 0.5 * alpha) * std::pow(rho, -d);
        double const lower = std::min(std::pow(rho, alpha - d), upper);
        double const rl = g / lower;
        double const ru = g / upper;
        sup_upper = std::max(sup_upper, ru);
        inf_upper = std::min(inf_upper, ru);
        sup_lower = std::max(sup_lower, rl);
        inf_lower = std::min(inf_lower, rl);
        ++used;
        rep.samples.rows.push_back(
            {num(delta_x), num(delta_y), num(rho), num(g), num(rl), num(ru)});
    }
    double const constant = std::max(sup_upper, 1 / inf_lower);
    rep.metrics = {{"pairs", double(used)},
                   {"sup_green_over_upper", sup_upper},
                   {"inf_green_over_upper", inf_upper},
                   {"sup_green_over_lower", sup_lower},
                   {"inf_green_over_lower", inf_lower},
                   {"sandwich_constant", constant}};
    rep.pass = used >= 1000 && std::isfinite(constant)
               && constant <= p.get_double("max_constant");
}

//---------------------------------------------------------------------------//
// Hitting probabilities
//---------------------------------------------------------------------------//
void lemma22a(Config const& p, int workers, ExperimentReport& rep)
{
    int const d = static_cast<int>(p.get_int("d"));
    double const alpha = p.get_double("alpha");
    auto const radii = p.get_list("r", {});
    rep.samples.columns = {"r", "estimate", "std_error", "truncated_fraction"};

    std::vector<double> lx, ly;
    double worst_trunc = 0;
    bool positive = true;
    for (std::size_t k = 0; k < radii.size(); ++k)
    {
        double const r = radii[k];
        Point const x = point(d, {r});
        auto const est = estimate_hitting_probability(
            x, origin_ball(d, 1.0), Ball{x, 2 * r}, alpha, mc_config(p, workers, k));
        double const trunc = double(est.truncated_paths) / double(est.n);
        worst_trunc = std::max(worst_trunc, trunc);
        positive = positive && est.mean > 0;
        lx.push_back(std::log(r));
        ly.push_back(std::log(est.mean));
        rep.metrics[radius_key("estimate", r)] = est.mean;
        rep.metrics[radius_key("std_error", r)] = est.std_error;
        rep.samples.rows.push_back(
            {num(r), num(est.mean), num(est.std_error), num(trunc)});
    }
    double const expected = -(d - alpha);
    double const slope = positive && radii.size() >= 2 ? ols_slope(lx, ly) : 0.0;
    rep.metrics["slope"] = slope;
    rep.metrics["expected_slope"] = expected;
    rep.metrics["max_truncated_fraction"] = worst_trunc;
    rep.pass = positive && radii.size() >= 2
               && std::abs(slope - expected) <= p.get_double("slope_tol");
}

void lemma22b(Config const& p, int workers, ExperimentReport& rep)
{
    int const d = static_cast<int>(p.get_int("d"));
    double const alpha = p.get_double("alpha");
    auto const radii = p.get_list("r", {});
    double const start = p.get_double("start_factor");
    double const encl = p.get_double("enclosure_factor");
    rep.samples.columns = {"r", "estimate", "std_error", "truncated_fraction"};

    double lo = HUGE_VAL, hi = 0, worst_trunc = 0;
    for (std::size_t k = 0; k < radii.size(); ++k)
    {
        double const r = radii[k];
        Point const x = point(d, {start * r});
        auto const est = estimate_hitting_probability(
            x, origin_ball(d, r), Ball{x, encl * r}, alpha, mc_config(p, workers, k));
        double const trunc = double(est.truncated_paths) / double(est.n);
        worst_trunc = std::max(worst_trunc, trunc);
        lo = std::min(lo, est.mean);
        hi = std::max(hi, est.mean);
        rep.metrics[radius_key("estimate", r)] = est.mean;
        rep.metrics[radius_key("std_error", r)] = est.std_error;
        rep.samples.rows.push_back(
            {num(r), num(est.mean), num(est.std_error), num(trunc)});
    }
    rep.metrics["min_estimate"] = lo;
    rep.metrics["max_estimate"] = hi;
    rep.metrics["min_over_max"] = hi > 0 ? lo / hi : 0.0;
    rep.metrics["max_truncated_fraction"] = worst_trunc;
    rep.pass = !radii.empty() && hi > 0
               && lo >= p.get_double("min_ratio") * hi
               && worst_trunc <= p.get_double("max_truncated_fraction");
}

//---------------------------------------------------------------------------//
// Dynkin identity
//---------------------------------------------------------------------------//
void dynkin(Config const& p, int, ExperimentReport& rep)
{
    int const d = static_cast<int>(p.get_int("d"));
    double const alpha = p.get_double("alpha");
    QuadConfig qc;
    qc.rel_tol = p.get_double("fraclap_rel_tol");
    KernelConfig kc;
    kc.quad_rel_tol = p.get_double("kernel_rel_tol");

    struct Entry
    {
        std::string name;
        Field field;
        Ball ball;
        std::vector<Point> points;
    };
    double const gr = p.get_double("getoor_ball_radius");
    double const br = p.get_double("bump_ball_radius");
    std::vector<Entry> battery{
        {"constant", constant_field(d, p.get_double("constant_value")),
         origin_ball(d, br),
         {point(d, {0.0}), point(d, {0.3 * br}), point(d, {-0.4 * br, 0.5 * br})}},
        {"getoor", getoor_field(d, alpha), origin_ball(d, gr),
         {point(d, {0.0}), point(d, {0.4 * gr}), point(d, {-0.2 * gr, 0.5 * gr})}},
        {"bump", bump_field(d, p.get_double("bump_radius")), origin_ball(d, br),
         {point(d, {0.0}), point(d, {0.3 * br}), point(d, {-0.4 * br, 0.5 * br})}},
    };

    rep.samples.columns = {"field", "x0", "x1", "value", "exit", "occupation", "residual"};
    double worst = 0, worst_const = 0;
    for (auto const& e : battery)
    {
        double field_worst = 0;
        for (auto const& x : e.points)
        {
            auto const t = dynkin_terms(e.field, x, e.ball, alpha, qc, kc);
            field_worst = std::max(field_worst, t.residual);
            rep.samples.rows.push_back({e.name, num(x[0]), num(d > 1 ? x[1] : 0.0),
                                        num(t.value), num(t.exit),
                                        num(t.occupation), num(t.residual)});
        }
        rep.metrics["max_residual_" + e.name] = field_worst;
        worst = std::max(worst, field_worst);
        if (e.name == "constant")
            worst_const = field_worst;
    }
    rep.metrics["max_residual"] = worst;
    rep.pass = worst <= p.get_double("max_residual")
               && worst_const <= p.get_double("max_constant_residual");
}

//---------------------------------------------------------------------------//
// Green-quadrature lower bound
//---------------------------------------------------------------------------//
void blowup(Config const& p, int, ExperimentReport& rep)
{
    int const d = static_cast<int>(p.get_int("d"));
    double const beta = p.get_double("beta");
    Potential const V = potential_from_config(p, "V");
    RGrid grid{p.get_double("grid.r0"), p.get_double("grid.ratio"),
               static_cast<int>(p.get_int("grid.count"))};

    // G on B(x, n) is at least n^{beta-d} G_unit(0, e/4) over B(x, n/4).
    double const kappa = green_ball(point(d, {0.0}), point(d, {0.25}),
                                    origin_ball(d), beta);
    rep.samples.columns = {"r", "phi_v", "lower_bound"};
    std::vector<std::pair<double, double>> samples;
    for (double r : grid.values())
    {
        double const ph = phi(V, r, d);
        double const bound = kappa * std::pow(r, beta - d) * ph;
        samples.emplace_back(r, bound);
        rep.samples.rows.push_back({num(r), num(ph), num(bound)});
    }
    auto const cls = classify_limit(samples);
    rep.metrics["kappa"] = kappa;
    rep.metrics["fitted_exponent"] = cls.fitted_exponent;
    rep.metrics["confidence"] = cls.confidence;
    rep.metrics["diverges"] = cls.tag == LimitTag::DivergesToInfinity ? 1.0 : 0.0;
    rep.pass = cls.tag == LimitTag::DivergesToInfinity;
}

//---------------------------------------------------------------------------//
// Symbolic/numeric coherence
//---------------------------------------------------------------------------//
void criteria_sweep(Config const& p, int, ExperimentReport& rep)
{
    double const alpha = p.get_double("alpha");
    double const beta = p.get_double("beta");
    RGrid grid{p.get_double("grid.r0"), p.get_double("grid.ratio"),
               static_cast<int>(p.get_int("grid.count"))};

    std::vector<ProblemSpec> specs;
    for (double d : p.get_list("d_values", {}))
    {
        for (double pp : p.get_list("p_values", {}))
            for (double qq : p.get_list("q_values", {}))
                for (double m : p.get_list("m_values", {}))
                    for (double n : p.get_list("n_values", {}))
                    {
                        ProblemSpec s;
                        s.family = Family::ExteriorPair;
                        s.indices = {int(d), alpha, beta};
                        s.exponents = PairPQ{pp, qq};
                        s.U = PowerLaw{1.0, m};
                        s.V = PowerLaw{1.0, n};
                        specs.push_back(s);
                    }
        for (auto fam : {Family::ProductWholeSpace, Family::ProductExterior})
            for (double eta : p.get_list("eta_values", {}))
                for (double p1 : p.get_list("p1_values", {}))
                    for (double q2 : p.get_list("q2_values", {}))
                    {
                        ProblemSpec s;
                        s.family = fam;
                        s.indices = {int(d), alpha, alpha};
                        s.exponents = Quad{p1, eta - p1, eta - q2, q2};
                        specs.push_back(s);
                    }
    }

    rep.samples.columns = {"family", "d", "exponents", "m", "n", "rule",
                           "threshold", "closed_form", "numeric", "agree"};
    double applicable = 0, off = 0, boundary = 0, disagree = 0, errors = 0;
    double boundary_bad = 0, integral_checked = 0, integral_bad = 0;
    for (auto const& s : specs)
    {
        std::string exps;
        std::visit(
            [&](auto const& e) {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, PairPQ>)
                    exps = num(e.p) + " " + num(e.q);
                else if constexpr (std::is_same_v<E, Quad>)
                    exps = num(e.p1) + " " + num(e.p2) + " " + num(e.q1) + " " + num(e.q2);
            },
            s.exponents);

        std::optional<ThresholdRecord> rule;
        try
        {
            rule = closed_form_threshold(s);
        }
        catch (Error const& e)
        {
            if (e.code() != ErrorCode::RuleNotApplicable)
                throw;
        }
        std::string symbolic = "n/a";
        if (rule)
        {
            ++applicable;
            symbolic = rule->boundary ? "boundary" : rule->satisfied ? "holds" : "inconclusive";
            (rule->boundary ? boundary : off) += 1;
        }

        std::string numeric;
        bool agree = true;
        std::optional<Verdict> verdict;
        try
        {
            verdict = decide_liouville(s, grid);
            numeric = std::string(to_string(verdict->conclusion));
            if (rule && rule->boundary
                && verdict->conclusion != Conclusion::Inconclusive)
            {
                ++boundary_bad;
                agree = false;
            }
        }
        catch (Error const& e)
        {
            numeric = "error:" + std::string(to_string(e.code()));
            agree = false;
            (e.code() == ErrorCode::InternalInconsistency ? disagree : errors) += 1;
        }

        auto const* pq = std::get_if<PairPQ>(&s.exponents);
        if (verdict && pq && pq->p > 1 && pq->q > 1)
        {
            auto const ic = integral_conditions(s, grid);
            ++integral_checked;
            for (int k = 0; k < 2; ++k)
            {
                // Cases 0 and 1 end with the two coupled conditions.
                auto const& coupled = verdict->cases[k].conditions.back();
                if (ic.conditions[k].limit.tag == LimitTag::TendsToZero
                    && coupled.limit.tag != LimitTag::DivergesToInfinity)
                    ++integral_bad;
            }
        }

        double m = 0, n = 0;
        if (auto const* u = std::get_if<PowerLaw>(&s.U))
            m = u->m;
        if (auto const* v = std::get_if<PowerLaw>(&*s.V))
            n = v->m;
        rep.samples.rows.push_back(
            {std::string(to_string(s.family)), std::to_string(s.indices.d), exps,
             num(m), num(n), rule ? std::string(to_string(rule->rule)) : "none",
             rule ? num(rule->threshold) : "", symbolic, numeric,
             agree ? "1" : "0"});
    }

    rep.metrics = {{"specs", double(specs.size())},
                   {"rule_applicable", applicable},
                   {"strictly_off_threshold", off},
                   {"boundary", boundary},
                   {"disagreements", disagree},
                   {"boundary_not_inconclusive", boundary_bad},
                   {"errors", errors},
                   {"integral_checked", integral_checked},
                   {"integral_violations", integral_bad}};
    rep.pass = specs.size() >= 100 && disagree == 0 && boundary_bad == 0
               && errors == 0 && integral_bad == 0;
}

//---------------------------------------------------------------------------//
using Runner = void (*)(Config const&, int, ExperimentReport&);

struct Entry
{
    std::string name;
    Runner run;
    Config::Map defaults;
};

std::vector<Entry> const& registry()
{
    static std::vector<Entry> const entries{
        {"lemma21", lemma21,
         {{"d", "2"}, {"alpha", "1"}, {"pairs", "1000"}, {"min_delta", "1e-6"},
          {"max_constant", "100"}, {"seed", "0"}}},
        {"lemma22a", lemma22a,
         {{"d", "2"}, {"alpha", "1"}, {"r", "4,8,16,32,64"}, {"n_paths", "100000"},
          {"max_steps", "10000"}, {"slope_tol", "0.15"}, {"seed", "0"}}},
        {"lemma22b", lemma22b,
         {{"d", "2"}, {"alpha", "1"}, {"r", "4,8,16,32,64"}, {"n_paths", "100000"},
          {"max_steps", "10000"}, {"start_factor", "1.5"},
          {"enclosure_factor", "4"}, {"min_ratio", "0.5"},
          {"max_truncated_fraction", "0.001"}, {"seed", "0"}}},
        {"dynkin", dynkin,
         {{"d", "2"}, {"alpha", "1"}, {"constant_value", "2.5"},
          {"getoor_ball_radius", "0.5"}, {"bump_radius", "2"},
          {"bump_ball_radius", "1"}, {"fraclap_rel_tol", "1e-7"},
          {"kernel_rel_tol", "1e-7"}, {"max_residual", "0.001"},
          {"max_constant_residual", "1e-10"}, {"seed", "0"}}},
        {"blowup", blowup,
         {{"d", "2"}, {"beta", "1"}, {"V.kind", "power"}, {"V.c", "1"},
          {"V.m", "0"}, {"grid.r0", "4"}, {"grid.ratio", "2"},
          {"grid.count", "8"}, {"seed", "0"}}},
        {"criteria-sweep", criteria_sweep,
         {{"alpha", "1"}, {"beta", "1"}, {"d_values", "2,3"},
          {"p_values", "0.5,1,1.5,2,3"}, {"q_values", "0.5,1,1.5,2,3"},
          {"m_values", "0,1"}, {"n_values", "0,1"}, {"eta_values", "1.5,2,3"},
          {"p1_values", "0.25,0.5,1"}, {"q2_values", "0.25,0.5,1"},
          {"grid.r0", "4"}, {"grid.ratio", "2"}, {"grid.count", "8"},
          {"seed", "0"}}},
    };
    return entries;
}

Entry const& find(std::string const& name)
{
    for (auto const& e : registry())
    {
        if (e.name == name)
            return e;
    }
    throw Error(ErrorCode::UnknownExperiment, "no experiment named '" + name + "'");
}
}  // namespace

std::vector<std::string> const& experiment_names()
{
    static std::vector<std::string> const names = [] {
        std::vector<std::string> out;
        for (auto const& e : registry())
            out.push_back(e.name);
        return out;
    }();
    return names;
}

Config experiment_defaults(std::string const& name)
{
    return Config(find(name).defaults);
}

ExperimentReport run_experiment(std::string const& name,
                                Config const& cfg,
                                int workers)
{
    auto const& entry = find(name);
    if (workers < 1)
        throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");

    Config resolved(entry.defaults);
    for (auto const& [k, v] : cfg.values())
        resolved.set(k, v);
    resolved.erase("workers");

    ExperimentReport rep;
    rep.name = name;
    rep.parameters = resolved;
    rep.seed = resolved.get_uint("seed", 0);
    rep.rng = std::string(rng_description);

    auto const t0 = Clock::now();
    entry.run(resolved, workers, rep);
    rep.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return rep;
}

}  // namespace liouville
