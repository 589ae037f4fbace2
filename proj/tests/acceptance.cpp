// Acceptance checks: one PASS/FAIL line per criterion, with time budgets.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "liouville/experiments.hpp"
#include "liouville/fraclap.hpp"
#include "liouville/phi_criteria.hpp"
#include "liouville/stable_sim.hpp"
#include "oracles.hpp"

using namespace liouville;
using std::numbers::pi;

namespace
{
struct Outcome
{
    bool ok = false;
    std::string detail;
};

Point disc_point(std::mt19937_64& rng, double radius)
{
    std::uniform_real_distribution<double> u;
    double const r = radius * std::sqrt(u(rng));
    double const t = 2 * pi * u(rng);
    return {r * std::cos(t), r * std::sin(t)};
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

std::map<int, ExperimentReport> g_reports;  // experiment runs reused by criterion 10
int g_workers = 2;

ExperimentReport const& run(int key, std::string const& name, Config const& cfg)
{
    return g_reports[key] = run_experiment(name, cfg, g_workers);
}

//---------------------------------------------------------------------------//
Outcome getoor()
{
    std::mt19937_64 rng(1);
    double worst = 0;
    for (double a : {0.5, 1.0, 1.5})
    {
        double const c = getoor_constant(2, a);
        for (int i = 0; i < 20; ++i)
        {
            auto const x = disc_point(rng, 0.95);
            double const v = frac_laplacian_eval(getoor_field(2, a), x, a);
            worst = std::max(worst, std::abs(v - c) / c);
        }
    }
    return {worst <= 1e-3, "max relative error " + fmt(worst)};
}

Outcome exit_time()
{
    Ball const b = origin_ball(2);
    Point const o{0, 0};
    MCConfig mc;
    mc.n_paths = 100000;
    mc.seed = 2;
    mc.workers = g_workers;
    auto const est = estimate_exit_functional(o, b, 1, constant_radial(1.0), mc);
    double const z = std::abs(est.mean - 2 / pi) / est.std_error;
    double const quad = std::abs(green_quadrature(o, b, 1, constant_radial(1.0)) - 2 / pi);
    return {z <= 3 && quad <= 1e-6,
            "MC off by " + fmt(z) + " std errors, quadrature off by " + fmt(quad)};
}

Outcome poisson_mass()
{
    std::mt19937_64 rng(3);
    Ball const b = origin_ball(2);
    double worst = 0;
    for (int i = 0; i < 10; ++i)
    {
        auto const x = disc_point(rng, 0.98);
        worst = std::max(worst, std::abs(poisson_expectation(x, b, 1, constant_radial(1.0)) - 1));
    }
    return {worst <= 1e-6, "max |mass - 1| " + fmt(worst)};
}

Outcome scaling()
{
    Outcome o{true, ""};
    int key = 40;
    for (auto [d, a] : {std::pair{2, "1"}, std::pair{3, "1.5"}})
    {
        Config cfg;
        cfg.set("d", std::to_string(d));
        cfg.set("alpha", a);
        auto const& rep = run(key++, "lemma22a", cfg);
        o.ok = o.ok && rep.pass;
        o.detail += "d=" + std::to_string(d) + " slope " + fmt(rep.metrics.at("slope"))
                    + " (want " + fmt(rep.metrics.at("expected_slope")) + ") ";
    }
    return o;
}

Outcome uniformity()
{
    auto const& rep = run(50, "lemma22b", {});
    return {rep.pass, "min/max " + fmt(rep.metrics.at("min_over_max")) + ", truncated "
                          + fmt(rep.metrics.at("max_truncated_fraction"))};
}

Outcome dynkin()
{
    auto const& rep = run(60, "dynkin", {});
    return {rep.pass, "max residual " + fmt(rep.metrics.at("max_residual"))};
}

Outcome phi_checks()
{
    double worst_oracle = 0, worst_ratio = 0;
    for (auto [m, r] : {std::pair{0.0, 4.0}, {1.0, 8.0}, {0.5, 16.0}, {2.0, 6.0}, {-0.5, 12.0}})
    {
        double const v = phi(PowerLaw{1, m}, r, 2);
        worst_oracle = std::max(worst_oracle, std::abs(v / oracle::phi_power_2d(m, r) - 1));
        for (int d : {2, 3})
        {
            double const ratio = phi(PowerLaw{1, m}, 2 * r, d) / phi(PowerLaw{1, m}, r, d);
            worst_ratio = std::max(worst_ratio, std::abs(ratio / std::pow(2.0, d + m) - 1));
        }
    }
    return {worst_oracle <= 1e-4 && worst_ratio <= 1e-10,
            "oracle error " + fmt(worst_oracle) + ", doubling error " + fmt(worst_ratio)};
}

Outcome coherence()
{
    auto const& rep = run(80, "criteria-sweep", {});
    auto const& m = rep.metrics;
    return {rep.pass, fmt(m.at("specs")) + " specs, " + fmt(m.at("strictly_off_threshold"))
                          + " off threshold, " + fmt(m.at("boundary")) + " on it, "
                          + fmt(m.at("disagreements")) + " disagreements, "
                          + fmt(m.at("boundary_not_inconclusive"))
                          + " boundary specs not Inconclusive"};
}

Outcome implication()
{
    int specs = 0, triggered = 0, bad = 0;
    for (double p : {1.5, 2.0, 3.0, 4.0, 6.0})
    {
        for (double m : {0.0, 1.5})
        {
            ProblemSpec s;
            s.family = Family::ExteriorPair;
            s.indices = {2, 1, 1};
            s.exponents = PairPQ{p, 1.5};
            s.U = PowerLaw{1, m};
            s.V = PowerLaw{1, 0.5};
            s = validate_problem(s);
            auto const ic = integral_conditions(s);
            auto const v = decide_liouville(s);
            ++specs;
            for (int k = 0; k < 2; ++k)
            {
                if (ic.conditions[k].limit.tag != LimitTag::TendsToZero)
                    continue;
                ++triggered;
                if (v.cases[k].conditions.back().limit.tag != LimitTag::DivergesToInfinity)
                    ++bad;
            }
        }
    }
    return {specs == 10 && triggered > 0 && bad == 0,
            std::to_string(specs) + " specs, " + std::to_string(triggered)
                + " integral conditions tend to zero, " + std::to_string(bad) + " violations"};
}

Outcome determinism()
{
    // Runs lemma21 and blowup here; the rest were run above with g_workers.
    run(10, "lemma21", {});
    run(20, "blowup", {});
    int mismatches = 0, compared = 0;
    int const other = g_workers == 1 ? 3 : 1;
    for (auto const& [key, rep] : g_reports)
    {
        auto const again = run_experiment(rep.name, rep.parameters, other);
        ++compared;
        if (again.metrics != rep.metrics || to_csv(again.samples) != to_csv(rep.samples)
            || to_json(again, false) != to_json(rep, false))
            ++mismatches;
    }
    return {compared == 7 && mismatches == 0,
            std::to_string(compared) + " runs repeated with " + std::to_string(other)
                + " worker(s), " + std::to_string(mismatches) + " differ"};
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance checks"};
    app.add_option("--workers", g_workers, "worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    struct Criterion
    {
        int id;
        char const* name;
        double budget_s;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> const all{
        {1, "Getoor identity", 30, getoor},
        {2, "exit-time closed form", 60, exit_time},
        {3, "Poisson normalization", 10, poisson_mass},
        {4, "hitting-probability scaling", 300, scaling},
        {5, "hitting-probability uniformity", 300, uniformity},
        {6, "Dynkin residual battery", 120, dynkin},
        {7, "Phi homogeneity and brute force", 60, phi_checks},
        {8, "criteria coherence sweep", 120, coherence},
        {9, "integral-condition implication", 60, implication},
        {10, "determinism across worker counts", 60, determinism},
    };

    int failures = 0;
    for (auto const& c : all)
    {
        auto const t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.check();
        }
        catch (std::exception const& e)
        {
            o = {false, std::string("error: ") + e.what()};
        }
        double const secs
            = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool const in_time = secs <= c.budget_s;
        bool const pass = o.ok && in_time;
        failures += !pass;
        std::printf("%s criterion %d (%s): %s [%.1f s of %.0f s]%s\n", pass ? "PASS" : "FAIL",
                    c.id, c.name, o.detail.c_str(), secs, c.budget_s,
                    in_time ? "" : " over budget");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
