#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liouville/config.hpp"
#include "liouville/error.hpp"
#include "liouville/experiments.hpp"
#include "liouville/fraclap.hpp"
#include "liouville/kernels.hpp"
#include "liouville/phi_criteria.hpp"
#include "liouville/stable_sim.hpp"

using namespace liouville;
using nlohmann::json;

namespace
{
struct Options
{
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string out_dir;
};

Config resolve(Options const& o)
{
    Config cfg = o.config_path.empty() ? Config{} : Config::load(o.config_path);
    for (auto const& s : o.overrides)
        cfg.set(std::string_view(s));
    if (o.seed)
        cfg.set("seed", std::to_string(*o.seed));
    return cfg;
}

void emit(Options const& o, json const& report, Table const& samples)
{
    if (o.out_dir.empty())
    {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::filesystem::create_directories(o.out_dir);
    std::ofstream(std::filesystem::path(o.out_dir) / "report.json")
        << report.dump(2) << '\n';
    std::ofstream(std::filesystem::path(o.out_dir) / "samples.csv")
        << to_csv(samples);
    std::cout << "wrote " << o.out_dir << "/report.json and samples.csv\n";
}

Point get_point(Config const& cfg, std::string const& key, int d)
{
    Point p = cfg.get_list(key, Point(static_cast<std::size_t>(d), 0.0));
    if (static_cast<int>(p.size()) != d)
        throw Error(ErrorCode::ConfigParse,
                    key + " needs " + std::to_string(d) + " coordinates");
    return p;
}

Ball get_ball(Config const& cfg, std::string const& prefix, int d,
              double radius)
{
    return Ball{get_point(cfg, prefix + ".center", d),
                cfg.get_double(prefix + ".radius", radius)};
}

std::string num(double v)
{
    return format_double(v);
}

RGrid get_grid(Config const& cfg)
{
    RGrid g;
    return RGrid{cfg.get_double("grid.r0", g.r0),
                 cfg.get_double("grid.ratio", g.ratio),
                 static_cast<int>(cfg.get_int("grid.count", g.count))};
}

//---------------------------------------------------------------------------//
int cmd_experiment(Options const& o, std::string const& name)
{
    auto const rep = run_experiment(name, resolve(o), o.workers);
    emit(o, to_json(rep), rep.samples);
    std::cerr << name << ": " << (rep.pass ? "PASS" : "FAIL") << '\n';
    return rep.pass ? 0 : 1;
}

int cmd_decide(Options const& o)
{
    Config const cfg = resolve(o);
    auto const spec = spec_from_config(cfg);
    auto const grid = get_grid(cfg);
    auto const verdict = decide_liouville(spec, grid);
    auto const trace = phi_trace(spec, grid);

    json report;
    report["spec"] = spec_to_config(spec).values();
    report["verdict"] = to_json(verdict);
    report["artifact_version"] = artifact_version;
    Table t{{"r", "log_phi_u", "log_phi_v"}, {}};
    for (std::size_t i = 0; i < trace.r.size(); ++i)
    {
        t.rows.push_back({num(trace.r[i]), num(trace.log_phi_u[i]),
                          trace.log_phi_v.empty() ? "" : num(trace.log_phi_v[i])});
    }
    emit(o, report, t);
    return 0;
}

int cmd_phi(Options const& o)
{
    Config const cfg = resolve(o);
    int const d = static_cast<int>(cfg.get_int("d", 2));
    auto const pot = potential_from_config(cfg, cfg.get_string("potential", "U"));
    Table t{{"r", "phi"}, {}};
    json values = json::array();
    for (double r : cfg.get_list("r", get_grid(cfg).values()))
    {
        double const v = phi(pot, r, d);
        t.rows.push_back({num(r), num(v)});
        values.push_back({{"r", r}, {"phi", v}});
    }
    emit(o, {{"d", d}, {"phi", values}, {"artifact_version", artifact_version}}, t);
    return 0;
}

int cmd_green(Options const& o)
{
    Config const cfg = resolve(o);
    int const d = static_cast<int>(cfg.get_int("d", 2));
    double const alpha = cfg.get_double("alpha", 1.0);
    Ball const ball = get_ball(cfg, "ball", d, 1.0);
    Point const x = get_point(cfg, "x", d);

    json report{{"d", d}, {"alpha", alpha}, {"artifact_version", artifact_version}};
    Table t{{"quantity", "value"}, {}};
    auto add = [&](std::string const& k, double v) {
        report[k] = v;
        t.rows.push_back({k, num(v)});
    };
    if (cfg.has("y"))
    {
        Point const y = get_point(cfg, "y", d);
        add("green", green_ball(x, y, ball, alpha));
        if (distance(y, ball.center) > ball.radius)
            add("poisson", poisson_kernel_ball(x, y, ball, alpha));
    }
    add("expected_exit_time", expected_exit_time(x, ball, alpha));
    add("green_quadrature_one", green_quadrature(x, ball, alpha, constant_radial(1.0)));
    add("poisson_mass", poisson_expectation(x, ball, alpha, constant_radial(1.0)));
    emit(o, report, t);
    return 0;
}

Field field_from_config(Config const& cfg, int d, double alpha)
{
    auto const kind = cfg.get_string("field", "getoor");
    if (kind == "getoor")
        return getoor_field(d, alpha, cfg.get_double("field.radius", 1.0));
    if (kind == "constant")
        return constant_field(d, cfg.get_double("field.value", 1.0));
    if (kind == "riesz")
        return riesz_field(d, alpha);
    if (kind == "bump")
        return bump_field(d, cfg.get_double("field.radius", 1.0));
    if (kind == "gaussian")
        return gaussian_field(get_point(cfg, "field.center", d),
                              cfg.get_double("field.width", 1.0));
    throw Error(ErrorCode::ConfigParse, "field: unknown kind '" + kind + "'");
}

int cmd_flap(Options const& o)
{
    Config const cfg = resolve(o);
    int const d = static_cast<int>(cfg.get_int("d", 2));
    double const alpha = cfg.get_double("alpha", 1.0);
    Field const f = field_from_config(cfg, d, alpha);
    Point const x = get_point(cfg, "x", d);
    QuadConfig qc;
    qc.rel_tol = cfg.get_double("rel_tol", qc.rel_tol);
    qc.seed = cfg.get_uint("seed", 0);

    auto const res = frac_laplacian_detailed(f, x, alpha, qc);
    json report{{"d", d}, {"alpha", alpha}, {"field", cfg.get_string("field", "getoor")},
                {"value", res.value}, {"error", res.error},
                {"angular_variance", res.angular_variance},
                {"directions", res.directions},
                {"artifact_version", artifact_version}};
    Table t{{"value", "error", "angular_variance", "directions"},
            {{num(res.value), num(res.error), num(res.angular_variance),
              std::to_string(res.directions)}}};
    emit(o, report, t);
    return 0;
}

int cmd_hit(Options const& o)
{
    Config const cfg = resolve(o);
    int const d = static_cast<int>(cfg.get_int("d", 2));
    double const alpha = cfg.get_double("alpha", 1.0);
    Point const x = get_point(cfg, "x", d);
    Ball const target = get_ball(cfg, "target", d, 1.0);
    Ball enclosure{cfg.get_list("enclosure.center", x),
                   cfg.get_double("enclosure.radius", 2 * norm(x))};
    MCConfig mc;
    mc.n_paths = static_cast<std::size_t>(cfg.get_int("n_paths", 10000));
    mc.max_steps_per_path = static_cast<std::size_t>(cfg.get_int("max_steps", 10000));
    mc.seed = cfg.get_uint("seed", 0);
    mc.workers = o.workers;

    auto const est = estimate_hitting_probability(x, target, enclosure, alpha, mc);
    double const trunc = double(est.truncated_paths) / double(est.n);
    json report{{"d", d}, {"alpha", alpha}, {"estimate", est.mean},
                {"std_error", est.std_error}, {"n_paths", est.n},
                {"truncated_fraction", trunc}, {"seed", mc.seed},
                {"rng", std::string(rng_description)},
                {"artifact_version", artifact_version}};
    Table t{{"estimate", "std_error", "n_paths", "truncated_fraction"},
            {{num(est.mean), num(est.std_error), std::to_string(est.n), num(trunc)}}};
    emit(o, report, t);
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stable-process kernels, fractional Laplacian quadrature and "
                 "nonexistence criteria for coupled fractional inequalities"};
    app.require_subcommand(1);

    Options opts;
    std::string experiment;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key = value config file")
            ->check(CLI::ExistingFile);
        sub->add_option("--set", opts.overrides, "override, key=value (repeatable)");
        sub->add_option("--seed", opts.seed, "Monte Carlo seed");
        sub->add_option("--workers", opts.workers, "worker threads")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", opts.out_dir,
                        "directory for report.json and samples.csv");
    };

    auto* exp = app.add_subcommand("experiment", "run a named experiment");
    std::string names;
    for (auto const& n : experiment_names())
        names += (names.empty() ? "" : ", ") + n;
    exp->add_option("name", experiment, "one of " + names)->required();
    common(exp);
    auto* decide = app.add_subcommand("decide", "decide the Liouville property for a spec");
    common(decide);
    auto* phi_cmd = app.add_subcommand("phi", "tabulate Phi for a potential");
    common(phi_cmd);
    auto* green = app.add_subcommand("green", "ball Green and Poisson kernels");
    common(green);
    auto* flap = app.add_subcommand("flap", "fractional Laplacian of a test field");
    common(flap);
    auto* hit = app.add_subcommand("hit", "Monte Carlo hitting probability");
    common(hit);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*exp)
            return cmd_experiment(opts, experiment);
        if (*decide)
            return cmd_decide(opts);
        if (*phi_cmd)
            return cmd_phi(opts);
        if (*green)
            return cmd_green(opts);
        if (*flap)
            return cmd_flap(opts);
        if (*hit)
            return cmd_hit(opts);
    }
    catch (Error const& e)
    {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
