#include <doctest.h>

#include "liouville/experiments.hpp"

using namespace liouville;

namespace
{
Config small(std::initializer_list<std::pair<char const*, char const*>> kv)
{
    Config c;
    for (auto const& [k, v] : kv)
        c.set(k, v);
    return c;
}

std::string stable_dump(ExperimentReport const& r)
{
    return to_json(r, false).dump();
}
}  // namespace

TEST_CASE("registry")
{
    CHECK(experiment_names()
          == std::vector<std::string>{"lemma21", "lemma22a", "lemma22b", "dynkin", "blowup",
                                      "criteria-sweep"});
    for (auto const& n : experiment_names())
        CHECK(experiment_defaults(n).has("seed"));
    try
    {
        run_experiment("lemma99", {});
        FAIL("unknown experiment accepted");
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::UnknownExperiment);
    }
}

TEST_CASE("csv layout")
{
    Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
    CHECK(to_csv(t) == "a,b\n1,2\n3,4\n");
}

TEST_CASE("reports embed the resolved configuration")
{
    auto cfg = small({{"pairs", "1200"}, {"workers", "3"}});
    auto const rep = run_experiment("lemma21", cfg);
    CHECK(rep.parameters.get_int("pairs") == 1200);
    CHECK(rep.parameters.get_double("max_constant") == 100);
    CHECK_FALSE(rep.parameters.has("workers"));
    CHECK(rep.runtime_seconds >= 0);
    CHECK(rep.version == artifact_version);
    CHECK_FALSE(rep.rng.empty());
    CHECK(rep.samples.columns
          == std::vector<std::string>{"delta_x", "delta_y", "distance", "green", "ratio_lower",
                                      "ratio_upper"});
    CHECK(rep.samples.rows.size() == 1200);
    CHECK(rep.pass);

    auto const j = to_json(rep);
    CHECK(j.contains("runtime_seconds"));
    CHECK_FALSE(to_json(rep, false).contains("runtime_seconds"));
    CHECK(j.at("parameters").at("pairs") == "1200");
}

TEST_CASE("same config and seed give byte-identical reports")
{
    auto const cfg = small({{"r", "4,8,16,32"}, {"n_paths", "4000"}, {"seed", "12"}});
    auto const a = run_experiment("lemma22a", cfg, 1);
    auto const b = run_experiment("lemma22a", cfg, 3);
    CHECK(stable_dump(a) == stable_dump(b));
    CHECK(to_csv(a.samples) == to_csv(b.samples));

    auto other = cfg;
    other.set("seed", "13");
    CHECK(stable_dump(run_experiment("lemma22a", other)) != stable_dump(a));
}

TEST_CASE("bad parameters are reported")
{
    try
    {
        run_experiment("lemma22a", small({{"n_paths", "many"}}));
        FAIL("accepted a non-numeric path count");
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::ConfigParse);
    }
    CHECK_THROWS_AS(run_experiment("lemma21", {}, 0), Error);
}

TEST_CASE("blowup with a decaying potential still diverges when d - beta + m > 0")
{
    auto const rep = run_experiment("blowup", small({{"V.m", "-0.5"}}));
    CHECK(rep.pass);
    CHECK(rep.metrics.at("fitted_exponent") == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("small criteria sweep")
{
    auto const rep = run_experiment(
        "criteria-sweep", small({{"d_values", "2"}, {"p_values", "1,2"}, {"q_values", "2"},
                                 {"eta_values", "2"}, {"p1_values", "0.5"},
                                 {"q2_values", "0.5"}}));
    CHECK(rep.metrics.at("specs") == 10);
    CHECK(rep.metrics.at("disagreements") == 0);
    CHECK(rep.metrics.at("boundary_not_inconclusive") == 0);
    CHECK_FALSE(rep.pass);  // fewer than 100 specs
}
