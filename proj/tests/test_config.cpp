#include <cmath>
#include <random>

#include <doctest.h>

#include "liouville/config.hpp"

using namespace liouville;

TEST_CASE("parse comments, whitespace and dotted keys")
{
    auto const cfg = Config::parse("# header\n"
                                   "family = product-exterior  # trailing\n"
                                   "\n"
                                   "  U.kind=power\n"
                                   "U.m = -0.25\n"
                                   "r = 4, 8,16\n"
                                   "d = 2\n"
                                   "d = 3\n");
    CHECK(cfg.get_string("family") == "product-exterior");
    CHECK(cfg.get_string("U.kind") == "power");
    CHECK(cfg.get_double("U.m") == -0.25);
    CHECK(cfg.get_int("d") == 3);
    CHECK(cfg.get_list("r", {}) == std::vector<double>{4, 8, 16});
    CHECK(cfg.get_double("missing", 1.5) == 1.5);
}

TEST_CASE("malformed input is a ConfigParse error")
{
    auto code = [](auto&& fn) {
        try
        {
            fn();
        }
        catch (Error const& e)
        {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { Config::parse("no equals sign"); }) == ErrorCode::ConfigParse);
    CHECK(code([] { Config::parse(" = 3"); }) == ErrorCode::ConfigParse);
    CHECK(code([] { Config::parse("d = two").get_int("d"); }) == ErrorCode::ConfigParse);
    CHECK(code([] { Config::parse("d = 2.5").get_int("d"); }) == ErrorCode::ConfigParse);
    CHECK(code([] { Config{}.get_double("absent"); }) == ErrorCode::ConfigParse);
    CHECK(code([] { Config::load("/nonexistent/file.cfg"); }) == ErrorCode::ConfigParse);
    CHECK(code([] { Config{}.set(std::string_view("novalue")); }) == ErrorCode::ConfigParse);
    CHECK(code([] {
              spec_from_config(Config::parse("U.kind = wavy"));
          })
          == ErrorCode::ConfigParse);
}

TEST_CASE("overrides replace file values")
{
    auto cfg = Config::parse("alpha = 1\n");
    cfg.set(std::string_view("alpha=0.5"));
    cfg.set(std::string_view("grid.count = 12"));
    CHECK(cfg.get_double("alpha") == 0.5);
    CHECK(cfg.get_int("grid.count") == 12);
    cfg.erase("alpha");
    CHECK_FALSE(cfg.has("alpha"));
}

TEST_CASE("format_double round trips")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 1000; ++i)
    {
        double const v = std::exp(u(rng)) * (i % 2 ? 1 : -1);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(4) == "4");
}

TEST_CASE("spec to config and back is the identity")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_int_distribution<int> fam(0, 4);
    int checked = 0;
    for (int i = 0; i < 300; ++i)
    {
        ProblemSpec s;
        s.family = static_cast<Family>(fam(rng));
        s.indices = {2 + i % 2, 1.9 * u(rng), 1.9 * u(rng)};
        switch (s.family)
        {
            case Family::ExteriorPair:
                s.exponents = PairPQ{3 * u(rng), 3 * u(rng)};
                break;
            case Family::ExteriorScalar:
                s.exponents = ScalarP{1 + 2 * u(rng)};
                s.V.reset();
                break;
            default:
                s.exponents = Quad{1 + u(rng), u(rng), u(rng), 1 + u(rng)};
        }
        if (i % 3 == 0)
            s.U = TabulatedRadial{{{1, u(rng)}, {2.5, u(rng)}, {7, u(rng)}}, u(rng)};
        else
            s.U = PowerLaw{u(rng), u(rng)};
        if (s.V)
            s.V = PowerLaw{u(rng), u(rng)};
        s = validate_problem(s);

        auto const text = spec_to_config(s).to_string();
        auto const back = spec_from_config(Config::parse(text));
        CHECK(back == s);
        CHECK(spec_to_config(back).to_string() == text);
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("defaults give the constant-potential pair")
{
    auto const s = spec_from_config(Config{});
    CHECK(s.family == Family::ExteriorPair);
    CHECK(s.indices.d == 2);
    CHECK(std::get<PairPQ>(s.exponents) == PairPQ{1, 1});
    CHECK(std::get<PowerLaw>(s.U) == PowerLaw{1, 0});
}
