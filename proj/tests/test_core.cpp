#include <cmath>
#include <random>

#include <doctest.h>

#include "liouville/core.hpp"

using namespace liouville;

namespace
{
ProblemSpec pair_spec(int d = 2, double alpha = 1, double beta = 1)
{
    ProblemSpec s;
    s.family = Family::ExteriorPair;
    s.indices = {d, alpha, beta};
    s.exponents = PairPQ{1, 1};
    s.U = PowerLaw{1, 0};
    s.V = PowerLaw{1, 0};
    return s;
}

ErrorCode code_of(ProblemSpec const& s)
{
    try
    {
        validate_problem(s);
    }
    catch (Error const& e)
    {
        return e.code();
    }
    FAIL("spec was accepted");
    return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_CASE("interior spec is accepted unchanged")
{
    auto const s = pair_spec();
    CHECK(validate_problem(s) == s);
}

TEST_CASE("index range")
{
    CHECK(code_of(pair_spec(1, 1.5, 0.5)) == ErrorCode::IndexOutOfRange);
    CHECK(code_of(pair_spec(2, 2.0, 1)) == ErrorCode::IndexOutOfRange);
    CHECK(code_of(pair_spec(3, 1, 0)) == ErrorCode::IndexOutOfRange);
    // the margin keeps values just inside the open interval out
    CHECK(code_of(pair_spec(3, 2 - 1e-12, 1)) == ErrorCode::IndexOutOfRange);
    CHECK_NOTHROW(validate_problem(pair_spec(3, 2 - 1e-6, 1e-6)));
}

TEST_CASE("exponent signs per family")
{
    auto s = pair_spec();
    s.exponents = PairPQ{0, 1};
    CHECK(code_of(s) == ErrorCode::ExponentSignViolation);

    s.family = Family::WholeSpace;
    s.exponents = Quad{0.5, 1, 1, 1};
    CHECK(code_of(s) == ErrorCode::ExponentSignViolation);
    s.exponents = Quad{1, 0, 0, 1};
    CHECK_NOTHROW(validate_problem(s));

    s.family = Family::ProductWholeSpace;
    s.exponents = Quad{0.5, 0, 0, 0.5};
    CHECK_NOTHROW(validate_problem(s));
    s.exponents = Quad{0, 1, 1, 1};
    CHECK(code_of(s) == ErrorCode::ExponentSignViolation);

    s.family = Family::ProductExterior;
    s.exponents = Quad{0, 1, 1, 0};
    CHECK_NOTHROW(validate_problem(s));
    s.exponents = Quad{1, 0, 1, 1};
    CHECK(code_of(s) == ErrorCode::ExponentSignViolation);
}

TEST_CASE("family and exponent variant must match")
{
    auto s = pair_spec();
    s.exponents = Quad{};
    CHECK_THROWS_AS(validate_problem(s), Error);
    s.family = Family::ExteriorScalar;
    s.exponents = ScalarP{2};
    s.V.reset();
    CHECK_NOTHROW(validate_problem(s));
}

TEST_CASE("potential checks")
{
    auto s = pair_spec();
    s.U = PowerLaw{0, 0};
    CHECK(code_of(s) == ErrorCode::PotentialInvalid);

    s = pair_spec(2, 1, 0.5);
    s.U = PowerLaw{1, -1};  // m <= -alpha in an exterior family
    CHECK(code_of(s) == ErrorCode::PotentialInvalid);
    s.U = PowerLaw{1, -0.9};
    CHECK_NOTHROW(validate_problem(s));
    s.V = PowerLaw{1, -0.5};
    CHECK(code_of(s) == ErrorCode::PotentialInvalid);

    s = pair_spec();
    s.U = TabulatedRadial{{{2, 1}, {1, 2}}, 0};
    CHECK(code_of(s) == ErrorCode::PotentialInvalid);
    s.U = TabulatedRadial{{{1, 1}, {2, 0}}, 0};
    CHECK(code_of(s) == ErrorCode::PotentialInvalid);
}

TEST_CASE("validation is idempotent on random accepted specs")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    int accepted = 0;
    for (int i = 0; i < 500; ++i)
    {
        auto s = pair_spec(2 + i % 2, 2 * u(rng), 2 * u(rng));
        s.exponents = PairPQ{3 * u(rng), 3 * u(rng)};
        s.U = PowerLaw{u(rng), 2 * u(rng) - 1};
        s.V = PowerLaw{u(rng), 2 * u(rng) - 1};
        try
        {
            auto const once = validate_problem(s);
            CHECK(validate_problem(once) == once);
            CHECK(once == s);
            ++accepted;
        }
        catch (Error const&)
        {
        }
    }
    CHECK(accepted > 100);
}

TEST_CASE("tabulated potentials interpolate in log-log and extend by the tail")
{
    Potential const t = TabulatedRadial{{{1, 1}, {4, 16}}, -1};
    CHECK(evaluate(t, 0.5) == doctest::Approx(1));
    CHECK(evaluate(t, 2) == doctest::Approx(4));  // r^2 between the knots
    CHECK(evaluate(t, 8) == doctest::Approx(8));
    CHECK(evaluate(PowerLaw{3, 2}, 2) == doctest::Approx(12));
    CHECK(breakpoints(t, 0.5, 10) == std::vector<double>{1, 4});
    CHECK(breakpoints(t, 2, 10) == std::vector<double>{4});
}

TEST_CASE("lower bounds outside the unit ball")
{
    CHECK(lower_bound_outside_unit_ball(PowerLaw{2, 0.5}).value() == doctest::Approx(2));
    CHECK_FALSE(lower_bound_outside_unit_ball(PowerLaw{2, -0.5}).has_value());
}

TEST_CASE("family names round trip")
{
    for (auto f : {Family::ExteriorPair, Family::WholeSpace, Family::ProductWholeSpace,
                   Family::ProductExterior, Family::ExteriorScalar})
        CHECK(family_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(family_from_string("bogus"), Error);
}
