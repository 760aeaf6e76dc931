#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "she/drift.hpp"
#include "she/rng.hpp"

using namespace she;

TEST_CASE("drift family evaluation") {
    const DriftSpec aff = DriftSpec::affine(2.0);
    CHECK(aff(0.0) == doctest::Approx(1.0));
    CHECK(aff(3.0) == doctest::Approx(7.0));
    CHECK(aff(-5.0) == doctest::Approx(1.0));  // clamped below zero

    const DriftSpec pow2 = DriftSpec::power(2.0);
    CHECK(pow2(3.0) == doctest::Approx(10.0));
    CHECK(pow2(-3.0) == doctest::Approx(1.0));

    const DriftSpec ex = DriftSpec::exponential();
    CHECK(ex(1.0) == doctest::Approx(std::exp(1.0)));
    CHECK(ex(-40.0) > 0.0);

    CHECK_THROWS_AS(DriftSpec::affine(-1.0), std::domain_error);
    CHECK_THROWS_AS(DriftSpec::power(0.0), std::domain_error);
}

TEST_CASE("table drift interpolates and rejects bad tables") {
    const DriftSpec tb = DriftSpec::table({{0.0, 1.0}, {1.0, 3.0}, {2.0, 3.5}});
    CHECK(tb(0.5) == doctest::Approx(2.0));
    CHECK(tb(-1.0) == doctest::Approx(1.0));   // clamped to the first value
    CHECK(tb(10.0) == doctest::Approx(3.5));   // clamped to the last value
    CHECK(tb.tail_class() == TailClass::Undecided);
    CHECK_THROWS_AS(DriftSpec::table({{0.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(DriftSpec::table({{0.0, 2.0}, {1.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(DriftSpec::table({{0.0, -1.0}, {1.0, 1.0}}), std::domain_error);
}

TEST_CASE("truncation: min form, closed form, monotonicity") {
    const DriftSpec b = DriftSpec::power(2.0);
    const DriftSpec b5 = truncate(b, 5.0);
    CHECK(b5(1.0) == doctest::Approx(2.0));
    CHECK(b5(3.0) == doctest::Approx(5.0));
    CHECK(b5.family() == DriftFamily::Truncated);
    CHECK(b5.truncation_level() == doctest::Approx(5.0));

    const DriftSpec b9 = truncate(b, 9.0);
    for (int i = 0; i < 10000; ++i) {
        const double u = 40.0 * (uniform01(3, 0, i, 0) - 0.5);
        // closed algebraic form agrees with min (identity is exact in real
        // arithmetic; the add/subtract rounds at the scale of b(u), which
        // can dwarf the result n when b is large)
        CHECK(std::fabs(truncate_closed_form(b(u), 5.0) - std::min(b(u), 5.0)) <=
              1e-13 * (1.0 + b(u)));
        // ladder ordering in the level
        CHECK(b5(u) <= b9(u));
        CHECK(b9(u) <= b(u));
    }
    CHECK_THROWS_AS(truncate(b, 0.0), std::domain_error);
}

TEST_CASE("osgood integral per family") {
    const OsgoodVerdict q = osgood_integral(DriftSpec::power(2.0), 1.0);
    CHECK(q.finite);
    CHECK_FALSE(q.undecided);
    CHECK(q.value == doctest::Approx(0.78539816339744831).epsilon(1e-8));

    const OsgoodVerdict lin = osgood_integral(DriftSpec::affine(1.0), 1.0);
    CHECK_FALSE(lin.finite);
    CHECK_FALSE(lin.undecided);

    const OsgoodVerdict ex = osgood_integral(DriftSpec::exponential(), 1.0);
    CHECK(ex.finite);
    CHECK(ex.value == doctest::Approx(0.36787944117144232).epsilon(1e-8));

    const OsgoodVerdict tb =
        osgood_integral(DriftSpec::table({{0.0, 1.0}, {1.0, 2.0}}), 1.0);
    CHECK(tb.undecided);
}

TEST_CASE("osgood integral of any truncated drift diverges") {
    for (const DriftSpec& b :
         {DriftSpec::power(3.0), DriftSpec::affine(2.0), DriftSpec::exponential(),
          DriftSpec::logistic_cap(4.0, 1.0)}) {
        const OsgoodVerdict v = osgood_integral(truncate(b, 7.0), 1.0);
        CHECK_FALSE(v.finite);
        CHECK_FALSE(v.undecided);
    }
}

TEST_CASE("diffusion specs carry certified bounds") {
    const DiffusionSpec c = DiffusionSpec::constant(2.0);
    CHECK(c(123.0) == doctest::Approx(2.0));
    CHECK(c.c1() == doctest::Approx(2.0));
    CHECK(c.c2() == doctest::Approx(2.0));

    const DiffusionSpec s = DiffusionSpec::sine(1.5, 0.5);
    CHECK(s.c1() == doctest::Approx(1.0));
    CHECK(s.c2() == doctest::Approx(2.0));
    CHECK(s(0.0) == doctest::Approx(1.5));
    CHECK_THROWS_AS(DiffusionSpec::sine(1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(DiffusionSpec::constant(0.0), std::domain_error);
}

TEST_CASE("validation accepts the families and flags the right properties") {
    for (const DriftSpec& b : {DriftSpec::power(2.0), DriftSpec::affine(1.0),
                               DriftSpec::exponential()}) {
        const ValidationReport r = validate(b);
        CHECK(r.accepted);
    }
    // e^u is locally but not globally Lipschitz
    CHECK_FALSE(validate(DriftSpec::exponential()).global_lipschitz);
    CHECK(validate(truncate(DriftSpec::exponential(), 10.0)).global_lipschitz);

    // a flat-at-negative-value table violates positivity
    const ValidationReport bad =
        validate(DriftSpec::table({{0.0, 1.0}, {1.0, 1.0}}));
    CHECK(bad.accepted);  // positive constant table is fine

    const ValidationReport sine_ok = validate(DiffusionSpec::sine(1.5, 0.5));
    CHECK(sine_ok.accepted);
}
