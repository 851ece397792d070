#include <doctest.h>

#include <random>

#include <latticeflow/multilayer.hpp>
#include <latticeflow/oracle.hpp>
#include <latticeflow/side_law.hpp>

using namespace latticeflow;
using R = Rational;

namespace
{
const SideLawParams quarter = SideLawParams::make(1, 1, R(1, 4));

std::vector<SideLawParams> grid()
{
    std::vector<SideLawParams> out;
    for (const R& a : {R(1, 2), R(1), R(2)})
        for (const R& g : {R(1, 2), R(1), R(2)})
            for (const R& dg : {R(0), R(1, 10), R(1, 4), R(49, 100), R(1, 2), R(3, 4), R(1)})
                out.push_back(SideLawParams::make(a, g, dg / g));
    return out;
}
} // namespace

TEST_CASE("parameters are validated by name")
{
    CHECK_THROWS_WITH_AS(SideLawParams::make(0, 1, 0), doctest::Contains("alpha"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(SideLawParams::make(1, -1, 0), doctest::Contains("gamma"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(SideLawParams::make(1, 1, R(-1, 3)), doctest::Contains("delta"), std::invalid_argument);
    CHECK(SideLawParams::make(1, 2, 1).capped_contrast() == R(1, 2));
    CHECK(SideLawParams::make(1, 2, R(1, 8)).capped_contrast() == R(1, 4));
}

TEST_CASE("cost of a step")
{
    CHECK(g_cost(0, 1, quarter) == 0);
    CHECK(g_cost(1, 1, quarter) == R(-3, 4));
    CHECK(g_cost(2, 1, quarter) == -1);
    CHECK(g_cost(3, 1, quarter) == R(1, 4));
    const SideLawParams flat = SideLawParams::make(R(3, 2), 2, 0);
    for (std::int64_t n = 0; n < 12; ++n)
    {
        const R y(7, 3);
        CHECK(g_cost(n, y, flat) == -2 * flat.alpha * n + R(n * (n + 1)) / (2 * y));
        CHECK(g_cost(0, y, quarter) == 0);
    }
}

TEST_CASE("optimal step")
{
    CHECK(optimal_step(1, quarter) == 2);
    CHECK(optimal_step(R(7, 10), quarter) == 1);
    CHECK(optimal_step(R(1, 4), quarter) == 0);
    try
    {
        optimal_step(R(5, 8), quarter);
        FAIL("expected a tie");
    }
    catch (const NonUniqueMinimizer& e)
    {
        CHECK(e.y() == R(5, 8));
        CHECK(e.minimizers() == std::vector<std::int64_t>{0, 1});
    }
}

TEST_CASE("singular set")
{
    CHECK(singular_set(quarter, 2) == std::vector<R>{R(5, 8), R(7, 8), R(13, 8), R(15, 8)});
    // at delta gamma = 1/2 the two families coincide
    CHECK(singular_set(SideLawParams::make(1, 1, R(1, 2)), 2) == std::vector<R>{R(3, 4), R(7, 4)});
    CHECK(singular_set(SideLawParams::make(1, 1, 3), 2) == std::vector<R>{R(3, 4), R(7, 4)});
    CHECK(singular_set(SideLawParams::make(1, 1, 0), 2) == std::vector<R>{R(1, 2), R(1), R(3, 2), R(2)});
    CHECK(is_singular(R(13, 8), quarter));
    CHECK_FALSE(is_singular(R(1), quarter));
}

TEST_CASE("thresholds")
{
    CHECK(contrast_threshold(1) == R(1, 2));
    CHECK(contrast_threshold(2) == R(1, 4));
    CHECK(contrast_threshold(100) < contrast_threshold(10));
    CHECK(pinning_threshold(SideLawParams::make(1, 1, 0)) == 2);
    CHECK(pinning_threshold(quarter) == R(8, 5));
    CHECK(pinning_threshold(SideLawParams::make(1, 1, 1)) == R(4, 3));
}

TEST_CASE("orbits")
{
    const Orbit even = orbit(1, quarter);
    CHECK(even.positions == std::vector<std::int64_t>{0, 2});
    CHECK(even.period == 1);
    CHECK(even.shift == 2);
    CHECK(even.velocity() == 2);

    const Orbit alternating = orbit(R(7, 10), quarter);
    CHECK(alternating.positions == std::vector<std::int64_t>{0, 1, 2});
    CHECK(orbit(R(7, 10), quarter, 1, 12).positions == std::vector<std::int64_t>{1, 2, 3});
    CHECK(alternating.period == 2);
    CHECK(alternating.velocity() == 1);

    NonsingularSampler sampler(3, 6);
    for (const R& d : {R(1, 2), R(3, 4), R(2)})
    {
        const SideLawParams high = SideLawParams::make(1, 1, d);
        for (int i = 0; i < 100; ++i)
        {
            const R y = sampler.next(MultiLayerParams::from(high));
            for (std::int64_t x0 : {0, 1})
            {
                const Orbit o = orbit(y, high, x0);
                CHECK(o.period == 1);
                CHECK(o.shift % 2 == 0);
            }
        }
    }
    CHECK_THROWS_AS(orbit(R(5, 8), quarter), NonUniqueMinimizer);
    CHECK_THROWS_AS(orbit(1, quarter, 2), std::invalid_argument);
}

TEST_CASE("velocity closed form")
{
    CHECK(velocity_closed_form(1, quarter) == 2);
    CHECK(velocity_closed_form(R(7, 10), quarter) == 1);
    for (const R& d : {R(0), R(1, 4), R(1), R(5)})
        CHECK(velocity_closed_form(R(1, 4), SideLawParams::make(1, 1, d)) == 0);
    CHECK(velocity_closed_form(1, SideLawParams::make(1, 1, R(1, 2))) == 2);
    CHECK(high_contrast_velocity(1, 1) == 2);
    CHECK(velocity_closed_form(R(13, 10), SideLawParams::make(1, 1, 0)) == 2);
    CHECK(homogeneous_velocity(R(13, 10), 1) == 2);
    // faster than the homogeneous medium just below Y = 1
    CHECK(velocity_closed_form(R(95, 100), quarter) == 2);
    CHECK(homogeneous_velocity(R(95, 100), 1) == 1);
    CHECK_THROWS_AS(velocity_closed_form(R(7, 8), quarter), std::domain_error);
    CHECK_THROWS_AS(velocity_closed_form(0, quarter), std::domain_error);
}

TEST_CASE("envelope at breakpoints")
{
    const Envelope a = velocity_envelope(R(5, 8), quarter);
    CHECK(a.lower == 0);
    CHECK(a.upper == 1);
    const Envelope b = velocity_envelope(R(7, 8), quarter);
    CHECK(b.lower == 1);
    CHECK(b.upper == 2);
    const Envelope c = velocity_envelope(1, quarter);
    CHECK(c.lower == 2);
    CHECK(c.upper == 2);
}

TEST_CASE("velocity table")
{
    const VelocityTable t = velocity_table(quarter, 2);
    REQUIRE(t.intervals.size() == 5);
    const std::vector<std::pair<R, R>> ends{{0, R(5, 8)}, {R(5, 8), R(7, 8)}, {R(7, 8), R(13, 8)},
                                            {R(13, 8), R(15, 8)}, {R(15, 8), 2}};
    for (std::size_t i = 0; i < 5; ++i)
    {
        CHECK(t.intervals[i].lo == ends[i].first);
        CHECK(t.intervals[i].hi == ends[i].second);
        CHECK(t.intervals[i].value == static_cast<std::int64_t>(i));
    }
    const VelocityTable flat = velocity_table(SideLawParams::make(2, 1, 0), 3);
    for (const VelocityInterval& iv : flat.intervals)
        CHECK(iv.value == homogeneous_velocity((iv.lo + iv.hi) / 2, 2));
}

TEST_CASE("table jumps by one below the contrast threshold and by two above")
{
    for (const SideLawParams& p : grid())
    {
        const VelocityTable t = velocity_table(p, 10);
        const std::int64_t jump = p.capped_contrast() == R(1, 2) ? 2 : 1;
        for (std::size_t i = 1; i < t.intervals.size(); ++i)
            CHECK(t.intervals[i].value - t.intervals[i - 1].value == jump);
        for (std::size_t i = 0; i < t.breakpoints.size(); ++i)
            CHECK(t.envelopes[i].upper - t.envelopes[i].lower == jump);
    }
}

TEST_CASE("closed form agrees with the orbit and stays within 1 + C of 2 alpha Y")
{
    std::uint64_t seed = 100;
    for (const SideLawParams& p : grid())
    {
        NonsingularSampler sampler(seed++, 10);
        for (int i = 0; i < 200; ++i)
        {
            const R y = sampler.next(MultiLayerParams::from(p));
            const std::int64_t f = velocity_closed_form(y, p);
            CHECK(f == effective_velocity(y, p));
            CHECK(f == optimal_step(y, p));
            R gap = f - 2 * p.alpha * y;
            if (gap < 0)
                gap = -gap;
            CHECK(gap <= 1 + p.capped_contrast());
        }
    }
}

TEST_CASE("parity of the optimal step")
{
    for (const SideLawParams& p : grid())
    {
        // the odd window ((1 + C)/2alpha, (2 - C)/2alpha) is nonempty iff C < 1/2
        const R c = p.capped_contrast();
        if (c < R(1, 2))
            CHECK(optimal_step((3 / R(2)) / (2 * p.alpha), p) == 1);
        else
            for (int k = 1; k < 400; ++k)
            {
                const R y = ratio(k, 40) - R(1, 1009);
                if (!is_singular(y, p))
                    CHECK(optimal_step(y, p) % 2 == 0);
            }
    }
}
