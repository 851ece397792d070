#include <doctest.h>

#include <cmath>
#include <random>

#include <latticeflow/flow.hpp>

using namespace latticeflow;
using R = Rational;

namespace
{
const MultiLayerParams quarter = MultiLayerParams::make(1, 1, {R(1, 4)});

struct ConstantLaw
{
    std::int64_t f;
    Envelope envelope(const Rational&) const { return {f, f}; }
    std::optional<Rational> next_breakpoint(const Rational&) const { return std::nullopt; }
};
static_assert(VelocityLaw<ConstantLaw>);
static_assert(VelocityLaw<LayeredLaw>);
} // namespace

TEST_CASE("policy names")
{
    CHECK(parse_tie_policy("smaller") == TiePolicy::smaller_step);
    CHECK(parse_tie_policy("larger") == TiePolicy::larger_step);
    CHECK(parse_branch_policy("upper") == BranchPolicy::upper);
    CHECK_THROWS_AS(parse_tie_policy("middle"), std::invalid_argument);
    CHECK(std::string(to_string(Side::top)) == "top");
}

TEST_CASE("pinned square stays put")
{
    const DiscreteTrajectory d = evolve_discrete({0, 300, 0, 300}, quarter, R(1, 100), 5);
    CHECK(d.states.size() == 501);
    for (const RectangleState& s : d.states)
        CHECK(s == d.states.front());
    CHECK_FALSE(d.extinction_step);

    const OdeTrajectory o = evolve_ode(3, 3, quarter, 5);
    CHECK(o.fate == OdeFate::pinned);
    CHECK_FALSE(extinction_time(o));
    CHECK(o.lengths_at(4) == std::pair<R, R>{3, 3});
}

TEST_CASE("small square vanishes")
{
    const DiscreteTrajectory d = evolve_discrete({0, 100, 0, 100}, quarter, R(1, 100), 1);
    REQUIRE(d.extinction_step);
    for (std::size_t k = 1; k < d.states.size(); ++k)
    {
        CHECK(d.states[k - 1].contains(d.states[k]));
        if (d.states[k].alive())
            CHECK(d.states[k].width() < d.states[k - 1].width());
    }
    CHECK_FALSE(d.states.back().alive());

    const OdeTrajectory o = evolve_ode(1, 1, quarter, 1);
    CHECK(o.fate == OdeFate::extinct);
    REQUIRE(extinction_time(o));
    CHECK(*extinction_time(o) > 0);
}

TEST_CASE("one step in the f = 2 interval")
{
    const R eps(1, 100);
    const DiscreteTrajectory d = evolve_discrete({0, 100, 0, 100}, quarter, eps, eps);
    REQUIRE(d.states.size() == 2);
    CHECK(d.states[1] == RectangleState{2, 98, 2, 98});
    CHECK(d.length1(0) - d.length1(1) == 4 * eps);
}

TEST_CASE("each side moves by the optimal step of its own length")
{
    std::mt19937_64 rng(51);
    for (int i = 0; i < 40; ++i)
    {
        const MultiLayerParams p = MultiLayerParams::make(ratio(1 + static_cast<std::int64_t>(rng() % 3), 2), 1,
                                                          {ratio(static_cast<std::int64_t>(rng() % 5), 8)});
        const std::int64_t w = 2 * (10 + static_cast<std::int64_t>(rng() % 30));
        const std::int64_t h = 2 * (10 + static_cast<std::int64_t>(rng() % 30));
        const R eps(1, 40);
        const DiscreteTrajectory d = evolve_discrete({0, w, 0, h}, p, eps, R(1, 2));
        for (std::size_t k = 1; k < d.states.size(); ++k)
        {
            const RectangleState& a = d.states[k - 1];
            const RectangleState& b = d.states[k];
            CHECK(a.contains(b));
            if (!b.alive())
                break;
            const R yh = p.gamma / (eps * a.width());
            const R yv = p.gamma / (eps * a.height());
            if (is_singular_k(yh, p) || is_singular_k(yv, p))
                continue;
            CHECK(b.bottom - a.bottom == optimal_step_k(yh, p));
            CHECK(a.top - b.top == optimal_step_k(yh, p));
            CHECK(b.left - a.left == optimal_step_k(yv, p));
            CHECK(a.right - b.right == optimal_step_k(yv, p));
        }
    }
}

TEST_CASE("ties are logged and resolved by the policy")
{
    // gamma / (eps * 8) = 5/8 is a breakpoint with minimizers {0, 1}
    const R eps(1, 5);
    const DiscreteTrajectory lazy = evolve_discrete({0, 8, 0, 8}, quarter, eps, R(3, 5));
    CHECK(lazy.states.back() == lazy.states.front());
    REQUIRE(lazy.ties.size() == 12);
    CHECK(lazy.ties.front().minimizers == std::vector<std::int64_t>{0, 1});
    CHECK(lazy.ties.front().chosen == 0);
    CHECK(lazy.ties.front().y == R(5, 8));

    const DiscreteTrajectory eager = evolve_discrete({0, 8, 0, 8}, quarter, eps, eps, TiePolicy::larger_step);
    CHECK(eager.states.back() == RectangleState{1, 7, 1, 7});
    CHECK(eager.ties.front().chosen == 1);
}

TEST_CASE("ODE high-contrast square: first event")
{
    const MultiLayerParams high = MultiLayerParams::make(1, 1, {R(1)});
    const OdeTrajectory o = evolve_ode(1, 1, high, R(1, 5));
    REQUIRE(o.events.size() >= 2);
    // slope -4 until gamma / L reaches 7/4
    CHECK(o.events.front().time == R(3, 28));
    CHECK(o.events.front().breakpoint == R(7, 4));
    CHECK(o.lengths_at(R(3, 28)).first == R(4, 7));
    CHECK(o.lengths_at(R(1, 28)).first == R(6, 7));
}

TEST_CASE("ODE slope law and square symmetry")
{
    for (const R& d : {R(0), R(1, 10), R(1, 4), R(1, 2), R(1)})
    {
        const MultiLayerParams p = MultiLayerParams::make(1, 2, {d / 2});
        const OdeTrajectory sq = evolve_ode(R(3, 2), R(3, 2), p, 2);
        for (const OdeSample& s : sq.samples)
            CHECK(s.l1 == s.l2);

        const OdeTrajectory o = evolve_ode(R(7, 5), R(2), p, 2);
        for (std::size_t i = 1; i < o.samples.size(); ++i)
        {
            const OdeSample& a = o.samples[i - 1];
            const OdeSample& b = o.samples[i];
            if (b.t == a.t || b.l1 <= 0 || b.l2 <= 0)
                continue;
            const R mid2 = (a.l2 + b.l2) / 2;
            const R mid1 = (a.l1 + b.l1) / 2;
            if (mid1 < R(7, 5) / 1000 || mid2 < R(2) / 1000)
                continue;
            const Envelope e2 = velocity_envelope_k(p.gamma / mid2, p);
            const Envelope e1 = velocity_envelope_k(p.gamma / mid1, p);
            CHECK((b.l1 - a.l1) / (b.t - a.t) == -2 * R(e2.lower) / p.gamma);
            CHECK((b.l2 - a.l2) / (b.t - a.t) == -2 * R(e1.lower) / p.gamma);
            CHECK(b.l1 <= a.l1);
            CHECK(b.l2 <= a.l2);
        }

        const OdeTrajectory swapped = evolve_ode(R(2), R(7, 5), p, 2);
        REQUIRE(swapped.samples.size() == o.samples.size());
        for (std::size_t i = 0; i < o.samples.size(); ++i)
        {
            CHECK(swapped.samples[i].t == o.samples[i].t);
            CHECK(swapped.samples[i].l1 == o.samples[i].l2);
        }
    }
}

TEST_CASE("ODE extinction time with a constant velocity")
{
    for (std::int64_t f : {1, 2, 5})
        for (const R& gamma : {R(1, 2), R(1), R(3)})
            for (const R& l0 : {R(1), R(7, 3)})
            {
                const OdeTrajectory o = evolve_ode_with(ConstantLaw{f}, gamma, l0, l0, 100, BranchPolicy::lower);
                REQUIRE(extinction_time(o));
                CHECK(*extinction_time(o) == gamma * l0 / (2 * f));
            }
    const OdeTrajectory none = evolve_ode_with(ConstantLaw{0}, R(1), R(1), R(1), 10, BranchPolicy::lower);
    CHECK(none.fate == OdeFate::pinned);
}

TEST_CASE("ODE extinction time grows with the initial length")
{
    R previous = 0;
    for (const R& l0 : {R(1, 2), R(3, 4), R(1), R(5, 4), R(3, 2)})
    {
        const auto t = extinction_time(evolve_ode(l0, l0, quarter, 10));
        REQUIRE(t);
        CHECK(*t > previous);
        previous = *t;
    }
    CHECK_THROWS_AS(evolve_ode(0, 1, quarter, 1), std::domain_error);
}

TEST_CASE("velocity bracket: the discrete mean speed lies in the envelope")
{
    // long run at a fixed Y by re-centering: a side of fixed length moves
    // optimal_step per step, which is the velocity at nonsingular Y
    const MultiLayerParams p = MultiLayerParams::make(1, 1, {R(1, 10), R(3, 5)});
    for (const R& y : {R(1, 3), R(7, 10), R(1), R(17, 10), R(5, 2)})
    {
        const Envelope e = velocity_envelope_k(y, p);
        const std::int64_t n = step_with_policy(y, p, TiePolicy::smaller_step);
        CHECK(n >= e.lower);
        CHECK(n <= e.upper);
    }
}

TEST_CASE("Hausdorff distance of centered rectangles")
{
    CHECK(centered_hausdorff(2, 2, 2, 2) == 0);
    CHECK(centered_hausdorff(2, 2, 1, 1) == doctest::Approx(std::sqrt(0.5)));
    CHECK(centered_hausdorff(4, 1, 1, 2) == doctest::Approx(1.5));
    CHECK(centered_hausdorff(0, 0, 2, 4) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("flow comparison")
{
    const std::vector<R> eps{R(1, 10), R(1, 20), R(1, 40)};
    const FlowComparison pinned = compare_flows(2, 2, quarter, eps, 1);
    for (const FlowComparisonRow& row : pinned.rows)
    {
        CHECK(row.sup_distance <= 2 * to_double(row.epsilon));
        CHECK_FALSE(row.ode_extinction);
    }
    const std::vector<R> fine{R(1, 20), R(1, 40), R(1, 80)};
    const FlowComparison shrinking = compare_flows(1, 1, quarter, fine, 1);
    for (const FlowComparisonRow& row : shrinking.rows)
    {
        REQUIRE(row.discrete_extinction);
        REQUIRE(row.ode_extinction);
        R gap = *row.discrete_extinction - *row.ode_extinction;
        if (gap < 0)
            gap = -gap;
        CHECK(gap <= 2 * row.epsilon);
    }
    CHECK(shrinking.rows[2].sup_distance < shrinking.rows[0].sup_distance);
}
