#include <latticeflow/flow.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace latticeflow
{
namespace
{
std::int64_t floor_half(std::int64_t a, std::int64_t b)
{
    const std::int64_t s = a + b;
    return s >= 0 ? s / 2 : -((-s + 1) / 2);
}

Rational positive_part(const Rational& q) { return q > 0 ? q : Rational(0); }
} // namespace

const char* to_string(TiePolicy p) { return p == TiePolicy::smaller_step ? "smaller" : "larger"; }

const char* to_string(BranchPolicy p) { return p == BranchPolicy::lower ? "lower" : "upper"; }

const char* to_string(Side s)
{
    switch (s)
    {
    case Side::left:
        return "left";
    case Side::right:
        return "right";
    case Side::bottom:
        return "bottom";
    case Side::top:
        return "top";
    }
    return "?";
}

TiePolicy parse_tie_policy(std::string_view s)
{
    if (s == "smaller" || s == "smaller-step" || s == "smaller_step")
        return TiePolicy::smaller_step;
    if (s == "larger" || s == "larger-step" || s == "larger_step")
        return TiePolicy::larger_step;
    throw std::invalid_argument("tie: expected smaller or larger, got '" + std::string(s) + "'");
}

BranchPolicy parse_branch_policy(std::string_view s)
{
    if (s == "lower")
        return BranchPolicy::lower;
    if (s == "upper")
        return BranchPolicy::upper;
    throw std::invalid_argument("branch: expected lower or upper, got '" + std::string(s) + "'");
}

bool RectangleState::contains(const RectangleState& inner) const
{
    if (!inner.alive())
        return inner.left >= left && inner.right <= right && inner.bottom >= bottom && inner.top <= top;
    return left <= inner.left && inner.right <= right && bottom <= inner.bottom && inner.top <= top;
}

std::int64_t step_with_policy(const Rational& y, const MultiLayerParams& params, TiePolicy policy,
                              std::vector<TieEvent>* ties, std::int64_t step_index, Side side)
{
    try
    {
        return optimal_step_k(y, params);
    }
    catch (const NonUniqueMinimizer& e)
    {
        const auto& m = e.minimizers();
        const std::int64_t chosen =
            policy == TiePolicy::smaller_step ? *std::min_element(m.begin(), m.end()) : *std::max_element(m.begin(), m.end());
        if (ties)
            ties->push_back({step_index, side, y, m, chosen});
        return chosen;
    }
}

DiscreteTrajectory evolve_discrete(const RectangleState& initial, const MultiLayerParams& params,
                                   const Rational& epsilon, const Rational& horizon, TiePolicy tie_policy)
{
    params.validate();
    if (!initial.alive())
        throw std::domain_error("evolve_discrete: initial rectangle is degenerate");
    if (epsilon <= 0)
        throw std::domain_error("evolve_discrete: epsilon must be > 0");
    if (horizon <= 0)
        throw std::domain_error("evolve_discrete: horizon must be > 0");

    DiscreteTrajectory traj;
    traj.epsilon = epsilon;
    traj.gamma = params.gamma;
    traj.states.push_back(initial);
    const std::int64_t steps = floor_to_int(horizon / traj.tau());

    for (std::int64_t k = 1; k <= steps; ++k)
    {
        const RectangleState& cur = traj.states.back();
        // horizontal sides have length l1 and move vertically; vertical sides use l2
        const Rational y_horizontal = params.gamma / (epsilon * cur.width());
        const Rational y_vertical = params.gamma / (epsilon * cur.height());
        const std::int64_t n_bottom = step_with_policy(y_horizontal, params, tie_policy, &traj.ties, k, Side::bottom);
        const std::int64_t n_top = step_with_policy(y_horizontal, params, tie_policy, &traj.ties, k, Side::top);
        const std::int64_t n_left = step_with_policy(y_vertical, params, tie_policy, &traj.ties, k, Side::left);
        const std::int64_t n_right = step_with_policy(y_vertical, params, tie_policy, &traj.ties, k, Side::right);

        RectangleState next{cur.left + n_left, cur.right - n_right, cur.bottom + n_bottom, cur.top - n_top};
        bool collapsed = false;
        if (next.width() <= 0)
        {
            next.left = next.right = floor_half(cur.left, cur.right);
            collapsed = true;
        }
        if (next.height() <= 0)
        {
            next.bottom = next.top = floor_half(cur.bottom, cur.top);
            collapsed = true;
        }
        traj.states.push_back(next);
        if (collapsed)
        {
            traj.extinction_step = k;
            break;
        }
    }
    return traj;
}

std::optional<Rational> LayeredLaw::next_breakpoint(const Rational& y) const
{
    const Rational t = 2 * params.alpha * y;
    const std::int64_t m = floor_to_int(t);
    std::optional<Rational> best;
    // breakpoints sit in [o, o+1] for odd o, so the two nearest odd integers suffice
    for (std::int64_t o = (m % 2 == 0 ? m - 1 : m); o <= m + 3; o += 2)
    {
        if (o < 1)
            continue;
        const Rational c = params.capped_contrast(params.layer_of_step(o));
        for (const Rational& b : {Rational(o + c), Rational(o + 1 - c)})
            if (b > t && (!best || b < *best))
                best = b;
    }
    if (!best)
        return std::nullopt;
    return *best / (2 * params.alpha);
}

namespace detail
{
std::int64_t pick_branch(const Envelope& e, BranchPolicy policy)
{
    return policy == BranchPolicy::lower ? e.lower : e.upper;
}
} // namespace detail

std::pair<Rational, Rational> OdeTrajectory::lengths_at(const Rational& t) const
{
    if (samples.empty())
        throw std::logic_error("lengths_at: empty trajectory");
    if (t <= samples.front().t)
        return {samples.front().l1, samples.front().l2};
    if (t >= samples.back().t)
        return {samples.back().l1, samples.back().l2};
    const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                     [](const Rational& value, const OdeSample& s) { return value < s.t; });
    const OdeSample& b = *it;
    const OdeSample& a = *(it - 1);
    const Rational u = (t - a.t) / (b.t - a.t);
    return {a.l1 + u * (b.l1 - a.l1), a.l2 + u * (b.l2 - a.l2)};
}

OdeTrajectory evolve_ode(const Rational& l1_0, const Rational& l2_0, const MultiLayerParams& params,
                         const Rational& horizon, BranchPolicy policy, const OdeOptions& options)
{
    params.validate();
    return evolve_ode_with(LayeredLaw{params}, params.gamma, l1_0, l2_0, horizon, policy, options);
}

std::optional<Rational> extinction_time(const OdeTrajectory& trajectory)
{
    if (trajectory.fate == OdeFate::pinned)
        return std::nullopt;
    return trajectory.extinction;
}

double centered_hausdorff(const Rational& w1, const Rational& h1, const Rational& w2, const Rational& h2)
{
    // the farthest point of one rectangle from the other is a corner
    const Rational dw = (w1 - w2) / 2;
    const Rational dh = (h1 - h2) / 2;
    const Rational a = positive_part(dw) * positive_part(dw) + positive_part(dh) * positive_part(dh);
    const Rational b = positive_part(-dw) * positive_part(-dw) + positive_part(-dh) * positive_part(-dh);
    return std::sqrt(to_double(max(a, b)));
}

FlowComparison compare_flows(const Rational& l1, const Rational& l2, const MultiLayerParams& params,
                             std::span<const Rational> epsilons, const Rational& horizon, TiePolicy tie_policy,
                             BranchPolicy branch_policy)
{
    if (epsilons.empty())
        throw std::invalid_argument("eps: at least one value is required");
    FlowComparison out;
    const OdeTrajectory ode = evolve_ode(l1, l2, params, horizon, branch_policy);

    for (const Rational& eps : epsilons)
    {
        if (eps <= 0)
            throw std::invalid_argument("eps: values must be > 0");
        const std::int64_t c1 = floor_to_int(l1 / eps + Rational(1, 2));
        const std::int64_t c2 = floor_to_int(l2 / eps + Rational(1, 2));
        if (c1 < 1 || c2 < 1)
            throw std::domain_error("compare_flows: epsilon " + to_string(eps) + " too coarse for the rectangle");
        const DiscreteTrajectory disc = evolve_discrete({0, c1, 0, c2}, params, eps, horizon, tie_policy);

        FlowComparisonRow row;
        row.epsilon = eps;
        row.steps = static_cast<std::int64_t>(disc.states.size()) - 1;
        if (disc.extinction_step)
            row.discrete_extinction = disc.time(*disc.extinction_step);
        row.ode_extinction = extinction_time(ode);

        // both sides are piecewise linear in t on each [k tau, (k+1) tau), so the
        // distance is convex there and its sup is attained at a sample endpoint
        const Rational tau = disc.tau();
        std::vector<Rational> times;
        for (std::size_t k = 0; k < disc.states.size(); ++k)
            times.push_back(tau * static_cast<long>(k));
        for (const OdeSample& s : ode.samples)
            times.push_back(s.t);
        times.push_back(horizon);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());

        auto distance = [&](std::size_t k, const Rational& t) {
            const RectangleState& r = disc.states[std::min(k, disc.states.size() - 1)];
            const auto [a, b] = ode.lengths_at(t);
            return centered_hausdorff(eps * r.width(), eps * r.height(), a, b);
        };
        for (const Rational& t : times)
        {
            if (t > horizon)
                break;
            const auto k = static_cast<std::size_t>(floor_to_int(t / tau));
            row.sup_distance = std::max(row.sup_distance, distance(k, t));
            // left limit at a step boundary still shows the previous iterate
            if (k > 0 && t == tau * static_cast<long>(k))
                row.sup_distance = std::max(row.sup_distance, distance(k - 1, t));
        }
        out.rows.push_back(row);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& row : out.rows)
    {
        out.fitted_constant = std::max(out.fitted_constant, row.sup_distance / to_double(row.epsilon));
        if (row.sup_distance <= 0)
            continue;
        const double x = std::log(to_double(row.epsilon));
        const double y = std::log(row.sup_distance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2 && n * sxx - sx * sx != 0)
        out.fitted_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}
} // namespace latticeflow
