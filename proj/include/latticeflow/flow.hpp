#pragma once

// Evolution of coordinate rectangles: the discrete flat flow at tau = gamma*eps
// with per-side decoupling, and the homogenized ODE system
//
//     dL1/dt = -(2/gamma) f(gamma / L2),   dL2/dt = -(2/gamma) f(gamma / L1)
//
// integrated event by event (the right-hand side is piecewise constant).

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include <latticeflow/lattice.hpp>
#include <latticeflow/multilayer.hpp>
#include <latticeflow/rational.hpp>
#include <latticeflow/side_law.hpp>

namespace latticeflow
{
enum class TiePolicy
{
    smaller_step,
    larger_step
};

enum class BranchPolicy
{
    lower,
    upper
};

enum class Side
{
    left,
    right,
    bottom,
    top
};

const char* to_string(TiePolicy p);
const char* to_string(BranchPolicy p);
const char* to_string(Side s);
TiePolicy parse_tie_policy(std::string_view s);
BranchPolicy parse_branch_policy(std::string_view s);

/// Rectangle of lattice cells {left <= x < right, bottom <= y < top}.  Its
/// boundary lines sit at half-integers, so a side at an odd coordinate crosses
/// beta bonds (K = 1, anchor 0) and an alpha-type rectangle has even coordinates.
struct RectangleState
{
    std::int64_t left = 0;
    std::int64_t right = 0;
    std::int64_t bottom = 0;
    std::int64_t top = 0;

    std::int64_t width() const { return right - left; }  ///< l1, in cells
    std::int64_t height() const { return top - bottom; } ///< l2, in cells
    bool alive() const { return width() > 0 && height() > 0; }
    bool contains(const RectangleState& inner) const;
    LatticeSet cells() const { return LatticeSet::rectangle(left, right, bottom, top); }

    friend bool operator==(const RectangleState&, const RectangleState&) = default;
};

struct TieEvent
{
    std::int64_t step = 0;
    Side side = Side::left;
    Rational y;
    std::vector<std::int64_t> minimizers;
    std::int64_t chosen = 0;
};

struct DiscreteTrajectory
{
    Rational epsilon;
    Rational gamma;
    std::vector<RectangleState> states; ///< states[k] is E^k, shown on [k tau, (k+1) tau)
    std::optional<std::int64_t> extinction_step;
    std::vector<TieEvent> ties;

    Rational tau() const { return gamma * epsilon; }
    Rational time(std::int64_t k) const { return tau() * k; }
    Rational length1(std::int64_t k) const { return epsilon * states.at(static_cast<std::size_t>(k)).width(); }
    Rational length2(std::int64_t k) const { return epsilon * states.at(static_cast<std::size_t>(k)).height(); }
};

/// Optimal step with an explicit tie policy; appends a TieEvent on singular Y.
std::int64_t step_with_policy(const Rational& y, const MultiLayerParams& params, TiePolicy policy,
                              std::vector<TieEvent>* ties = nullptr, std::int64_t step_index = 0,
                              Side side = Side::left);

/// Runs floor(horizon / tau) steps.  Each side moves inward by
/// optimal_step(gamma / L) lattice units where L is its own current length; a
/// collision collapses the rectangle and ends the run (extinction).
DiscreteTrajectory evolve_discrete(const RectangleState& initial, const MultiLayerParams& params,
                                   const Rational& epsilon, const Rational& horizon,
                                   TiePolicy tie_policy = TiePolicy::smaller_step);

/// A velocity function given by its one-sided limits and breakpoints.
template <class Law>
concept VelocityLaw = requires(const Law& law, const Rational& y) {
    { law.envelope(y) } -> std::same_as<Envelope>;
    { law.next_breakpoint(y) } -> std::same_as<std::optional<Rational>>; // smallest breakpoint > y
};

/// The layered law of multilayer.hpp (K = 1 included).
struct LayeredLaw
{
    MultiLayerParams params;

    Envelope envelope(const Rational& y) const { return velocity_envelope_k(y, params); }
    std::optional<Rational> next_breakpoint(const Rational& y) const;
};

struct OdeSample
{
    Rational t;
    Rational l1;
    Rational l2;
};

struct OdeEvent
{
    Rational time;
    int length = 1;          ///< which length sits on a breakpoint of gamma / L (1 or 2)
    Rational breakpoint;     ///< the breakpoint Y = gamma / L
    Envelope envelope;       ///< (f-, f+) there
    std::int64_t chosen = 0; ///< value used for the other length's slope
    bool forced = false;     ///< the policy branch was overridden because L keeps decreasing
};

enum class OdeFate
{
    extinct,
    pinned
};

struct OdeOptions
{
    /// Below this length a side ignores its own further breakpoints and runs
    /// straight to zero; 0 picks min(L1, L2) / 1000.
    Rational length_floor = 0;
    std::size_t max_events = 1'000'000;
};

struct OdeTrajectory
{
    Rational gamma;
    Rational horizon;
    std::vector<OdeSample> samples; ///< segment endpoints up to the horizon; linear in between
    std::vector<OdeEvent> events;   ///< events up to the horizon
    OdeFate fate = OdeFate::pinned;
    std::optional<Rational> extinction; ///< may lie beyond the horizon
    bool extinction_extrapolated = false;

    /// Lengths at time t (held constant after the last sample).
    std::pair<Rational, Rational> lengths_at(const Rational& t) const;
};

namespace detail
{
std::int64_t pick_branch(const Envelope& e, BranchPolicy policy);
}

template <VelocityLaw Law>
OdeTrajectory evolve_ode_with(const Law& law, const Rational& gamma, const Rational& l1_0, const Rational& l2_0,
                              const Rational& horizon, BranchPolicy policy, const OdeOptions& options = {});

/// Throws std::domain_error on nonpositive initial lengths.
OdeTrajectory evolve_ode(const Rational& l1_0, const Rational& l2_0, const MultiLayerParams& params,
                         const Rational& horizon, BranchPolicy policy = BranchPolicy::lower,
                         const OdeOptions& options = {});

/// nullopt means infinite (pinned).
std::optional<Rational> extinction_time(const OdeTrajectory& trajectory);

/// Hausdorff distance between two rectangles with a common center.
double centered_hausdorff(const Rational& w1, const Rational& h1, const Rational& w2, const Rational& h2);

struct FlowComparisonRow
{
    Rational epsilon;
    std::int64_t steps = 0;
    double sup_distance = 0;
    std::optional<Rational> discrete_extinction;
    std::optional<Rational> ode_extinction;
};

struct FlowComparison
{
    std::vector<FlowComparisonRow> rows;
    double fitted_rate = 0;     ///< least-squares slope of log d against log eps
    double fitted_constant = 0; ///< max d(eps) / eps
};

/// Sup over time of the Hausdorff distance between the discrete flow at each eps
/// and the ODE flow, both started from an l1 x l2 rectangle.
FlowComparison compare_flows(const Rational& l1, const Rational& l2, const MultiLayerParams& params,
                             std::span<const Rational> epsilons, const Rational& horizon,
                             TiePolicy tie_policy = TiePolicy::smaller_step,
                             BranchPolicy branch_policy = BranchPolicy::lower);

// ---------------------------------------------------------------------------

template <VelocityLaw Law>
OdeTrajectory evolve_ode_with(const Law& law, const Rational& gamma, const Rational& l1_0, const Rational& l2_0,
                              const Rational& horizon, BranchPolicy policy, const OdeOptions& options)
{
    if (l1_0 <= 0 || l2_0 <= 0)
        throw std::domain_error("evolve_ode: initial lengths must be > 0");
    if (horizon < 0)
        throw std::domain_error("evolve_ode: horizon must be >= 0");

    OdeTrajectory traj;
    traj.gamma = gamma;
    traj.horizon = horizon;
    const Rational floor_length = options.length_floor > 0 ? options.length_floor : min(l1_0, l2_0) / 1000;

    Rational t = 0;
    Rational len[2] = {l1_0, l2_0};
    bool recording = true;
    traj.samples.push_back({t, len[0], len[1]});

    for (std::size_t iteration = 0;; ++iteration)
    {
        if (iteration > options.max_events)
            throw std::runtime_error("evolve_ode: event budget exhausted");
        if (len[0] <= 0 || len[1] <= 0)
        {
            traj.fate = OdeFate::extinct;
            traj.extinction = t;
            break;
        }

        // slope[i] is the decrease rate of len[i]; it is driven by the other length
        Envelope env[2] = {law.envelope(gamma / len[0]), law.envelope(gamma / len[1])};
        std::int64_t drive[2] = {detail::pick_branch(env[1], policy), detail::pick_branch(env[0], policy)};
        bool forced[2] = {false, false};
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < 2; ++i)
            {
                const int other = 1 - i;
                // a length that keeps decreasing leaves its breakpoint at once
                if (env[other].lower != env[other].upper && drive[other] > 0 && drive[i] != env[other].upper)
                {
                    drive[i] = env[other].upper;
                    forced[i] = true;
                }
            }
        if (recording)
            for (int i = 0; i < 2; ++i)
            {
                const int other = 1 - i;
                if (env[other].lower != env[other].upper)
                    traj.events.push_back({t, other + 1, gamma / len[other], env[other], drive[i], forced[i]});
            }

        const Rational slope[2] = {2 * Rational(drive[0]) / gamma, 2 * Rational(drive[1]) / gamma};
        if (slope[0] == 0 && slope[1] == 0)
        {
            traj.fate = OdeFate::pinned;
            if (recording && horizon > t)
                traj.samples.push_back({horizon, len[0], len[1]});
            break;
        }

        std::optional<Rational> dt;
        Rational target[2];
        bool to_zero[2] = {false, false};
        for (int i = 0; i < 2; ++i)
        {
            if (slope[i] == 0)
                continue;
            const auto next = law.next_breakpoint(gamma / len[i]);
            Rational stop = next ? gamma / *next : Rational(0);
            if (stop < floor_length)
            {
                stop = 0;
                to_zero[i] = true;
            }
            target[i] = stop;
            const Rational dti = (len[i] - stop) / slope[i];
            if (!dt || dti < *dt)
                dt = dti;
        }

        const Rational t_next = t + *dt;
        if (recording && t_next > horizon)
        {
            const Rational h = horizon - t;
            traj.samples.push_back({horizon, len[0] - slope[0] * h, len[1] - slope[1] * h});
            recording = false;
        }
        for (int i = 0; i < 2; ++i)
        {
            if (slope[i] == 0)
                continue;
            len[i] -= slope[i] * *dt;
            if (len[i] == target[i] && to_zero[i])
                traj.extinction_extrapolated = true;
        }
        t = t_next;
        if (recording)
            traj.samples.push_back({t, len[0], len[1]});
    }
    return traj;
}
} // namespace latticeflow
