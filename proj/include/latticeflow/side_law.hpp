#pragma once

// One-dimensional law of motion of a single side (one contrast parameter).
//
// A side of length L moving inward by N lattice steps in one time step
// tau = gamma*eps changes the energy by eps * g(N) with Y = gamma / L and
//
//     g(N) = -2 alpha N + N(N+1)/(2Y)                 N even
//     g(N) = -2 alpha N + N(N+1)/(2Y) + delta gamma/Y  N odd
//
// The odd-N penalty is applied independently of the current position parity,
// which is exact for a side that starts on alpha bonds.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <latticeflow/rational.hpp>

namespace latticeflow
{
struct SideLawParams
{
    Rational alpha;
    Rational gamma;
    Rational delta;

    /// Throws std::invalid_argument naming the offending field.
    static SideLawParams make(Rational alpha, Rational gamma, Rational delta);
    void validate() const;

    Rational contrast() const { return delta * gamma; }
    /// C = min{delta*gamma, 1/2}
    Rational capped_contrast() const;
};

/// The minimum problem has more than one solution.  Carries every minimizer.
class NonUniqueMinimizer : public std::domain_error
{
public:
    NonUniqueMinimizer(Rational y, std::vector<std::int64_t> minimizers);

    const Rational& y() const { return y_; }
    const std::vector<std::int64_t>& minimizers() const { return minimizers_; }

private:
    Rational y_;
    std::vector<std::int64_t> minimizers_;
};

Rational g_cost(std::int64_t n, const Rational& y, const SideLawParams& params);

/// Unique argmin over N >= 0 of g.  Throws NonUniqueMinimizer when Y is singular.
std::int64_t optimal_step(const Rational& y, const SideLawParams& params);

/// S_delta intersected with (0, y_max], sorted and deduplicated.
std::vector<Rational> singular_set(const SideLawParams& params, const Rational& y_max);
bool is_singular(const Rational& y, const SideLawParams& params);

/// 1/(2 gamma)
Rational contrast_threshold(const Rational& gamma);

/// max{ 2 alpha gamma / (delta gamma + 1), 4 alpha gamma / 3 }
Rational pinning_threshold(const SideLawParams& params);

struct Orbit
{
    std::vector<std::int64_t> positions; ///< x_0 .. x_{k+M}, ending one period after the transient
    std::int64_t transient = 0;          ///< first index from which the sequence is periodic
    std::int64_t period = 0;             ///< M
    std::int64_t shift = 0;              ///< x_{k+M} - x_k, i.e. 2n

    Rational velocity() const { return ratio(shift, period); }
};

/// Iterates x_{k+1} = x_k + optimal_step(Y) from x0 in {0, 1} and detects
/// x_{k+M} = x_k + 2n.  Throws NonUniqueMinimizer for singular Y and
/// std::logic_error when no period shows up within max_steps.
Orbit orbit(const Rational& y, const SideLawParams& params, std::int64_t x0 = 0, std::int64_t max_steps = 8);

/// 2n/M from the orbit.
std::int64_t effective_velocity(const Rational& y, const SideLawParams& params);

/// Piecewise formula with C = min{delta gamma, 1/2}:
///   2k   on ((2k - C)/2alpha, (2k + 1 + C)/2alpha)
///   2k+1 on ((2k + 1 + C)/2alpha, (2k + 2 - C)/2alpha)
/// Throws std::domain_error on a breakpoint.
std::int64_t velocity_closed_form(const Rational& y, const SideLawParams& params);

/// floor(2 alpha Y): no inclusions.
std::int64_t homogeneous_velocity(const Rational& y, const Rational& alpha);
/// 2 floor(alpha Y + 1/4): high-contrast inclusions.
std::int64_t high_contrast_velocity(const Rational& y, const Rational& alpha);

struct Envelope
{
    std::int64_t lower = 0;
    std::int64_t upper = 0;
};

/// One-sided limits of the velocity at Y.
Envelope velocity_envelope(const Rational& y, const SideLawParams& params);

struct VelocityInterval
{
    Rational lo;
    Rational hi;
    std::int64_t value = 0;
};

struct VelocityTable
{
    Rational alpha;
    Rational gamma;
    std::vector<Rational> deltas;
    Rational y_max;
    std::vector<Rational> breakpoints;   ///< singular points in (0, y_max]
    std::vector<Envelope> envelopes;     ///< (f-, f+) at each breakpoint
    std::vector<VelocityInterval> intervals;

    std::size_t layers() const { return deltas.size(); }
};

VelocityTable velocity_table(const SideLawParams& params, const Rational& y_max);
} // namespace latticeflow
