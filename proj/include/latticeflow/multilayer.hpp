#pragma once

// Side law with K contrast parameters delta_1..delta_K arranged in periodic
// layers of period 2K.  A step of N lattice units pays delta_r gamma / Y when
// N = 2r - 1 (mod 2K) and nothing extra when N is even.  With C_r =
// min{delta_r gamma, 1/2} the velocity is the ladder
//
//     odd  value v = 2Kk + 2r - 1  on ((v + C_r)/2alpha, (v + 1 - C_r)/2alpha)
//     even value v                 fills the gaps in between
//
// which reduces to the single-parameter law for K = 1.

#include <cstdint>
#include <vector>

#include <latticeflow/rational.hpp>
#include <latticeflow/side_law.hpp>

namespace latticeflow
{
struct MultiLayerParams
{
    Rational alpha;
    Rational gamma;
    std::vector<Rational> deltas;

    /// Throws std::invalid_argument naming the offending field.
    static MultiLayerParams make(Rational alpha, Rational gamma, std::vector<Rational> deltas);
    static MultiLayerParams from(const SideLawParams& p) { return {p.alpha, p.gamma, {p.delta}}; }
    void validate() const;

    std::int64_t layers() const { return static_cast<std::int64_t>(deltas.size()); }
    std::int64_t period() const { return 2 * layers(); }

    /// Layer r in 1..K charged for a step of N, or 0 when N is even.
    std::int64_t layer_of_step(std::int64_t n) const;
    /// C_r = min{delta_r gamma, 1/2} for r in 1..K.
    Rational capped_contrast(std::int64_t r) const;
    /// True when every delta_r >= 1/(2 gamma) (high-contrast regime).
    bool all_high_contrast() const;
    /// True when some but not all delta_r are above 1/(2 gamma).
    bool mixed_regime() const;
};

Rational g_cost_k(std::int64_t n, const Rational& y, const MultiLayerParams& params);

/// Throws NonUniqueMinimizer on the singular set.
std::int64_t optimal_step_k(const Rational& y, const MultiLayerParams& params);

std::vector<Rational> singular_set_k(const MultiLayerParams& params, const Rational& y_max);
bool is_singular_k(const Rational& y, const MultiLayerParams& params);

/// max{ 2 alpha gamma / (min_r delta_r gamma + 1), 4 alpha gamma / 3 }
Rational pinning_threshold_k(const MultiLayerParams& params);

/// x0 in {0, .., 2K-1}; max_steps defaults to 4K + 4.
Orbit orbit_k(const Rational& y, const MultiLayerParams& params, std::int64_t x0 = 0, std::int64_t max_steps = -1);

std::int64_t effective_velocity_k(const Rational& y, const MultiLayerParams& params);

/// Ladder formula.  Throws std::domain_error on a breakpoint.
std::int64_t velocity_closed_form_k(const Rational& y, const MultiLayerParams& params);

Envelope velocity_envelope_k(const Rational& y, const MultiLayerParams& params);

VelocityTable velocity_table_k(const MultiLayerParams& params, const Rational& y_max);
} // namespace latticeflow
