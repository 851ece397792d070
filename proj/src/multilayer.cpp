#include <latticeflow/multilayer.hpp>

#include <algorithm>
#include <string>

#include "orbit_detect.hpp"

namespace latticeflow
{
namespace
{
bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Odd integer o of the given layer, i.e. o = 2r - 1 (mod 2K)?
bool is_odd_of_layer(const Rational& q, std::int64_t r, const MultiLayerParams& p)
{
    if (!is_integer(q) || q < 1)
        return false;
    const mpz_class residue = q.get_num() % p.period();
    return residue == 2 * r - 1;
}

Rational half_gap(const MultiLayerParams& p)
{
    Rational gap = 1;
    for (std::int64_t r = 1; r <= p.layers(); ++r)
    {
        const Rational c = p.capped_contrast(r);
        if (c > 0 && c < Rational(1, 2))
            gap = min(gap, min(2 * c, 1 - 2 * c));
    }
    return gap / 2;
}
} // namespace

MultiLayerParams MultiLayerParams::make(Rational alpha, Rational gamma, std::vector<Rational> deltas)
{
    MultiLayerParams p{std::move(alpha), std::move(gamma), std::move(deltas)};
    p.validate();
    return p;
}

void MultiLayerParams::validate() const
{
    if (alpha <= 0)
        throw std::invalid_argument("alpha: must be > 0");
    if (gamma <= 0)
        throw std::invalid_argument("gamma: must be > 0");
    if (deltas.empty())
        throw std::invalid_argument("deltas: at least one contrast parameter is required");
    for (std::size_t r = 0; r < deltas.size(); ++r)
        if (deltas[r] < 0)
            throw std::invalid_argument("deltas[" + std::to_string(r) + "]: must be >= 0");
}

std::int64_t MultiLayerParams::layer_of_step(std::int64_t n) const
{
    const std::int64_t residue = mod_floor(n, period());
    return residue % 2 == 1 ? (residue + 1) / 2 : 0;
}

Rational MultiLayerParams::capped_contrast(std::int64_t r) const
{
    return min(deltas.at(static_cast<std::size_t>(r - 1)) * gamma, Rational(1, 2));
}

bool MultiLayerParams::all_high_contrast() const
{
    return std::all_of(deltas.begin(), deltas.end(), [&](const Rational& d) { return 2 * d * gamma >= 1; });
}

bool MultiLayerParams::mixed_regime() const
{
    const bool any_high = std::any_of(deltas.begin(), deltas.end(), [&](const Rational& d) { return 2 * d * gamma >= 1; });
    return any_high && !all_high_contrast();
}

Rational g_cost_k(std::int64_t n, const Rational& y, const MultiLayerParams& params)
{
    Rational g = -2 * params.alpha * n + Rational(n) * (n + 1) / (2 * y);
    if (const auto r = params.layer_of_step(n); r != 0)
        g += params.deltas[static_cast<std::size_t>(r - 1)] * params.gamma / y;
    return g;
}

std::int64_t optimal_step_k(const Rational& y, const MultiLayerParams& params)
{
    if (y <= 0)
        throw std::domain_error("optimal_step_k: Y must be > 0");
    const Rational vertex = 2 * params.alpha * y - Rational(1, 2);
    const std::int64_t lo = std::max<std::int64_t>(0, floor_to_int(vertex) - 2);
    const std::int64_t hi = ceil_to_int(vertex) + 2;

    std::vector<std::int64_t> best;
    Rational best_value;
    for (std::int64_t n = lo; n <= hi; ++n)
    {
        const Rational g = g_cost_k(n, y, params);
        if (best.empty() || g < best_value)
        {
            best.assign(1, n);
            best_value = g;
        }
        else if (g == best_value)
            best.push_back(n);
    }
    if (best.size() != 1)
        throw NonUniqueMinimizer(y, best);
    return best.front();
}

std::vector<Rational> singular_set_k(const MultiLayerParams& params, const Rational& y_max)
{
    if (y_max <= 0)
        throw std::domain_error("singular_set_k: y_max must be > 0");
    const Rational t_max = 2 * params.alpha * y_max;
    std::vector<Rational> points;
    for (std::int64_t odd = 1; odd <= t_max; odd += 2)
    {
        const Rational c = params.capped_contrast(params.layer_of_step(odd));
        for (const Rational& t : {Rational(odd + c), Rational(odd + 1 - c)})
            if (t <= t_max)
                points.push_back(t / (2 * params.alpha));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

bool is_singular_k(const Rational& y, const MultiLayerParams& params)
{
    const Rational t = 2 * params.alpha * y;
    for (std::int64_t r = 1; r <= params.layers(); ++r)
    {
        const Rational c = params.capped_contrast(r);
        if (is_odd_of_layer(t - c, r, params) || is_odd_of_layer(t + c - 1, r, params))
            return true;
    }
    return false;
}

Rational pinning_threshold_k(const MultiLayerParams& params)
{
    const Rational delta_min = *std::min_element(params.deltas.begin(), params.deltas.end());
    const Rational& a = params.alpha;
    const Rational& g = params.gamma;
    return max(2 * a * g / (delta_min * g + 1), Rational(4, 3) * a * g);
}

Orbit orbit_k(const Rational& y, const MultiLayerParams& params, std::int64_t x0, std::int64_t max_steps)
{
    if (x0 < 0 || x0 >= params.period())
        throw std::invalid_argument("orbit_k: x0 must lie in {0, ..., 2K-1}");
    if (max_steps < 0)
        max_steps = 4 * params.layers() + 4;
    const std::int64_t step = optimal_step_k(y, params);
    return detail::detect_period(x0, params.period(), max_steps, [step](std::int64_t) { return step; });
}

std::int64_t effective_velocity_k(const Rational& y, const MultiLayerParams& params)
{
    const Orbit o = orbit_k(y, params);
    if (o.shift % o.period != 0)
        throw std::logic_error("effective_velocity_k: non-integer mean displacement");
    return o.shift / o.period;
}

std::int64_t velocity_closed_form_k(const Rational& y, const MultiLayerParams& params)
{
    if (y <= 0)
        throw std::domain_error("velocity_closed_form_k: Y must be > 0");
    const Rational t = 2 * params.alpha * y;
    const std::int64_t m = floor_to_int(t);
    auto breakpoint = [&] {
        return std::domain_error("velocity_closed_form_k: Y = " + to_string(y) + " is a breakpoint");
    };
    if (m % 2 == 0)
    {
        // even rung (m - C_{r(m-1)}, m + 1 + C_{r(m+1)}) contains [m, m+1) except t = m when C = 0
        if (m > 0 && t == m && params.capped_contrast(params.layer_of_step(m - 1)) == 0)
            throw breakpoint();
        return m;
    }
    const Rational c = params.capped_contrast(params.layer_of_step(m));
    const Rational lower = m + c;
    const Rational upper = m + 1 - c;
    if (t == lower || t == upper)
        throw breakpoint();
    if (t < lower)
        return m - 1;
    if (t < upper)
        return m;
    return m + 1;
}

Envelope velocity_envelope_k(const Rational& y, const MultiLayerParams& params)
{
    if (y <= 0)
        throw std::domain_error("velocity_envelope_k: Y must be > 0");
    if (!is_singular_k(y, params))
    {
        const auto f = velocity_closed_form_k(y, params);
        return {f, f};
    }
    const Rational eta = half_gap(params) / (2 * params.alpha);
    const Rational below = y - eta;
    return {below > 0 ? velocity_closed_form_k(below, params) : 0, velocity_closed_form_k(y + eta, params)};
}

VelocityTable velocity_table_k(const MultiLayerParams& params, const Rational& y_max)
{
    VelocityTable table;
    table.alpha = params.alpha;
    table.gamma = params.gamma;
    table.deltas = params.deltas;
    table.y_max = y_max;
    table.breakpoints = singular_set_k(params, y_max);

    Rational lo = 0;
    auto push = [&](const Rational& hi) {
        if (hi <= lo)
            return;
        table.intervals.push_back({lo, hi, velocity_closed_form_k((lo + hi) / 2, params)});
        lo = hi;
    };
    for (const Rational& b : table.breakpoints)
    {
        table.envelopes.push_back(velocity_envelope_k(b, params));
        push(b);
    }
    push(y_max);
    return table;
}
} // namespace latticeflow
