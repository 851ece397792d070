#include <latticeflow/side_law.hpp>

#include <algorithm>
#include <map>
#include <sstream>

#include "orbit_detect.hpp"

namespace latticeflow
{
namespace
{
// Breakpoints live at t = 2 alpha Y in {o + C, o + 1 - C : o odd}.
Rational scaled(const Rational& y, const SideLawParams& p) { return 2 * p.alpha * y; }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

bool is_odd_integer(const Rational& q) { return is_integer(q) && mpz_odd_p(q.get_num_mpz_t()); }

bool is_even_integer(const Rational& q) { return is_integer(q) && mpz_even_p(q.get_num_mpz_t()); }

// Half the smallest positive gap between consecutive breakpoints (in t).
Rational half_gap(const Rational& c)
{
    Rational gap = 1;
    if (c > 0 && c < Rational(1, 2))
        gap = min(2 * c, 1 - 2 * c);
    return gap / 2;
}
} // namespace

SideLawParams SideLawParams::make(Rational alpha, Rational gamma, Rational delta)
{
    SideLawParams p{std::move(alpha), std::move(gamma), std::move(delta)};
    p.validate();
    return p;
}

void SideLawParams::validate() const
{
    if (alpha <= 0)
        throw std::invalid_argument("alpha: must be > 0");
    if (gamma <= 0)
        throw std::invalid_argument("gamma: must be > 0");
    if (delta < 0)
        throw std::invalid_argument("delta: must be >= 0");
}

Rational SideLawParams::capped_contrast() const { return min(contrast(), Rational(1, 2)); }

NonUniqueMinimizer::NonUniqueMinimizer(Rational y, std::vector<std::int64_t> minimizers)
    : std::domain_error([&] {
          std::ostringstream os;
          os << "non-unique minimizer at Y = " << to_string(y) << ":";
          for (auto n : minimizers)
              os << ' ' << n;
          return os.str();
      }()),
      y_(std::move(y)), minimizers_(std::move(minimizers))
{
}

Rational g_cost(std::int64_t n, const Rational& y, const SideLawParams& params)
{
    Rational g = -2 * params.alpha * n + Rational(n) * (n + 1) / (2 * y);
    if (n % 2 != 0)
        g += params.contrast() / y;
    return g;
}

std::int64_t optimal_step(const Rational& y, const SideLawParams& params)
{
    if (y <= 0)
        throw std::domain_error("optimal_step: Y must be > 0");
    // the parabola vertex is at X = 2 alpha Y - 1/2 and penalties only raise odd N,
    // so the minimizer lies within distance 1 of X
    const Rational vertex = scaled(y, params) - Rational(1, 2);
    const std::int64_t lo = std::max<std::int64_t>(0, floor_to_int(vertex) - 2);
    const std::int64_t hi = ceil_to_int(vertex) + 2;

    std::vector<std::int64_t> best;
    Rational best_value;
    for (std::int64_t n = lo; n <= hi; ++n)
    {
        const Rational g = g_cost(n, y, params);
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

std::vector<Rational> singular_set(const SideLawParams& params, const Rational& y_max)
{
    if (y_max <= 0)
        throw std::domain_error("singular_set: y_max must be > 0");
    const Rational c = params.capped_contrast();
    const Rational t_max = scaled(y_max, params);
    std::vector<Rational> points;
    for (std::int64_t odd = 1; odd + c <= t_max; odd += 2)
    {
        points.push_back(Rational(odd + c) / (2 * params.alpha));
        const Rational upper = odd + 1 - c;
        if (upper <= t_max)
            points.push_back(upper / (2 * params.alpha));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

bool is_singular(const Rational& y, const SideLawParams& params)
{
    const Rational t = scaled(y, params);
    const Rational c = params.capped_contrast();
    return is_odd_integer(t - c) || (is_even_integer(t + c) && t + c >= 2);
}

Rational contrast_threshold(const Rational& gamma)
{
    if (gamma <= 0)
        throw std::domain_error("contrast_threshold: gamma must be > 0");
    return 1 / (2 * gamma);
}

Rational pinning_threshold(const SideLawParams& params)
{
    const Rational& a = params.alpha;
    const Rational& g = params.gamma;
    return max(2 * a * g / (params.contrast() + 1), Rational(4, 3) * a * g);
}

Orbit orbit(const Rational& y, const SideLawParams& params, std::int64_t x0, std::int64_t max_steps)
{
    if (x0 != 0 && x0 != 1)
        throw std::invalid_argument("orbit: x0 must be 0 or 1");
    if (max_steps < 4)
        throw std::invalid_argument("orbit: max_steps must be >= 4");
    const std::int64_t step = optimal_step(y, params);
    return detail::detect_period(x0, 2, max_steps, [step](std::int64_t) { return step; });
}

std::int64_t effective_velocity(const Rational& y, const SideLawParams& params)
{
    const Orbit o = orbit(y, params);
    if (o.shift % o.period != 0)
        throw std::logic_error("effective_velocity: non-integer mean displacement");
    return o.shift / o.period;
}

std::int64_t velocity_closed_form(const Rational& y, const SideLawParams& params)
{
    if (y <= 0)
        throw std::domain_error("velocity_closed_form: Y must be > 0");
    const Rational t = scaled(y, params);
    const Rational c = params.capped_contrast();
    const std::int64_t m = floor_to_int(t);
    if (m % 2 == 0)
    {
        // [m, m+1) lies inside the even rung (m - C, m + 1 + C) unless C = 0 and t = m
        if (c == 0 && t == m)
            throw std::domain_error("velocity_closed_form: Y = " + to_string(y) + " is a breakpoint");
        return m;
    }
    const Rational lower = m + c;
    const Rational upper = m + 1 - c;
    if (t == lower || t == upper)
        throw std::domain_error("velocity_closed_form: Y = " + to_string(y) + " is a breakpoint");
    if (t < lower)
        return m - 1;
    if (t < upper)
        return m;
    return m + 1;
}

std::int64_t homogeneous_velocity(const Rational& y, const Rational& alpha) { return floor_to_int(2 * alpha * y); }

std::int64_t high_contrast_velocity(const Rational& y, const Rational& alpha)
{
    return 2 * floor_to_int(alpha * y + Rational(1, 4));
}

Envelope velocity_envelope(const Rational& y, const SideLawParams& params)
{
    if (y <= 0)
        throw std::domain_error("velocity_envelope: Y must be > 0");
    if (!is_singular(y, params))
    {
        const auto f = velocity_closed_form(y, params);
        return {f, f};
    }
    const Rational eta = half_gap(params.capped_contrast()) / (2 * params.alpha);
    const Rational below = y - eta;
    return {below > 0 ? velocity_closed_form(below, params) : 0, velocity_closed_form(y + eta, params)};
}

VelocityTable velocity_table(const SideLawParams& params, const Rational& y_max)
{
    VelocityTable table;
    table.alpha = params.alpha;
    table.gamma = params.gamma;
    table.deltas = {params.delta};
    table.y_max = y_max;
    table.breakpoints = singular_set(params, y_max);

    Rational lo = 0;
    auto push = [&](const Rational& hi) {
        if (hi <= lo)
            return;
        table.intervals.push_back({lo, hi, velocity_closed_form((lo + hi) / 2, params)});
        lo = hi;
    };
    for (const Rational& b : table.breakpoints)
    {
        table.envelopes.push_back(velocity_envelope(b, params));
        push(b);
    }
    push(y_max);
    return table;
}
} // namespace latticeflow
