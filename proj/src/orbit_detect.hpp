#pragma once

#include <map>
#include <stdexcept>

#include <latticeflow/rational.hpp>
#include <latticeflow/side_law.hpp>

namespace latticeflow::detail
{
/// Runs x_{k+1} = x_k + step(x_k) and stops at the first repeated residue of
/// x mod `modulus`.  The step may depend on the position.
template <class StepFn>
Orbit detect_period(std::int64_t x0, std::int64_t modulus, std::int64_t max_steps, StepFn&& step)
{
    Orbit o;
    std::map<std::int64_t, std::int64_t> first_seen;
    std::int64_t x = x0;
    for (std::int64_t k = 0; k <= max_steps; ++k)
    {
        o.positions.push_back(x);
        const std::int64_t residue = mod_floor(x, modulus);
        if (const auto it = first_seen.find(residue); it != first_seen.end())
        {
            o.transient = it->second;
            o.period = k - it->second;
            o.shift = x - o.positions[static_cast<std::size_t>(it->second)];
            return o;
        }
        first_seen.emplace(residue, k);
        x += step(x);
    }
    throw std::logic_error("orbit: no period found within " + std::to_string(max_steps) + " steps");
}
} // namespace latticeflow::detail
