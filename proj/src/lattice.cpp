#include <latticeflow/lattice.hpp>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace latticeflow
{
namespace
{
constexpr Index kNeighbourOffsets[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

Index operator+(Index a, Index b) { return {a.x + b.x, a.y + b.y}; }

std::int64_t chebyshev(Index a, Index b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }
} // namespace

Box Box::merged(const Box& other) const
{
    if (empty())
        return other;
    if (other.empty())
        return *this;
    return {std::min(xmin, other.xmin), std::max(xmax, other.xmax), std::min(ymin, other.ymin),
            std::max(ymax, other.ymax)};
}

CoefficientField::CoefficientField(Rational alpha, std::vector<Rational> deltas, Rational epsilon,
                                   std::int64_t anchor)
    : alpha_(std::move(alpha)), deltas_(std::move(deltas)), epsilon_(std::move(epsilon)), anchor_(anchor)
{
    if (alpha_ <= 0)
        throw std::invalid_argument("alpha: must be > 0");
    if (deltas_.empty())
        throw std::invalid_argument("deltas: at least one contrast parameter is required");
    for (std::size_t r = 0; r < deltas_.size(); ++r)
        if (deltas_[r] < 0)
            throw std::invalid_argument("deltas[" + std::to_string(r) + "]: must be >= 0");
    if (epsilon_ <= 0)
        throw std::invalid_argument("epsilon: must be > 0");
}

std::int64_t CoefficientField::layer_of(std::int64_t twice_half) const
{
    const std::int64_t m = (twice_half - 1) / 2;
    const std::int64_t residue = mod_floor(m - anchor_, period());
    return residue % 2 == 0 ? residue / 2 + 1 : 0;
}

LatticeSet::LatticeSet(std::span<const Index> indices) : indices_(indices.begin(), indices.end()) {}

LatticeSet::LatticeSet(std::initializer_list<Index> indices) : indices_(indices) {}

LatticeSet LatticeSet::rectangle(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1)
{
    LatticeSet s;
    for (std::int64_t x = x0; x < x1; ++x)
        for (std::int64_t y = y0; y < y1; ++y)
            s.indices_.insert(s.indices_.end(), Index{x, y});
    return s;
}

Box LatticeSet::bounding_box() const
{
    Box b;
    for (const Index& i : indices_)
        b = b.merged(Box{i.x, i.x, i.y, i.y});
    return b;
}

bool LatticeSet::is_rectangle() const
{
    const Box b = bounding_box();
    return static_cast<std::int64_t>(indices_.size()) == b.width() * b.height();
}

LatticeSet LatticeSet::translated(std::int64_t dx, std::int64_t dy) const
{
    LatticeSet s;
    for (const Index& i : indices_)
        s.indices_.insert(Index{i.x + dx, i.y + dy});
    return s;
}

LatticeSet LatticeSet::symmetric_difference(const LatticeSet& other) const
{
    LatticeSet s;
    std::set_symmetric_difference(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                                  std::inserter(s.indices_, s.indices_.end()));
    return s;
}

Rational bond_coefficient(Index i, Index j, const CoefficientField& field)
{
    const std::int64_t dx = j.x - i.x;
    const std::int64_t dy = j.y - i.y;
    if (std::abs(dx) + std::abs(dy) != 1)
        throw std::domain_error("bond_coefficient: indices are not nearest neighbours");
    // twice the half-integer midpoint coordinate
    const std::int64_t twice_half = dx != 0 ? i.x + j.x : i.y + j.y;
    const std::int64_t r = field.layer_of(twice_half);
    if (r == 0)
        return field.alpha();
    return field.alpha() + field.deltas()[static_cast<std::size_t>(r - 1)] * field.epsilon();
}

Rational perimeter_energy(const LatticeSet& set, const CoefficientField& field)
{
    Rational sum = 0;
    for (const Index& i : set)
        for (const Index& d : kNeighbourOffsets)
        {
            const Index j = i + d;
            if (!set.contains(j))
                sum += bond_coefficient(i, j, field);
        }
    return field.epsilon() * sum;
}

std::int64_t boundary_bond_count(const LatticeSet& set)
{
    std::int64_t count = 0;
    for (const Index& i : set)
        for (const Index& d : kNeighbourOffsets)
            if (!set.contains(i + d))
                ++count;
    return count;
}

Rational crystalline_perimeter(const Rational& l1, const Rational& l2, const Rational& alpha)
{
    if (l1 < 0 || l2 < 0)
        throw std::domain_error("crystalline_perimeter: side lengths must be >= 0");
    return 2 * alpha * (l1 + l2);
}

DistanceField::DistanceField(Box window, Rational epsilon, std::vector<std::int64_t> steps)
    : window_(window), epsilon_(std::move(epsilon)), steps_(std::move(steps))
{
}

std::int64_t DistanceField::steps(Index i) const
{
    if (!window_.contains(i))
        throw std::out_of_range("DistanceField: index outside window");
    const auto offset = (i.y - window_.ymin) * window_.width() + (i.x - window_.xmin);
    return steps_[static_cast<std::size_t>(offset)];
}

DistanceField discrete_distance_field(const LatticeSet& set, const Box& window, const Rational& epsilon)
{
    if (set.empty())
        throw std::domain_error("discrete_distance_field: the set is empty, its boundary is undefined");
    if (window.empty())
        throw std::domain_error("discrete_distance_field: empty window");

    const Box bbox = set.bounding_box();
    std::vector<std::int64_t> steps;
    steps.reserve(static_cast<std::size_t>(window.width() * window.height()));
    for (std::int64_t y = window.ymin; y <= window.ymax; ++y)
        for (std::int64_t x = window.xmin; x <= window.xmax; ++x)
        {
            const Index i{x, y};
            const bool inside = set.contains(i);
            std::int64_t best = 0;
            if (inside)
            {
                // nearest complement point: search rings of growing radius; a
                // point just outside the bounding box always qualifies
                const std::int64_t limit = std::min({x - bbox.xmin, bbox.xmax - x, y - bbox.ymin, bbox.ymax - y}) + 1;
                for (std::int64_t r = 1; r <= limit && best == 0; ++r)
                    for (std::int64_t k = -r; k <= r && best == 0; ++k)
                        if (!set.contains({x + k, y - r}) || !set.contains({x + k, y + r}) ||
                            !set.contains({x - r, y + k}) || !set.contains({x + r, y + k}))
                            best = r;
            }
            else
            {
                best = std::numeric_limits<std::int64_t>::max();
                for (const Index& j : set)
                    best = std::min(best, chebyshev(i, j));
            }
            steps.push_back(best);
        }
    return DistanceField(window, epsilon, std::move(steps));
}

Rational atw_functional(const LatticeSet& candidate, const LatticeSet& previous, const Rational& tau,
                        const CoefficientField& field)
{
    if (tau <= 0)
        throw std::domain_error("atw_functional: tau must be > 0");
    if (previous.empty())
        throw std::domain_error("atw_functional: previous set is empty");

    Rational energy = perimeter_energy(candidate, field);
    const LatticeSet diff = candidate.symmetric_difference(previous);
    if (diff.empty())
        return energy;

    const DistanceField distance = discrete_distance_field(previous, diff.bounding_box(), field.epsilon());
    std::int64_t step_sum = 0;
    for (const Index& i : diff)
        step_sum += distance.steps(i);
    const Rational& eps = field.epsilon();
    energy += eps * eps * eps * step_sum / tau;
    return energy;
}
} // namespace latticeflow
