#pragma once

// Periodic low-contrast bond medium on eps*Z^2, perimeter energy, discrete
// l-infinity distance and the Almgren-Taylor-Wang functional on explicit sets.
//
// Lattice indices are integers; the physical point of index i is eps*i and the
// set E_I is the union of closed eps-squares centered at its indices.
//
// Bond coefficients.  A nearest-neighbour bond has one integer and one
// half-integer midpoint coordinate.  The half-integer coordinate h decides the
// bond: with K contrast layers it carries alpha + delta_r*eps when
//
//     (h - 1/2 - anchor) mod 2K == 2(r-1),   r = 1..K,
//
// and alpha otherwise.  For K = 1, anchor = 0 this is the periodicity cell
// below (midpoints of beta bonds have both coordinates in [0,1] mod 2):
//
//        2 +---------+.........+
//          :         :         :       ---, |  beta bond (alpha + delta*eps)
//          :         :         :       ...  :  alpha bond
//        1 +---------+.........+
//          |         |         |
//          |  beta   |         |
//        0 +---------+.........+
//          0         1         2
//
// so every row of vertical bonds between y = 2m and 2m+1 is a beta row and a
// horizontal side of a set is alpha-type or beta-type as a whole.

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include <latticeflow/rational.hpp>

namespace latticeflow
{
struct Index
{
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend auto operator<=>(const Index&, const Index&) = default;
};

/// Inclusive index bounding box.
struct Box
{
    std::int64_t xmin = 0;
    std::int64_t xmax = -1;
    std::int64_t ymin = 0;
    std::int64_t ymax = -1;

    bool empty() const { return xmin > xmax || ymin > ymax; }
    bool contains(Index i) const { return i.x >= xmin && i.x <= xmax && i.y >= ymin && i.y <= ymax; }
    bool contains(const Box& b) const { return b.empty() || (contains(Index{b.xmin, b.ymin}) && contains(Index{b.xmax, b.ymax})); }
    std::int64_t width() const { return empty() ? 0 : xmax - xmin + 1; }
    std::int64_t height() const { return empty() ? 0 : ymax - ymin + 1; }
    Box merged(const Box& other) const;
};

class CoefficientField
{
public:
    /// Throws std::invalid_argument naming the offending field.
    CoefficientField(Rational alpha, std::vector<Rational> deltas, Rational epsilon, std::int64_t anchor = 0);

    const Rational& alpha() const { return alpha_; }
    const std::vector<Rational>& deltas() const { return deltas_; }
    const Rational& epsilon() const { return epsilon_; }
    std::int64_t anchor() const { return anchor_; }
    std::int64_t layers() const { return static_cast<std::int64_t>(deltas_.size()); }
    std::int64_t period() const { return 2 * layers(); }

    /// Layer r in 1..K of the bond with half-integer midpoint coordinate (2m+1)/2,
    /// or 0 for an alpha bond.  `twice_half` is 2m+1.
    std::int64_t layer_of(std::int64_t twice_half) const;

private:
    Rational alpha_;
    std::vector<Rational> deltas_;
    Rational epsilon_;
    std::int64_t anchor_;
};

class LatticeSet
{
public:
    LatticeSet() = default;
    explicit LatticeSet(std::span<const Index> indices);
    LatticeSet(std::initializer_list<Index> indices);

    /// Full rectangle {x0 <= x < x1, y0 <= y < y1}.
    static LatticeSet rectangle(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1);

    bool contains(Index i) const { return indices_.contains(i); }
    void insert(Index i) { indices_.insert(i); }
    void erase(Index i) { indices_.erase(i); }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    Box bounding_box() const;

    /// True when the set fills its bounding box exactly.
    bool is_rectangle() const;

    LatticeSet translated(std::int64_t dx, std::int64_t dy) const;
    LatticeSet symmetric_difference(const LatticeSet& other) const;

    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    friend bool operator==(const LatticeSet&, const LatticeSet&) = default;

private:
    std::set<Index> indices_;
};

/// Coefficient c_ij of a nearest-neighbour bond (energy density).
/// Throws std::domain_error when |i - j| != 1.
Rational bond_coefficient(Index i, Index j, const CoefficientField& field);

/// eps * sum of c_ij over bonds with i inside and j outside.
Rational perimeter_energy(const LatticeSet& set, const CoefficientField& field);

/// Number of boundary bonds; H^1 of the boundary of E_I is eps times this.
std::int64_t boundary_bond_count(const LatticeSet& set);

/// 2*alpha*(L1 + L2): the crystalline perimeter of a coordinate rectangle.
Rational crystalline_perimeter(const Rational& l1, const Rational& l2, const Rational& alpha);

/// Discrete l-infinity distance to the boundary of a set, stored in lattice steps.
class DistanceField
{
public:
    DistanceField(Box window, Rational epsilon, std::vector<std::int64_t> steps);

    const Box& window() const { return window_; }
    std::int64_t steps(Index i) const;
    Rational at(Index i) const { return epsilon_ * steps(i); }

private:
    Box window_;
    Rational epsilon_;
    std::vector<std::int64_t> steps_;
};

/// d^eps(i, dI) for every index of `window`: eps * min ||i - j||_inf over j on
/// the other side of the boundary.  Throws std::domain_error when the set or the
/// window is empty.
DistanceField discrete_distance_field(const LatticeSet& set, const Box& window, const Rational& epsilon);

/// P(candidate) + (1/tau) * sum over candidate xor previous of eps^2 d^eps(i, d previous).
Rational atw_functional(const LatticeSet& candidate, const LatticeSet& previous, const Rational& tau,
                        const CoefficientField& field);
} // namespace latticeflow
