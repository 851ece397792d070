#pragma once

// Brute-force validators.  Each one recomputes a closed form from first
// principles (full argmin scans, long orbits, exhaustive 2D enumeration) so a
// disagreement points at the closed form, never at shared code.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <latticeflow/flow.hpp>
#include <latticeflow/lattice.hpp>
#include <latticeflow/multilayer.hpp>
#include <latticeflow/rational.hpp>

namespace latticeflow
{
struct StepScan
{
    Rational y;
    std::int64_t n_max = 0;
    std::vector<std::int64_t> minimizers; ///< all argmins, increasing
    Rational minimum;

    bool unique() const { return minimizers.size() == 1; }
};

/// Smallest admissible scan bound: ceil(2 alpha Y) + 2K + 2.
std::int64_t minimum_scan_bound(const Rational& y, const MultiLayerParams& params);

/// Exact argmin of g over {0, .., n_max}.  Throws std::invalid_argument when
/// n_max is below minimum_scan_bound.
StepScan brute_force_step(const Rational& y, const MultiLayerParams& params, std::int64_t n_max);
StepScan brute_force_step(const Rational& y, const MultiLayerParams& params);

struct VelocityMeasurement
{
    Rational velocity;               ///< mean displacement per step over one cycle
    std::int64_t cycle_length = 0;   ///< period of x mod 2K
    std::vector<std::int64_t> prefix; ///< first positions of the orbit
};

/// Iterates x -> x + argmin for `steps` steps (>= 8K) and averages over the last
/// cycle.  Throws std::domain_error when some step has tied minimizers.
VelocityMeasurement brute_force_velocity(const Rational& y, const MultiLayerParams& params, std::int64_t steps = 0);

class AnnulusTooLarge : public std::length_error
{
public:
    AnnulusTooLarge(std::size_t cells, std::size_t limit);
    std::size_t cells() const { return cells_; }

private:
    std::size_t cells_;
};

struct ExhaustiveResult
{
    std::size_t annulus_cells = 0;
    std::uint64_t candidates = 0;
    LatticeSet minimizer;
    Rational energy;               ///< full functional at the minimizer
    std::uint64_t tied = 0;        ///< number of candidates attaining the minimum
    bool is_rectangle = false;
    std::optional<RectangleState> rectangle;
    std::array<std::int64_t, 4> displacement{}; ///< left, right, bottom, top (inward)
    std::array<std::int64_t, 4> predicted{};    ///< per-side optimal_step
    bool matches = false;
    /// Full functional of the per-side prediction minus the minimum (>= 0); the
    /// corner terms dropped by the per-side reduction.
    Rational corner_gap;
};

/// Minimizes the functional over all F with R_inner <= F <= previous, where
/// R_inner is previous shrunk by (predicted step + 1) on every side.  `previous`
/// must be alpha-type for a single contrast layer.  Throws AnnulusTooLarge,
/// never samples.  threads = 0 uses the hardware concurrency.
ExhaustiveResult exhaustive_minimizer_small(const RectangleState& previous, const CoefficientField& field,
                                            const Rational& tau, std::size_t max_annulus_cells = 24,
                                            unsigned threads = 0);

/// A 2D instance: an alpha-type rectangle of l1 x l2 cells with eps chosen so
/// that 2 alpha gamma / (eps l1), the scaled Y of its horizontal sides, equals t.
struct ExhaustiveInstance
{
    std::string name;
    RectangleState previous;
    Rational alpha;
    Rational gamma;
    Rational delta;
    Rational epsilon;

    static ExhaustiveInstance make(std::string name, std::int64_t l1, std::int64_t l2, Rational alpha,
                                   Rational gamma, Rational delta, const Rational& t);
    CoefficientField field() const { return CoefficientField(alpha, {delta}, epsilon); }
    Rational tau() const { return gamma * epsilon; }
};

/// Fixed instance set covering f in {0, 1, 2} below and above the contrast threshold.
std::vector<ExhaustiveInstance> standard_exhaustive_instances();

struct OracleReport
{
    std::string suite;
    std::string descriptor;  ///< parameters and Y or geometry
    std::string oracle;      ///< oracle value
    std::string closed_form; ///< value under test
    bool agree = true;
    std::string witness;     ///< argmin set or orbit prefix; set whenever agree is false
};

struct SuiteSummary
{
    std::string suite;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<OracleReport> reports; ///< failing cases only
};

struct ValidationOptions
{
    std::uint64_t seed = 1;
    std::size_t samples = 200; ///< random Y per parameter set
    Rational y_max = 10;
    /// Replaces the velocity closed form by floor(2 alpha Y); a fixture for
    /// checking that the suites detect a wrong formula.
    bool inject_fault = false;
    /// Restricts the sweeps to these parameters instead of the built-in grid.
    std::optional<MultiLayerParams> params;
};

/// Suites: step, velocity, parity, pinning, ladder, exhaustive.  "default" runs
/// all but exhaustive, "all" runs everything.
std::vector<std::string> suite_names();
std::vector<SuiteSummary> run_validation(const std::string& suite, const ValidationOptions& options);

/// Random rational in (0, y_max] with denominator at most max_den that is not a
/// breakpoint of the given law.
class NonsingularSampler
{
public:
    NonsingularSampler(std::uint64_t seed, Rational y_max, std::int64_t max_den = 997);
    Rational next(const MultiLayerParams& params);

private:
    std::mt19937_64 engine_;
    Rational y_max_;
    std::int64_t max_den_;
};
} // namespace latticeflow
