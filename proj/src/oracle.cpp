#include <latticeflow/oracle.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace latticeflow
{
namespace
{
// g evaluated from the definition, independent of the closed-form modules
Rational cost(std::int64_t n, const Rational& y, const MultiLayerParams& p)
{
    Rational g = -2 * p.alpha * n + Rational(n) * (n + 1) / (2 * y);
    const std::int64_t residue = n % p.period();
    if (residue % 2 == 1)
        g += p.deltas[static_cast<std::size_t>((residue - 1) / 2)] * p.gamma / y;
    return g;
}

std::string join(const std::vector<std::int64_t>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

std::string describe(const MultiLayerParams& p)
{
    std::ostringstream os;
    os << "alpha=" << to_string(p.alpha) << " gamma=" << to_string(p.gamma) << " deltas=";
    for (std::size_t i = 0; i < p.deltas.size(); ++i)
        os << (i ? "," : "") << to_string(p.deltas[i]);
    return os.str();
}

std::string describe(const MultiLayerParams& p, const Rational& y) { return describe(p) + " Y=" + to_string(y); }

struct Best
{
    std::int64_t energy = std::numeric_limits<std::int64_t>::max();
    std::uint64_t mask = 0;
    std::uint64_t tied = 0;

    void offer(std::int64_t e, std::uint64_t m, std::uint64_t count = 1)
    {
        if (e < energy)
        {
            energy = e;
            mask = m;
            tied = count;
        }
        else if (e == energy)
        {
            mask = std::min(mask, m);
            tied += count;
        }
    }
};

std::int64_t to_int64(const mpz_class& z)
{
    if (!z.fits_slong_p())
        throw std::overflow_error("exhaustive_minimizer_small: scaled energy exceeds 64 bits");
    return z.get_si();
}
} // namespace

std::int64_t minimum_scan_bound(const Rational& y, const MultiLayerParams& params)
{
    return ceil_to_int(2 * params.alpha * y) + params.period() + 2;
}

StepScan brute_force_step(const Rational& y, const MultiLayerParams& params, std::int64_t n_max)
{
    if (y <= 0)
        throw std::domain_error("brute_force_step: Y must be > 0");
    if (n_max < minimum_scan_bound(y, params))
        throw std::invalid_argument("n_max: must be >= ceil(2 alpha Y) + 2K + 2 = " +
                                    std::to_string(minimum_scan_bound(y, params)));
    StepScan scan;
    scan.y = y;
    scan.n_max = n_max;
    for (std::int64_t n = 0; n <= n_max; ++n)
    {
        const Rational g = cost(n, y, params);
        if (scan.minimizers.empty() || g < scan.minimum)
        {
            scan.minimizers.assign(1, n);
            scan.minimum = g;
        }
        else if (g == scan.minimum)
            scan.minimizers.push_back(n);
    }
    return scan;
}

StepScan brute_force_step(const Rational& y, const MultiLayerParams& params)
{
    return brute_force_step(y, params, minimum_scan_bound(y, params));
}

VelocityMeasurement brute_force_velocity(const Rational& y, const MultiLayerParams& params, std::int64_t steps)
{
    const std::int64_t period = params.period();
    if (steps == 0)
        steps = 8 * params.layers();
    if (steps < 8 * params.layers())
        throw std::invalid_argument("steps: must be >= 8K");

    std::vector<std::int64_t> xs{0};
    for (std::int64_t k = 0; k < steps; ++k)
    {
        const StepScan scan = brute_force_step(y, params);
        if (!scan.unique())
            throw std::domain_error("brute_force_velocity: tied minimizers " + join(scan.minimizers) + " at Y = " +
                                    to_string(y));
        xs.push_back(xs.back() + scan.minimizers.front());
    }

    // shortest p such that the residues of the tail repeat with period p
    VelocityMeasurement m;
    const std::size_t n = xs.size();
    const std::size_t tail = n / 2;
    for (std::int64_t p = 1; p <= period; ++p)
    {
        bool ok = true;
        for (std::size_t i = tail; i + static_cast<std::size_t>(p) < n && ok; ++i)
            ok = mod_floor(xs[i], period) == mod_floor(xs[i + static_cast<std::size_t>(p)], period);
        if (ok)
        {
            m.cycle_length = p;
            break;
        }
    }
    if (m.cycle_length == 0)
        throw std::logic_error("brute_force_velocity: no cycle within 2K steps");
    m.velocity = ratio(xs[n - 1] - xs[n - 1 - static_cast<std::size_t>(m.cycle_length)], m.cycle_length);
    m.prefix.assign(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(n, 2 * period + 2)));
    return m;
}

AnnulusTooLarge::AnnulusTooLarge(std::size_t cells, std::size_t limit)
    : std::length_error("annulus has " + std::to_string(cells) + " cells, limit is " + std::to_string(limit)),
      cells_(cells)
{
}

ExhaustiveResult exhaustive_minimizer_small(const RectangleState& previous, const CoefficientField& field,
                                            const Rational& tau, std::size_t max_annulus_cells, unsigned threads)
{
    if (!previous.alive())
        throw std::domain_error("exhaustive_minimizer_small: previous rectangle is degenerate");
    if (field.layers() != 1)
        throw std::invalid_argument("exhaustive_minimizer_small: requires a single contrast layer");
    for (std::int64_t c : {previous.left, previous.right, previous.bottom, previous.top})
        if (mod_floor(c - field.anchor(), 2) != 0)
            throw std::invalid_argument("exhaustive_minimizer_small: previous must be an alpha-type rectangle");
    if (tau <= 0)
        throw std::domain_error("exhaustive_minimizer_small: tau must be > 0");
    if (max_annulus_cells > 62)
        throw std::invalid_argument("max_annulus_cells: must be <= 62");

    const Rational& eps = field.epsilon();
    const MultiLayerParams params{field.alpha(), tau / eps, field.deltas()};
    ExhaustiveResult result;
    {
        const std::int64_t n_horizontal = optimal_step_k(params.gamma / (eps * previous.width()), params);
        const std::int64_t n_vertical = optimal_step_k(params.gamma / (eps * previous.height()), params);
        result.predicted = {n_vertical, n_vertical, n_horizontal, n_horizontal};
    }
    const auto& pred = result.predicted;
    const RectangleState inner{previous.left + pred[0] + 1, previous.right - pred[1] - 1,
                               previous.bottom + pred[2] + 1, previous.top - pred[3] - 1};
    auto in_inner = [&](Index i) {
        return inner.alive() && i.x >= inner.left && i.x < inner.right && i.y >= inner.bottom && i.y < inner.top;
    };

    const LatticeSet prev_set = previous.cells();
    std::vector<Index> annulus;
    std::map<Index, std::size_t> slot;
    for (const Index& i : prev_set)
        if (!in_inner(i))
        {
            slot.emplace(i, annulus.size());
            annulus.push_back(i);
        }
    const std::size_t n = annulus.size();
    result.annulus_cells = n;
    if (n > max_annulus_cells)
        throw AnnulusTooLarge(n, max_annulus_cells);
    result.candidates = std::uint64_t{1} << n;

    // exact energies on a common integer scale
    const DistanceField distance = discrete_distance_field(prev_set, prev_set.bounding_box(), eps);
    constexpr Index offsets[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<Rational> dissipation(n);
    std::vector<std::array<Rational, 4>> bond(n);
    mpz_class scale = 1;
    for (std::size_t a = 0; a < n; ++a)
    {
        dissipation[a] = eps * eps * eps * distance.steps(annulus[a]) / tau;
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), dissipation[a].get_den_mpz_t());
        for (int d = 0; d < 4; ++d)
        {
            const Index j{annulus[a].x + offsets[d].x, annulus[a].y + offsets[d].y};
            bond[a][static_cast<std::size_t>(d)] = eps * bond_coefficient(annulus[a], j, field);
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), bond[a][static_cast<std::size_t>(d)].get_den_mpz_t());
        }
    }
    // per-neighbour state: annulus slot, or fixed inside / outside
    constexpr std::int64_t kInside = -1, kOutside = -2;
    struct Cell
    {
        std::int64_t dissipation;
        std::array<std::int64_t, 4> bond;
        std::array<std::int64_t, 4> neighbour;
    };
    std::vector<Cell> cells(n);
    for (std::size_t a = 0; a < n; ++a)
    {
        cells[a].dissipation = to_int64(mpz_class(dissipation[a] * scale));
        for (int d = 0; d < 4; ++d)
        {
            const auto du = static_cast<std::size_t>(d);
            cells[a].bond[du] = to_int64(mpz_class(bond[a][du] * scale));
            const Index j{annulus[a].x + offsets[d].x, annulus[a].y + offsets[d].y};
            if (const auto it = slot.find(j); it != slot.end())
                cells[a].neighbour[du] = static_cast<std::int64_t>(it->second);
            else
                cells[a].neighbour[du] = in_inner(j) ? kInside : kOutside;
        }
    }
    const std::int64_t total_bound =
        std::accumulate(cells.begin(), cells.end(), std::int64_t{0}, [](std::int64_t s, const Cell& c) {
            return s + c.dissipation + c.bond[0] + c.bond[1] + c.bond[2] + c.bond[3];
        });
    if (total_bound > std::numeric_limits<std::int64_t>::max() / 4)
        throw std::overflow_error("exhaustive_minimizer_small: scaled energy exceeds 64 bits");

    // bit a of a mask set means annulus cell a is removed
    auto present = [&](std::uint64_t mask, std::int64_t who) {
        if (who == kInside)
            return true;
        if (who == kOutside)
            return false;
        return ((mask >> who) & 1U) == 0;
    };
    // energy relative to the interior part of the boundary, which never changes
    auto direct = [&](std::uint64_t mask) {
        std::int64_t e = 0;
        for (std::size_t a = 0; a < n; ++a)
        {
            const bool in = ((mask >> a) & 1U) == 0;
            if (!in)
                e += cells[a].dissipation;
            for (std::size_t d = 0; d < 4; ++d)
            {
                const std::int64_t who = cells[a].neighbour[d];
                const bool other = present(mask, who);
                if (in && !other)
                    e += cells[a].bond[d];
                // bonds from an inner cell to a removed annulus cell
                if (!in && who == kInside)
                    e += cells[a].bond[d];
            }
        }
        return e;
    };
    auto flip_delta = [&](std::uint64_t mask, std::size_t a) {
        const bool removing = ((mask >> a) & 1U) == 0;
        std::int64_t delta = removing ? cells[a].dissipation : -cells[a].dissipation;
        for (std::size_t d = 0; d < 4; ++d)
        {
            const bool other = present(mask, cells[a].neighbour[d]);
            // the bond is on the boundary iff exactly one endpoint is present
            delta += (other == removing) ? cells[a].bond[d] : -cells[a].bond[d];
        }
        return delta;
    };

    const unsigned prefix_bits = static_cast<unsigned>(std::min<std::size_t>(n, 8));
    const std::uint64_t chunks = std::uint64_t{1} << prefix_bits;
    const unsigned suffix_bits = static_cast<unsigned>(n) - prefix_bits;
    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex merge_mutex;
    Best best;

    auto worker = [&] {
        Best local;
        for (std::uint64_t c = next_chunk++; c < chunks; c = next_chunk++)
        {
            const std::uint64_t first = c << suffix_bits;
            const std::uint64_t last = first + (std::uint64_t{1} << suffix_bits);
            std::uint64_t mask = first ^ (first >> 1);
            std::int64_t energy = direct(mask);
            local.offer(energy, mask);
            for (std::uint64_t i = first + 1; i < last; ++i)
            {
                const auto a = static_cast<std::size_t>(std::countr_zero(i));
                energy += flip_delta(mask, a);
                mask ^= std::uint64_t{1} << a;
                local.offer(energy, mask);
            }
        }
        const std::lock_guard lock(merge_mutex);
        best.offer(local.energy, local.mask, local.tied);
    };
    unsigned count = threads ? threads : std::max(1U, std::thread::hardware_concurrency());
    count = static_cast<unsigned>(std::min<std::uint64_t>(count, chunks));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < count; ++k)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    result.tied = best.tied;
    result.minimizer = prev_set;
    for (std::size_t a = 0; a < n; ++a)
        if ((best.mask >> a) & 1U)
            result.minimizer.erase(annulus[a]);

    // the incremental energy must agree with the functional evaluated from scratch
    result.energy = atw_functional(result.minimizer, prev_set, tau, field);
    const Rational reference = atw_functional(prev_set, prev_set, tau, field);
    if (result.energy - reference != Rational(best.energy - direct(0)) / scale)
        throw std::logic_error("exhaustive_minimizer_small: incremental energy disagrees with the functional");

    if (!result.minimizer.empty() && result.minimizer.is_rectangle())
    {
        const Box b = result.minimizer.bounding_box();
        const RectangleState r{b.xmin, b.xmax + 1, b.ymin, b.ymax + 1};
        result.is_rectangle = true;
        result.rectangle = r;
        result.displacement = {r.left - previous.left, previous.right - r.right, r.bottom - previous.bottom,
                               previous.top - r.top};
        result.matches = result.displacement == result.predicted;
    }
    const RectangleState shrunk{previous.left + pred[0], previous.right - pred[1], previous.bottom + pred[2],
                                previous.top - pred[3]};
    const LatticeSet predicted_set = shrunk.alive() ? shrunk.cells() : LatticeSet{};
    result.corner_gap = atw_functional(predicted_set, prev_set, tau, field) - result.energy;
    return result;
}

ExhaustiveInstance ExhaustiveInstance::make(std::string name, std::int64_t l1, std::int64_t l2, Rational alpha,
                                            Rational gamma, Rational delta, const Rational& t)
{
    ExhaustiveInstance inst{std::move(name), {0, l1, 0, l2}, std::move(alpha), std::move(gamma), std::move(delta), 0};
    inst.epsilon = 2 * inst.alpha * inst.gamma / (t * l1);
    return inst;
}

std::vector<ExhaustiveInstance> standard_exhaustive_instances()
{
    // t = 2 alpha gamma / (eps l1) is the step parameter of the horizontal sides.
    // Names read <f>-<regime>-<l1>x<l2>; low means delta gamma < 1/2.
    using R = Rational;
    const auto make = [](const char* name, std::int64_t l1, std::int64_t l2, R alpha, R gamma, R delta_gamma,
                         R t) {
        const R delta = delta_gamma / gamma;
        return ExhaustiveInstance::make(name, l1, l2, std::move(alpha), std::move(gamma), delta, t);
    };
    return {
        make("f0-low-4x4", 4, 4, 1, 1, 0, R(3, 5)),
        make("f0-high-4x4", 4, 4, 1, 1, 1, R(11, 10)),
        make("f0-low-4x6", 4, 6, R(1, 2), 2, R(1, 10), R(9, 10)),
        make("f0-high-4x6", 4, 6, 2, R(1, 2), R(1, 2), R(6, 5)),
        make("f0-low-6x6", 6, 6, 1, 1, R(1, 4), R(4, 5)),
        make("f0-high-6x6", 6, 6, 1, 2, 1, R(7, 5)),
        make("f0-low-4x8", 4, 8, 1, 1, R(2, 5), R(13, 10)),
        make("f0-high-4x8", 4, 8, 1, 1, R(1, 2), R(6, 5)),
        make("f0-high-6x8", 6, 8, R(1, 2), 1, R(1, 2), R(7, 5)),
        make("f0-low-8x6", 8, 6, 1, 1, R(1, 10), R(3, 4)),
        make("f1-low-4x8-a", 4, 8, 1, 1, 0, R(11, 10)),
        make("f1-low-4x8-b", 4, 8, 1, 1, 0, R(6, 5)),
        make("f1-low-4x8-c", 4, 8, 2, 1, R(1, 10), R(23, 20)),
        make("f1-low-4x8-d", 4, 8, 1, R(1, 2), R(1, 10), R(6, 5)),
        make("f1-low-8x4-a", 8, 4, 1, 1, 0, R(4, 7)),
        make("f1-low-8x4-b", 8, 4, 1, 1, R(1, 10), R(3, 5)),
        make("f2-low-4x6-a", 4, 6, 1, 1, 0, R(5, 2)),
        make("f2-low-4x6-b", 4, 6, 1, 1, R(1, 4), R(12, 5)),
        make("f2-high-4x6-a", 4, 6, 1, 1, R(1, 2), R(9, 5)),
        make("f2-high-4x6-b", 4, 6, 1, 1, 1, R(2)),
        make("f2-low-6x4", 6, 4, 1, 1, R(1, 4), R(8, 5)),
        make("f2-high-6x4", 6, 4, 1, 1, 1, R(4, 3)),
    };
}

NonsingularSampler::NonsingularSampler(std::uint64_t seed, Rational y_max, std::int64_t max_den)
    : engine_(seed), y_max_(std::move(y_max)), max_den_(max_den)
{
    if (y_max_ <= 0)
        throw std::invalid_argument("y_max: must be > 0");
    if (max_den_ < 1)
        throw std::invalid_argument("max_den: must be >= 1");
}

Rational NonsingularSampler::next(const MultiLayerParams& params)
{
    for (;;)
    {
        std::uniform_int_distribution<std::int64_t> den(1, max_den_);
        const std::int64_t q = den(engine_);
        const std::int64_t top = floor_to_int(y_max_ * q);
        if (top < 1)
            continue;
        std::uniform_int_distribution<std::int64_t> num(1, top);
        const Rational y = ratio(num(engine_), q);
        if (!is_singular_k(y, params))
            return y;
    }
}

std::vector<std::string> suite_names() { return {"step", "velocity", "parity", "pinning", "ladder", "exhaustive"}; }

namespace
{
std::vector<MultiLayerParams> single_layer_grid()
{
    std::vector<MultiLayerParams> grid;
    for (const Rational& a : {Rational(1, 2), Rational(1), Rational(2)})
        for (const Rational& g : {Rational(1, 2), Rational(1), Rational(2)})
            for (const Rational& dg : {Rational(0), Rational(1, 10), Rational(1, 4), Rational(49, 100), Rational(1, 2),
                                       Rational(3, 4), Rational(1)})
                grid.push_back(MultiLayerParams::make(a, g, {dg / g}));
    return grid;
}

std::vector<MultiLayerParams> layered_grid()
{
    return {MultiLayerParams::make(1, 1, {Rational(1, 5), Rational(2, 5)}),
            MultiLayerParams::make(1, 2, {Rational(1, 10), Rational(3, 5)}),
            MultiLayerParams::make(Rational(1, 2), 1, {Rational(1, 10), Rational(3, 10), Rational(9, 20)})};
}

std::vector<MultiLayerParams> grid_for(const ValidationOptions& o, bool include_layered)
{
    if (o.params)
        return {*o.params};
    auto grid = single_layer_grid();
    if (include_layered)
        for (auto& p : layered_grid())
            grid.push_back(p);
    return grid;
}

void record(SuiteSummary& s, OracleReport r)
{
    ++s.cases;
    r.suite = s.suite;
    if (!r.agree)
    {
        ++s.failures;
        s.reports.push_back(std::move(r));
    }
}

std::int64_t velocity_under_test(const Rational& y, const MultiLayerParams& p, const ValidationOptions& o)
{
    return o.inject_fault ? homogeneous_velocity(y, p.alpha) : velocity_closed_form_k(y, p);
}

SuiteSummary suite_step(const ValidationOptions& o)
{
    SuiteSummary s{"step", 0, 0, {}};
    NonsingularSampler sampler(o.seed, o.y_max);
    for (const auto& p : grid_for(o, true))
    {
        for (std::size_t k = 0; k < o.samples; ++k)
        {
            const Rational y = sampler.next(p);
            const StepScan scan = brute_force_step(y, p);
            const std::int64_t n = optimal_step_k(y, p);
            const bool agree = scan.unique() && scan.minimizers.front() == n;
            record(s, {"", describe(p, y), join(scan.minimizers), std::to_string(n), agree,
                       agree ? "" : "argmin {" + join(scan.minimizers) + "}"});
        }
        // every breakpoint is a tie, and the tie is reported in full
        for (const Rational& y : singular_set_k(p, o.y_max))
        {
            const StepScan scan = brute_force_step(y, p);
            std::vector<std::int64_t> reported;
            try
            {
                reported.push_back(optimal_step_k(y, p));
            }
            catch (const NonUniqueMinimizer& e)
            {
                reported = e.minimizers();
            }
            const bool agree = !scan.unique() && reported == scan.minimizers;
            record(s, {"", describe(p, y) + " (breakpoint)", join(scan.minimizers), join(reported), agree,
                       agree ? "" : "argmin {" + join(scan.minimizers) + "}"});
        }
    }
    return s;
}

SuiteSummary suite_velocity(const ValidationOptions& o)
{
    SuiteSummary s{"velocity", 0, 0, {}};
    NonsingularSampler sampler(o.seed + 1, o.y_max);
    for (const auto& p : grid_for(o, true))
        for (std::size_t k = 0; k < o.samples; ++k)
        {
            const Rational y = sampler.next(p);
            const VelocityMeasurement m = brute_force_velocity(y, p);
            const std::int64_t f = velocity_under_test(y, p, o);
            const bool agree = m.velocity == f && p.period() % m.cycle_length == 0;
            record(s, {"", describe(p, y), to_string(m.velocity), std::to_string(f), agree,
                       agree ? "" : "orbit " + join(m.prefix) + " cycle " + std::to_string(m.cycle_length)});
        }
    return s;
}

SuiteSummary suite_parity(const ValidationOptions& o)
{
    SuiteSummary s{"parity", 0, 0, {}};
    for (const auto& p : grid_for(o, false))
    {
        if (p.layers() != 1)
            continue;
        const bool high = p.all_high_contrast();
        // regular grid of 1000 points in (0, top], breakpoints skipped; top caps
        // 2 alpha Y at 10 so the spacing resolves odd windows of width 1 - 2C >= 1/50
        const Rational top = min(o.y_max, 10 / (2 * p.alpha));
        std::int64_t odd_count = 0;
        std::vector<std::int64_t> odd_witness;
        for (std::int64_t k = 1; k <= 1000; ++k)
        {
            const Rational y = top * ratio(k, 1000) - Rational(1, 7919);
            if (y <= 0 || is_singular_k(y, p))
                continue;
            const StepScan scan = brute_force_step(y, p);
            const std::int64_t n = scan.minimizers.front();
            if (n % 2 != 0)
            {
                ++odd_count;
                if (odd_witness.empty())
                    odd_witness = {n};
                if (high)
                    record(s, {"", describe(p, y), std::to_string(n), "even", false, "argmin {" + join(scan.minimizers) + "}"});
            }
        }
        if (high)
            record(s, {"", describe(p) + " (all even)", std::to_string(odd_count) + " odd", "0 odd", odd_count == 0, ""});
        else
            record(s, {"", describe(p) + " (some odd)", std::to_string(odd_count) + " odd", ">0 odd", odd_count > 0,
                       odd_count > 0 ? "" : "no odd minimizer on the grid"});
    }
    return s;
}

SuiteSummary suite_pinning(const ValidationOptions& o)
{
    SuiteSummary s{"pinning", 0, 0, {}};
    NonsingularSampler sampler(o.seed + 2, 1);
    for (const auto& p : grid_for(o, true))
    {
        const Rational y_bar = p.gamma / pinning_threshold_k(p);
        // f vanishes below gamma / L-bar and is positive just above it
        for (std::size_t k = 0; k < o.samples / 4 + 1; ++k)
        {
            const Rational y = y_bar * sampler.next(p);
            if (y >= y_bar || is_singular_k(y, p))
                continue;
            const StepScan scan = brute_force_step(y, p);
            const bool agree = scan.unique() && scan.minimizers.front() == 0;
            record(s, {"", describe(p, y), join(scan.minimizers), "0", agree,
                       agree ? "" : "argmin {" + join(scan.minimizers) + "}"});
        }
        const Rational above = y_bar + Rational(1, 1000) / (2 * p.alpha);
        const StepScan scan = brute_force_step(above, p);
        const bool agree = scan.unique() && scan.minimizers.front() > 0;
        record(s, {"", describe(p, above) + " (just above threshold)", join(scan.minimizers), ">0", agree,
                   agree ? "" : "argmin {" + join(scan.minimizers) + "}"});
    }
    return s;
}

SuiteSummary suite_ladder(const ValidationOptions& o)
{
    SuiteSummary s{"ladder", 0, 0, {}};
    const auto grid = o.params ? std::vector<MultiLayerParams>{*o.params} : layered_grid();
    for (const auto& p : grid)
    {
        const VelocityTable table = velocity_table_k(p, o.y_max);
        for (const VelocityInterval& iv : table.intervals)
        {
            const Rational mid = (iv.lo + iv.hi) / 2;
            const VelocityMeasurement m = brute_force_velocity(mid, p);
            const std::int64_t f = o.inject_fault ? homogeneous_velocity(mid, p.alpha) : iv.value;
            const bool agree = m.velocity == f;
            record(s, {"", describe(p) + " interval (" + to_string(iv.lo) + ", " + to_string(iv.hi) + ")",
                       to_string(m.velocity), std::to_string(f), agree, agree ? "" : "orbit " + join(m.prefix)});
        }
    }
    return s;
}

SuiteSummary suite_exhaustive(const ValidationOptions&)
{
    SuiteSummary s{"exhaustive", 0, 0, {}};
    for (const auto& inst : standard_exhaustive_instances())
    {
        const ExhaustiveResult r = exhaustive_minimizer_small(inst.previous, inst.field(), inst.tau());
        std::ostringstream desc;
        desc << inst.name << ": " << inst.previous.width() << "x" << inst.previous.height()
             << " eps=" << to_string(inst.epsilon) << " gamma=" << to_string(inst.gamma)
             << " delta=" << to_string(inst.delta);
        const bool agree = r.matches;
        std::vector<std::int64_t> disp(r.displacement.begin(), r.displacement.end());
        std::vector<std::int64_t> pred(r.predicted.begin(), r.predicted.end());
        record(s, {"", desc.str(), r.is_rectangle ? join(disp) : "not a rectangle", join(pred), agree,
                   agree ? "" : "minimizer has " + std::to_string(r.minimizer.size()) + " cells"});
    }
    return s;
}
} // namespace

std::vector<SuiteSummary> run_validation(const std::string& suite, const ValidationOptions& options)
{
    using Runner = SuiteSummary (*)(const ValidationOptions&);
    const std::map<std::string, Runner> runners{{"step", suite_step},       {"velocity", suite_velocity},
                                                {"parity", suite_parity},   {"pinning", suite_pinning},
                                                {"ladder", suite_ladder},   {"exhaustive", suite_exhaustive}};
    std::vector<std::string> selected;
    if (suite == "default")
        selected = {"step", "velocity", "parity", "pinning", "ladder"};
    else if (suite == "all")
        selected = suite_names();
    else if (runners.contains(suite))
        selected = {suite};
    else
        throw std::invalid_argument("suite: unknown suite '" + suite + "'");

    // suites are independent; run them concurrently and keep the requested order
    std::vector<SuiteSummary> out(selected.size());
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i)
        pool.emplace_back([&, i] {
            try
            {
                out[i] = runners.at(selected[i])(options);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}
} // namespace latticeflow
