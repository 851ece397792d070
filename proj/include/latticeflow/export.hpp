#pragma once

// CSV, JSON and SVG writers.  Rationals are written as exact "p/q" strings;
// decimal columns, where present, are for plotting only.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include <latticeflow/flow.hpp>
#include <latticeflow/oracle.hpp>
#include <latticeflow/side_law.hpp>

namespace latticeflow
{
struct PinningPoint
{
    Rational delta;
    Rational threshold;
};

/// L-bar(delta) for delta = k * d_max / (samples - 1), k = 0 .. samples - 1.
std::vector<PinningPoint> pinning_curve(const Rational& alpha, const Rational& gamma, const Rational& delta_max,
                                        std::size_t samples);

void write_velocity_csv(std::ostream& os, const VelocityTable& table);
nlohmann::json velocity_json(const VelocityTable& table);
/// Staircase with breakpoints marked; overlays floor(2 alpha Y) and
/// 2 floor(alpha Y + 1/4) when requested.
void write_velocity_svg(std::ostream& os, const VelocityTable& table, bool overlays);

void write_pinning_csv(std::ostream& os, const std::vector<PinningPoint>& curve);
nlohmann::json pinning_json(const Rational& alpha, const Rational& gamma, const std::vector<PinningPoint>& curve);
void write_pinning_svg(std::ostream& os, const std::vector<PinningPoint>& curve);

void write_discrete_csv(std::ostream& os, const DiscreteTrajectory& trajectory);
nlohmann::json discrete_json(const DiscreteTrajectory& trajectory);
void write_ode_csv(std::ostream& os, const OdeTrajectory& trajectory);
nlohmann::json ode_json(const OdeTrajectory& trajectory);

/// Nested rectangles of the discrete flow (filled) and the ODE flow (outlined)
/// at the given times, on a common center.
void write_snapshots_svg(std::ostream& os, const DiscreteTrajectory* discrete, const OdeTrajectory* ode,
                         const std::vector<Rational>& times);

void write_comparison_csv(std::ostream& os, const FlowComparison& comparison);
nlohmann::json comparison_json(const FlowComparison& comparison);

nlohmann::json report_json(const OracleReport& report);
nlohmann::json validation_json(const std::vector<SuiteSummary>& summaries, std::uint64_t seed);
} // namespace latticeflow
