#include <latticeflow/export.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace latticeflow
{
namespace
{
using nlohmann::json;

json rational_list(const std::vector<Rational>& v)
{
    json out = json::array();
    for (const auto& q : v)
        out.push_back(to_string(q));
    return out;
}

std::string deltas_text(const std::vector<Rational>& deltas)
{
    std::string s;
    for (std::size_t i = 0; i < deltas.size(); ++i)
        s += (i ? "," : "") + to_string(deltas[i]);
    return s;
}

/// Minimal SVG canvas mapping data coordinates to a fixed viewport.
class Plot
{
public:
    Plot(std::ostream& os, double x_max, double y_max, std::string x_label, std::string y_label)
        : os_(os), x_max_(x_max > 0 ? x_max : 1), y_max_(y_max > 0 ? y_max : 1)
    {
        os_ << std::setprecision(6);
        os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        line(0, 0, x_max_, 0, "black", 1);
        line(0, 0, 0, y_max_, "black", 1);
        text(kMargin + kInner / 2.0, kHeight - 10, x_label);
        text(12, kMargin + kInner / 2.0, y_label);
        for (int k = 0; k <= 4; ++k)
        {
            const double xv = x_max_ * k / 4, yv = y_max_ * k / 4;
            std::ostringstream xs, ys;
            xs << std::setprecision(3) << xv;
            ys << std::setprecision(3) << yv;
            text(px(xv), kHeight - kMargin + 16, xs.str());
            text(kMargin - 22, py(yv) + 4, ys.str());
        }
    }
    ~Plot() { os_ << "</svg>\n"; }

    double px(double x) const { return kMargin + kInner * x / x_max_; }
    double py(double y) const { return kHeight - kMargin - kInner * y / y_max_; }

    void line(double x0, double y0, double x1, double y1, const std::string& color, double width,
              const std::string& dash = "")
    {
        os_ << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x1) << "\" y2=\"" << py(y1)
            << "\" stroke=\"" << color << "\" stroke-width=\"" << width << '"';
        if (!dash.empty())
            os_ << " stroke-dasharray=\"" << dash << '"';
        os_ << "/>\n";
    }
    void dot(double x, double y, const std::string& color, bool filled)
    {
        os_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" stroke=\"" << color
            << "\" fill=\"" << (filled ? color : "white") << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color)
    {
        os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : pts)
            os_ << px(x) << ',' << py(y) << ' ';
        os_ << "\"/>\n";
    }
    void text(double x, double y, const std::string& s)
    {
        os_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"11\" text-anchor=\"middle\">" << s
            << "</text>\n";
    }

private:
    static constexpr int kWidth = 640;
    static constexpr int kHeight = 480;
    static constexpr int kMargin = 50;
    static constexpr int kInner = 380;
    std::ostream& os_;
    double x_max_;
    double y_max_;
};

json event_json(const OdeEvent& e)
{
    return {{"time", to_string(e.time)},
            {"length", e.length},
            {"breakpoint", to_string(e.breakpoint)},
            {"f_lower", e.envelope.lower},
            {"f_upper", e.envelope.upper},
            {"chosen", e.chosen},
            {"forced", e.forced}};
}
} // namespace

std::vector<PinningPoint> pinning_curve(const Rational& alpha, const Rational& gamma, const Rational& delta_max,
                                        std::size_t samples)
{
    if (samples < 2)
        throw std::invalid_argument("samples: must be >= 2");
    if (delta_max <= 0)
        throw std::invalid_argument("delta_max: must be > 0");
    std::vector<PinningPoint> curve;
    for (std::size_t k = 0; k < samples; ++k)
    {
        const Rational delta = delta_max * static_cast<long>(k) / static_cast<long>(samples - 1);
        curve.push_back({delta, pinning_threshold(SideLawParams::make(alpha, gamma, delta))});
    }
    return curve;
}

void write_velocity_csv(std::ostream& os, const VelocityTable& table)
{
    if (table.layers() > 1)
        os << "# K=" << table.layers() << " deltas=" << deltas_text(table.deltas) << '\n';
    os << "kind,y_lo,y_hi,f_lower,f_upper\n";
    std::size_t b = 0;
    for (const auto& iv : table.intervals)
    {
        os << "interval," << to_string(iv.lo) << ',' << to_string(iv.hi) << ',' << iv.value << ',' << iv.value << '\n';
        if (b < table.breakpoints.size() && table.breakpoints[b] == iv.hi)
        {
            os << "breakpoint," << to_string(iv.hi) << ',' << to_string(iv.hi) << ',' << table.envelopes[b].lower
               << ',' << table.envelopes[b].upper << '\n';
            ++b;
        }
    }
}

json velocity_json(const VelocityTable& table)
{
    json j;
    j["alpha"] = to_string(table.alpha);
    j["gamma"] = to_string(table.gamma);
    j["deltas"] = rational_list(table.deltas);
    j["y_max"] = to_string(table.y_max);
    j["intervals"] = json::array();
    for (const auto& iv : table.intervals)
        j["intervals"].push_back({{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}, {"f", iv.value}});
    j["breakpoints"] = json::array();
    for (std::size_t i = 0; i < table.breakpoints.size(); ++i)
        j["breakpoints"].push_back({{"y", to_string(table.breakpoints[i])},
                                    {"f_lower", table.envelopes[i].lower},
                                    {"f_upper", table.envelopes[i].upper}});
    return j;
}

void write_velocity_svg(std::ostream& os, const VelocityTable& table, bool overlays)
{
    const double y_max = to_double(table.y_max);
    std::int64_t f_max = 1;
    for (const auto& iv : table.intervals)
        f_max = std::max(f_max, iv.value);
    if (overlays)
        f_max = std::max({f_max, homogeneous_velocity(table.y_max, table.alpha),
                          high_contrast_velocity(table.y_max, table.alpha)});
    Plot plot(os, y_max, static_cast<double>(f_max + 1), "Y", "f(Y)");

    if (overlays)
    {
        // both overlays jump on a grid of width 1/(2 alpha) or 1/alpha
        const double a = to_double(table.alpha);
        const auto steps = static_cast<int>(2 * a * y_max) + 1;
        for (int k = 0; k <= steps; ++k)
        {
            const double lo = k / (2 * a), hi = std::min(y_max, (k + 1) / (2 * a));
            if (lo < y_max)
                plot.line(lo, k, hi, k, "#3b7dd8", 1.5, "5,3");
        }
        for (int k = 0; 2 * k <= steps + 1; ++k)
        {
            const double lo = std::max(0.0, (k - 0.25) / a), hi = std::min(y_max, (k + 0.75) / a);
            if (lo < y_max)
                plot.line(lo, 2.0 * k, hi, 2.0 * k, "#2a9d55", 1.5, "2,2");
        }
    }
    for (const auto& iv : table.intervals)
        plot.line(to_double(iv.lo), static_cast<double>(iv.value), to_double(iv.hi), static_cast<double>(iv.value),
                  "black", 2.5);
    for (std::size_t i = 0; i < table.breakpoints.size(); ++i)
    {
        const double y = to_double(table.breakpoints[i]);
        plot.line(y, static_cast<double>(table.envelopes[i].lower), y, static_cast<double>(table.envelopes[i].upper),
                  "#c0392b", 1, "3,3");
        plot.dot(y, static_cast<double>(table.envelopes[i].lower), "#c0392b", false);
        plot.dot(y, static_cast<double>(table.envelopes[i].upper), "#c0392b", false);
    }
}

void write_pinning_csv(std::ostream& os, const std::vector<PinningPoint>& curve)
{
    os << "delta,threshold,threshold_decimal\n";
    for (const auto& p : curve)
        os << to_string(p.delta) << ',' << to_string(p.threshold) << ',' << std::setprecision(10)
           << to_double(p.threshold) << '\n';
}

json pinning_json(const Rational& alpha, const Rational& gamma, const std::vector<PinningPoint>& curve)
{
    json j;
    j["alpha"] = to_string(alpha);
    j["gamma"] = to_string(gamma);
    j["contrast_threshold"] = to_string(contrast_threshold(gamma));
    j["curve"] = json::array();
    for (const auto& p : curve)
        j["curve"].push_back({{"delta", to_string(p.delta)}, {"threshold", to_string(p.threshold)}});
    return j;
}

void write_pinning_svg(std::ostream& os, const std::vector<PinningPoint>& curve)
{
    double top = 0;
    for (const auto& p : curve)
        top = std::max(top, to_double(p.threshold));
    Plot plot(os, to_double(curve.back().delta), top * 1.1, "delta", "pinning threshold");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curve)
        pts.emplace_back(to_double(p.delta), to_double(p.threshold));
    plot.polyline(pts, "black");
}

void write_discrete_csv(std::ostream& os, const DiscreteTrajectory& trajectory)
{
    os << "step,t,L1,L2,left,right,bottom,top\n";
    for (std::size_t k = 0; k < trajectory.states.size(); ++k)
    {
        const auto ks = static_cast<std::int64_t>(k);
        const RectangleState& r = trajectory.states[k];
        os << k << ',' << to_string(trajectory.time(ks)) << ',' << to_string(trajectory.length1(ks)) << ','
           << to_string(trajectory.length2(ks)) << ',' << r.left << ',' << r.right << ',' << r.bottom << ',' << r.top
           << '\n';
    }
}

json discrete_json(const DiscreteTrajectory& trajectory)
{
    json j;
    j["epsilon"] = to_string(trajectory.epsilon);
    j["gamma"] = to_string(trajectory.gamma);
    j["tau"] = to_string(trajectory.tau());
    j["steps"] = trajectory.states.size() - 1;
    j["extinction_step"] = trajectory.extinction_step ? json(*trajectory.extinction_step) : json(nullptr);
    if (trajectory.extinction_step)
        j["extinction_time"] = to_string(trajectory.time(*trajectory.extinction_step));
    j["states"] = json::array();
    for (const auto& r : trajectory.states)
        j["states"].push_back({r.left, r.right, r.bottom, r.top});
    j["ties"] = json::array();
    for (const auto& t : trajectory.ties)
        j["ties"].push_back({{"step", t.step},
                             {"side", to_string(t.side)},
                             {"y", to_string(t.y)},
                             {"minimizers", t.minimizers},
                             {"chosen", t.chosen}});
    return j;
}

void write_ode_csv(std::ostream& os, const OdeTrajectory& trajectory)
{
    const auto t_star = extinction_time(trajectory);
    os << "t,L1,L2";
    if (t_star)
        os << ",extinction_time";
    os << '\n';
    for (const auto& s : trajectory.samples)
    {
        os << to_string(s.t) << ',' << to_string(s.l1) << ',' << to_string(s.l2);
        if (t_star)
            os << ',' << to_string(*t_star);
        os << '\n';
    }
}

json ode_json(const OdeTrajectory& trajectory)
{
    json j;
    j["gamma"] = to_string(trajectory.gamma);
    j["horizon"] = to_string(trajectory.horizon);
    j["fate"] = trajectory.fate == OdeFate::pinned ? "pinned" : "extinct";
    const auto t_star = extinction_time(trajectory);
    j["extinction_time"] = t_star ? json(to_string(*t_star)) : json("infinite");
    j["extinction_extrapolated"] = trajectory.extinction_extrapolated;
    j["samples"] = json::array();
    for (const auto& s : trajectory.samples)
        j["samples"].push_back({to_string(s.t), to_string(s.l1), to_string(s.l2)});
    j["events"] = json::array();
    for (const auto& e : trajectory.events)
        j["events"].push_back(event_json(e));
    return j;
}

void write_snapshots_svg(std::ostream& os, const DiscreteTrajectory* discrete, const OdeTrajectory* ode,
                         const std::vector<Rational>& times)
{
    double extent = 0;
    if (discrete)
    {
        const auto& r0 = discrete->states.front();
        extent = std::max(extent, to_double(discrete->epsilon * std::max(r0.width(), r0.height())));
    }
    if (ode)
        extent = std::max({extent, to_double(ode->samples.front().l1), to_double(ode->samples.front().l2)});
    Plot plot(os, extent, extent, "x", "y");
    const double c = extent / 2;
    const char* palette[] = {"#1b4f72", "#2e86c1", "#48c9b0", "#f4d03f", "#e67e22", "#c0392b"};
    std::size_t shade = 0;
    for (const Rational& t : times)
    {
        const std::string color = palette[shade++ % 6];
        if (discrete)
        {
            const auto k = std::min<std::size_t>(static_cast<std::size_t>(floor_to_int(t / discrete->tau())),
                                                 discrete->states.size() - 1);
            const auto& r = discrete->states[k];
            const auto& r0 = discrete->states.front();
            const double e = to_double(discrete->epsilon);
            const double x0 = (r.left - r0.left) * e, x1 = (r.right - r0.left) * e;
            const double y0 = (r.bottom - r0.bottom) * e, y1 = (r.top - r0.bottom) * e;
            const double dx = c - (r0.width() * e) / 2, dy = c - (r0.height() * e) / 2;
            plot.line(x0 + dx, y0 + dy, x1 + dx, y0 + dy, color, 2);
            plot.line(x1 + dx, y0 + dy, x1 + dx, y1 + dy, color, 2);
            plot.line(x1 + dx, y1 + dy, x0 + dx, y1 + dy, color, 2);
            plot.line(x0 + dx, y1 + dy, x0 + dx, y0 + dy, color, 2);
        }
        if (ode)
        {
            const auto [l1, l2] = ode->lengths_at(t);
            const double w = to_double(l1) / 2, h = to_double(l2) / 2;
            plot.line(c - w, c - h, c + w, c - h, color, 1, "4,3");
            plot.line(c + w, c - h, c + w, c + h, color, 1, "4,3");
            plot.line(c + w, c + h, c - w, c + h, color, 1, "4,3");
            plot.line(c - w, c + h, c - w, c - h, color, 1, "4,3");
        }
    }
}

void write_comparison_csv(std::ostream& os, const FlowComparison& comparison)
{
    os << "epsilon,steps,sup_distance,distance_over_epsilon,discrete_extinction,ode_extinction\n";
    os << std::setprecision(10);
    for (const auto& row : comparison.rows)
        os << to_string(row.epsilon) << ',' << row.steps << ',' << row.sup_distance << ','
           << row.sup_distance / to_double(row.epsilon) << ','
           << (row.discrete_extinction ? to_string(*row.discrete_extinction) : "none") << ','
           << (row.ode_extinction ? to_string(*row.ode_extinction) : "infinite") << '\n';
    os << "# fitted_rate=" << comparison.fitted_rate << " fitted_constant=" << comparison.fitted_constant << '\n';
}

json comparison_json(const FlowComparison& comparison)
{
    json j;
    j["fitted_rate"] = comparison.fitted_rate;
    j["fitted_constant"] = comparison.fitted_constant;
    j["rows"] = json::array();
    for (const auto& row : comparison.rows)
        j["rows"].push_back(
            {{"epsilon", to_string(row.epsilon)},
             {"steps", row.steps},
             {"sup_distance", row.sup_distance},
             {"discrete_extinction", row.discrete_extinction ? json(to_string(*row.discrete_extinction)) : json(nullptr)},
             {"ode_extinction", row.ode_extinction ? json(to_string(*row.ode_extinction)) : json("infinite")}});
    return j;
}

json report_json(const OracleReport& report)
{
    json j{{"suite", report.suite},
           {"case", report.descriptor},
           {"oracle", report.oracle},
           {"closed_form", report.closed_form},
           {"agree", report.agree}};
    if (!report.agree)
        j["witness"] = report.witness;
    return j;
}

json validation_json(const std::vector<SuiteSummary>& summaries, std::uint64_t seed)
{
    json j;
    j["seed"] = seed;
    bool ok = true;
    j["suites"] = json::array();
    for (const auto& s : summaries)
    {
        json entry{{"suite", s.suite}, {"cases", s.cases}, {"failures", s.failures}};
        entry["failing_cases"] = json::array();
        for (const auto& r : s.reports)
            entry["failing_cases"].push_back(report_json(r));
        j["suites"].push_back(entry);
        ok = ok && s.failures == 0;
    }
    j["passed"] = ok;
    return j;
}
} // namespace latticeflow
