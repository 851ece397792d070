#include <latticeflow/cli.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include <latticeflow/export.hpp>
#include <latticeflow/flow.hpp>
#include <latticeflow/multilayer.hpp>
#include <latticeflow/oracle.hpp>
#include <latticeflow/side_law.hpp>

namespace latticeflow::cli
{
namespace
{
const std::vector<std::string> kCommands{"velocity", "pinning", "evolve", "validate"};
const std::vector<std::pair<std::string, std::string>> kBooleanKeys{
    {"compare", "evolve: compare the discrete and ODE flows over --eps"},
    {"overlay", "velocity: draw floor(2 alpha Y) and 2 floor(alpha Y + 1/4)"},
    {"inject", "validate: replace the closed form by a wrong one"},
};
const std::vector<std::pair<std::string, std::string>> kValueKeys{
    {"command", "velocity | pinning | evolve | validate"},
    {"alpha", "alpha bond coefficient (default 1)"},
    {"gamma", "time-step ratio tau / eps (default 1)"},
    {"delta", "single contrast parameter"},
    {"deltas", "contrast parameters delta_1,..,delta_K"},
    {"epsilon", "lattice spacing (default 1/100)"},
    {"l1", "evolve: initial horizontal length"},
    {"l2", "evolve: initial vertical length"},
    {"rect", "evolve: initial cells left,right,bottom,top"},
    {"horizon", "evolve: final time (default 1)"},
    {"tie", "evolve: smaller | larger step at ties"},
    {"branch", "evolve: lower | upper velocity at breakpoints"},
    {"mode", "evolve: discrete | ode | both"},
    {"eps", "evolve --compare: list of epsilons"},
    {"snapshots", "evolve: number of SVG snapshots"},
    {"ymax", "velocity, validate: largest Y"},
    {"delta-max", "pinning: largest delta of the curve"},
    {"samples", "pinning: curve points; validate: random Y per parameter set"},
    {"suite", "validate: default | all | step | velocity | parity | pinning | ladder | exhaustive"},
    {"seed", "validate: random seed"},
    {"grid", "validate: builtin | params"},
    {"out", "output directory (default .)"},
    {"format", "comma list of csv, json, svg"},
};

bool known_key(const std::string& key)
{
    const auto has = [&](const auto& keys) {
        return std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; });
    };
    return has(kValueKeys) || has(kBooleanKeys);
}

class HelpRequested : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T field(const std::string& name, const std::string& text, const std::function<T(const std::string&)>& convert)
{
    try
    {
        return convert(text);
    }
    catch (const std::exception& e)
    {
        throw ConfigError(name + ": cannot parse '" + text + "' (" + e.what() + ")");
    }
}

Rational rational_field(const std::string& name, const std::string& text)
{
    return field<Rational>(name, text, [](const std::string& s) { return parse_rational(s); });
}

std::vector<Rational> rational_list_field(const std::string& name, const std::string& text)
{
    return field<std::vector<Rational>>(name, text, [](const std::string& s) { return parse_rational_list(s); });
}

std::int64_t integer_field(const std::string& name, const std::string& text)
{
    return field<std::int64_t>(name, text, [](const std::string& s) {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size())
            throw std::invalid_argument("trailing characters");
        return static_cast<std::int64_t>(v);
    });
}

std::vector<std::string> split_commas(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        parts.push_back(trim(item));
    return parts;
}

std::string join_rationals(const std::vector<Rational>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + to_string(v[i]);
    return s;
}

// long exact values are summarized; files always carry the exact form
std::string readable(const Rational& q)
{
    std::string exact = to_string(q);
    if (exact.size() <= 40)
        return exact;
    std::ostringstream os;
    os << std::setprecision(12) << to_double(q) << " (exact value in the output files)";
    return os.str();
}

/// `key = value` lines become `--key=value` arguments placed before the real flags.
std::vector<std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::vector<std::string> args;
    std::string line;
    for (int number = 1; std::getline(in, line); ++number)
    {
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(number) + " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!known_key(key))
            throw ConfigError(key + ": unknown config key (line " + std::to_string(number) + ")");
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

void write_file(const RunConfig& c, const std::string& name, const std::function<void(std::ostream&)>& body,
                std::ostream& out)
{
    const std::filesystem::path path = std::filesystem::path(c.out_dir) / name;
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    body(f);
    out << "wrote " << path.string() << '\n';
}

bool wants(const RunConfig& c, const std::string& format)
{
    return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

MultiLayerParams params_of(const RunConfig& c) { return MultiLayerParams::make(c.alpha, c.gamma, c.deltas); }

int cmd_velocity(const RunConfig& c, std::ostream& out)
{
    const MultiLayerParams p = params_of(c);
    const VelocityTable table = velocity_table_k(p, c.y_max);
    out << "intervals " << table.intervals.size() << ", breakpoints " << table.breakpoints.size() << '\n';
    for (const auto& iv : table.intervals)
        out << "  (" << to_string(iv.lo) << ", " << to_string(iv.hi) << ") -> " << iv.value << '\n';
    if (wants(c, "csv"))
        write_file(c, "velocity.csv", [&](std::ostream& os) { write_velocity_csv(os, table); }, out);
    if (wants(c, "json"))
        write_file(c, "velocity.json", [&](std::ostream& os) { os << velocity_json(table).dump(2) << '\n'; }, out);
    if (wants(c, "svg"))
        write_file(c, "velocity.svg", [&](std::ostream& os) { write_velocity_svg(os, table, c.overlay); }, out);
    return 0;
}

int cmd_pinning(const RunConfig& c, std::ostream& out)
{
    const auto curve = pinning_curve(c.alpha, c.gamma, c.delta_max, c.samples);
    const MultiLayerParams p = params_of(c);
    out << "pinning threshold " << to_string(pinning_threshold_k(p)) << " at deltas " << join_rationals(c.deltas)
        << "; contrast threshold " << to_string(contrast_threshold(c.gamma)) << '\n';
    if (wants(c, "csv"))
        write_file(c, "pinning.csv", [&](std::ostream& os) { write_pinning_csv(os, curve); }, out);
    if (wants(c, "json"))
        write_file(c, "pinning.json",
                   [&](std::ostream& os) { os << pinning_json(c.alpha, c.gamma, curve).dump(2) << '\n'; }, out);
    if (wants(c, "svg"))
        write_file(c, "pinning.svg", [&](std::ostream& os) { write_pinning_svg(os, curve); }, out);
    return 0;
}

RectangleState initial_rectangle(const RunConfig& c)
{
    if (c.rect)
    {
        const auto& r = *c.rect;
        return {r[0], r[1], r[2], r[3]};
    }
    auto cells = [&](const std::string& name, const Rational& length) {
        const Rational q = length / c.epsilon;
        if (q.get_den() != 1)
            throw ConfigError(name + ": " + to_string(length) + " is not a multiple of epsilon " + to_string(c.epsilon));
        return floor_to_int(q);
    };
    return {0, cells("l1", *c.l1), 0, cells("l2", *c.l2)};
}

int cmd_evolve(const RunConfig& c, std::ostream& out)
{
    const MultiLayerParams p = params_of(c);
    const RectangleState start = initial_rectangle(c);
    const Rational l1 = c.epsilon * start.width();
    const Rational l2 = c.epsilon * start.height();
    const TiePolicy tie = parse_tie_policy(c.tie);
    const BranchPolicy branch = parse_branch_policy(c.branch);

    std::optional<DiscreteTrajectory> disc;
    std::optional<OdeTrajectory> ode;
    if (c.mode != "ode")
    {
        disc = evolve_discrete(start, p, c.epsilon, c.horizon, tie);
        out << "discrete: " << disc->states.size() - 1 << " steps, ";
        if (disc->extinction_step)
            out << "extinct at step " << *disc->extinction_step << " (t = "
                << readable(disc->time(*disc->extinction_step)) << ")";
        else
            out << "final " << to_string(disc->length1(static_cast<std::int64_t>(disc->states.size()) - 1)) << " x "
                << to_string(disc->length2(static_cast<std::int64_t>(disc->states.size()) - 1));
        out << ", ties " << disc->ties.size() << '\n';
    }
    if (c.mode != "discrete")
    {
        ode = evolve_ode(l1, l2, p, c.horizon, branch);
        const auto t_star = extinction_time(*ode);
        out << "ode: " << (ode->fate == OdeFate::pinned ? "pinned" : "extinct") << ", extinction time "
            << (t_star ? readable(*t_star) : std::string("infinite"))
            << (ode->extinction_extrapolated ? " (extrapolated below the length floor)" : "") << ", events "
            << ode->events.size() << '\n';
    }
    if (disc && wants(c, "csv"))
        write_file(c, "discrete.csv", [&](std::ostream& os) { write_discrete_csv(os, *disc); }, out);
    if (disc && wants(c, "json"))
        write_file(c, "discrete.json", [&](std::ostream& os) { os << discrete_json(*disc).dump(2) << '\n'; }, out);
    if (ode && wants(c, "csv"))
        write_file(c, "ode.csv", [&](std::ostream& os) { write_ode_csv(os, *ode); }, out);
    if (ode && wants(c, "json"))
        write_file(c, "ode.json", [&](std::ostream& os) { os << ode_json(*ode).dump(2) << '\n'; }, out);
    if (wants(c, "svg") && c.snapshots > 0)
    {
        std::vector<Rational> times;
        for (std::size_t k = 0; k < c.snapshots; ++k)
            times.push_back(c.snapshots == 1 ? Rational(0)
                                             : c.horizon * static_cast<long>(k) / static_cast<long>(c.snapshots - 1));
        write_file(c, "snapshots.svg",
                   [&](std::ostream& os) {
                       write_snapshots_svg(os, disc ? &*disc : nullptr, ode ? &*ode : nullptr, times);
                   },
                   out);
    }
    if (c.compare)
    {
        const FlowComparison cmp = compare_flows(l1, l2, p, c.eps_list, c.horizon, tie, branch);
        for (const auto& row : cmp.rows)
            out << "  eps " << to_string(row.epsilon) << ": d = " << row.sup_distance << '\n';
        out << "  fitted rate " << cmp.fitted_rate << ", constant " << cmp.fitted_constant << '\n';
        if (wants(c, "csv"))
            write_file(c, "comparison.csv", [&](std::ostream& os) { write_comparison_csv(os, cmp); }, out);
        if (wants(c, "json"))
            write_file(c, "comparison.json", [&](std::ostream& os) { os << comparison_json(cmp).dump(2) << '\n'; },
                       out);
    }
    return 0;
}

int cmd_validate(const RunConfig& c, std::ostream& out)
{
    ValidationOptions options;
    options.seed = c.seed;
    options.samples = c.samples;
    options.y_max = c.y_max;
    options.inject_fault = c.inject;
    if (c.grid == "params")
        options.params = params_of(c);
    const auto summaries = run_validation(c.suite, options);
    bool ok = true;
    for (const auto& s : summaries)
    {
        out << s.suite << ": " << s.cases << " cases, " << s.failures << " failures\n";
        for (std::size_t i = 0; i < s.reports.size() && i < 5; ++i)
        {
            const auto& r = s.reports[i];
            out << "  FAIL " << r.descriptor << ": oracle " << r.oracle << ", closed form " << r.closed_form
                << ", witness " << r.witness << '\n';
        }
        ok = ok && s.failures == 0;
    }
    if (wants(c, "json"))
        write_file(c, "validation.json",
                   [&](std::ostream& os) { os << validation_json(summaries, c.seed).dump(2) << '\n'; }, out);
    out << (ok ? "validation passed" : "validation FAILED") << '\n';
    return ok ? 0 : 1;
}
} // namespace

RunConfig parse_arguments(const std::vector<std::string>& raw, bool* dump)
{
    // a config file contributes defaults; explicit flags come later and win
    std::vector<std::string> args;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < raw.size(); ++i)
    {
        if (raw[i] == "--config")
        {
            if (i + 1 >= raw.size())
                throw ConfigError("config: missing file name");
            const auto from_file = read_config_file(raw[++i]);
            args.insert(args.end(), from_file.begin(), from_file.end());
        }
        else if (raw[i].rfind("--config=", 0) == 0)
        {
            const auto from_file = read_config_file(raw[i].substr(9));
            args.insert(args.end(), from_file.begin(), from_file.end());
        }
        else
            rest.push_back(raw[i]);
    }
    args.insert(args.end(), rest.begin(), rest.end());

    CLI::App app{"Crystalline flow in periodic lattice media", "latticeflow"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::map<std::string, std::string> value;
    std::string positional;
    app.add_option("command_name", positional, "velocity | pinning | evolve | validate");
    for (const auto& [key, help] : kValueKeys)
        app.add_option("--" + key, value[key], help);
    std::map<std::string, bool> flag;
    for (const auto& [key, help] : kBooleanKeys)
        app.add_flag("--" + key, flag[key], help);
    bool dump_requested = false;
    app.add_flag("--dump-config", dump_requested, "print the effective configuration and exit");
    std::string config_file;
    app.add_option("--config", config_file, "file of key = value lines; flags override it");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        throw HelpRequested(app.help());
    }
    catch (const CLI::ParseError& e)
    {
        throw ConfigError(std::string("arguments: ") + e.what());
    }
    if (dump)
        *dump = dump_requested;

    RunConfig c;
    auto given = [&](const std::string& key) { return app.count("--" + key) > 0; };
    c.command = !positional.empty() ? positional : value["command"];
    if (given("alpha"))
        c.alpha = rational_field("alpha", value["alpha"]);
    if (given("gamma"))
        c.gamma = rational_field("gamma", value["gamma"]);
    if (given("delta") && given("deltas"))
        throw ConfigError("deltas: give either delta or deltas, not both");
    if (given("delta"))
        c.deltas = {rational_field("delta", value["delta"])};
    if (given("deltas"))
        c.deltas = rational_list_field("deltas", value["deltas"]);
    if (given("epsilon"))
        c.epsilon = rational_field("epsilon", value["epsilon"]);
    if (given("l1"))
        c.l1 = rational_field("l1", value["l1"]);
    if (given("l2"))
        c.l2 = rational_field("l2", value["l2"]);
    if (given("rect"))
    {
        std::vector<std::int64_t> r;
        for (const auto& part : split_commas(value["rect"]))
            r.push_back(integer_field("rect", part));
        c.rect = r;
    }
    if (given("horizon"))
        c.horizon = rational_field("horizon", value["horizon"]);
    if (given("tie"))
        c.tie = value["tie"];
    if (given("branch"))
        c.branch = value["branch"];
    if (given("mode"))
        c.mode = value["mode"];
    if (given("eps"))
        c.eps_list = rational_list_field("eps", value["eps"]);
    if (given("snapshots"))
        c.snapshots = static_cast<std::size_t>(integer_field("snapshots", value["snapshots"]));
    if (given("ymax"))
        c.y_max = rational_field("ymax", value["ymax"]);
    if (given("delta-max"))
        c.delta_max = rational_field("delta-max", value["delta-max"]);
    if (given("samples"))
        c.samples = static_cast<std::size_t>(integer_field("samples", value["samples"]));
    if (given("suite"))
        c.suite = value["suite"];
    if (given("seed"))
        c.seed = static_cast<std::uint64_t>(integer_field("seed", value["seed"]));
    if (given("grid"))
        c.grid = value["grid"];
    if (given("out"))
        c.out_dir = value["out"];
    if (given("format"))
        c.formats = split_commas(value["format"]);
    c.compare = flag["compare"];
    c.overlay = flag["overlay"];
    c.inject = flag["inject"];
    return c;
}

void validate(const RunConfig& c)
{
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
        throw ConfigError("command: expected velocity, pinning, evolve or validate, got '" + c.command + "'");
    if (c.alpha <= 0)
        throw ConfigError("alpha: must be > 0");
    if (c.gamma <= 0)
        throw ConfigError("gamma: must be > 0");
    if (c.deltas.empty())
        throw ConfigError("deltas: at least one value is required");
    for (const auto& d : c.deltas)
        if (d < 0)
            throw ConfigError("deltas: values must be >= 0");
    if (c.epsilon <= 0)
        throw ConfigError("epsilon: must be > 0");
    if (c.horizon <= 0)
        throw ConfigError("horizon: must be > 0");
    if (c.y_max <= 0)
        throw ConfigError("ymax: must be > 0");
    if (c.delta_max <= 0)
        throw ConfigError("delta-max: must be > 0");
    if (c.samples < 2)
        throw ConfigError("samples: must be >= 2");
    for (const auto& f : c.formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw ConfigError("format: unknown format '" + f + "'");
    if (c.tie != "smaller" && c.tie != "larger")
        throw ConfigError("tie: expected smaller or larger");
    if (c.branch != "lower" && c.branch != "upper")
        throw ConfigError("branch: expected lower or upper");
    if (c.mode != "discrete" && c.mode != "ode" && c.mode != "both")
        throw ConfigError("mode: expected discrete, ode or both");
    if (c.grid != "builtin" && c.grid != "params")
        throw ConfigError("grid: expected builtin or params");
    const auto suites = suite_names();
    if (c.suite != "default" && c.suite != "all" && std::find(suites.begin(), suites.end(), c.suite) == suites.end())
        throw ConfigError("suite: unknown suite '" + c.suite + "'");
    for (const auto& e : c.eps_list)
        if (e <= 0)
            throw ConfigError("eps: values must be > 0");

    if (c.command == "evolve")
    {
        if (c.rect)
        {
            if (c.rect->size() != 4)
                throw ConfigError("rect: expected left,right,bottom,top");
            if ((*c.rect)[0] >= (*c.rect)[1] || (*c.rect)[2] >= (*c.rect)[3])
                throw ConfigError("rect: need left < right and bottom < top");
            if (c.l1 || c.l2)
                throw ConfigError("rect: give either rect or l1/l2, not both");
        }
        else
        {
            if (!c.l1)
                throw ConfigError("l1: required by evolve (or give rect)");
            if (!c.l2)
                throw ConfigError("l2: required by evolve (or give rect)");
            if (*c.l1 <= 0)
                throw ConfigError("l1: must be > 0");
            if (*c.l2 <= 0)
                throw ConfigError("l2: must be > 0");
        }
        if (c.compare && c.eps_list.empty())
            throw ConfigError("eps: --compare needs a list of epsilons");
    }
}

std::string dump_config(const RunConfig& c)
{
    std::ostringstream os;
    os << "command = " << c.command << '\n'
       << "alpha = " << to_string(c.alpha) << '\n'
       << "gamma = " << to_string(c.gamma) << '\n'
       << "deltas = " << join_rationals(c.deltas) << '\n'
       << "epsilon = " << to_string(c.epsilon) << '\n';
    if (c.l1)
        os << "l1 = " << to_string(*c.l1) << '\n';
    if (c.l2)
        os << "l2 = " << to_string(*c.l2) << '\n';
    if (c.rect)
    {
        os << "rect = ";
        for (std::size_t i = 0; i < c.rect->size(); ++i)
            os << (i ? "," : "") << (*c.rect)[i];
        os << '\n';
    }
    os << "horizon = " << to_string(c.horizon) << '\n'
       << "tie = " << c.tie << '\n'
       << "branch = " << c.branch << '\n'
       << "mode = " << c.mode << '\n'
       << "compare = " << (c.compare ? "true" : "false") << '\n';
    if (!c.eps_list.empty())
        os << "eps = " << join_rationals(c.eps_list) << '\n';
    os << "snapshots = " << c.snapshots << '\n'
       << "ymax = " << to_string(c.y_max) << '\n'
       << "overlay = " << (c.overlay ? "true" : "false") << '\n'
       << "delta-max = " << to_string(c.delta_max) << '\n'
       << "samples = " << c.samples << '\n'
       << "suite = " << c.suite << '\n'
       << "seed = " << c.seed << '\n'
       << "grid = " << c.grid << '\n'
       << "inject = " << (c.inject ? "true" : "false") << '\n'
       << "out = " << c.out_dir << '\n'
       << "format = ";
    for (std::size_t i = 0; i < c.formats.size(); ++i)
        os << (i ? "," : "") << c.formats[i];
    os << '\n';
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    try
    {
        bool dump = false;
        config = parse_arguments(args, &dump);
        validate(config);
        if (dump)
        {
            out << dump_config(config);
            return 0;
        }
        std::filesystem::create_directories(config.out_dir);
    }
    catch (const HelpRequested& help)
    {
        out << help.what();
        return 0;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try
    {
        if (config.command == "velocity")
            return cmd_velocity(config, out);
        if (config.command == "pinning")
            return cmd_pinning(config, out);
        if (config.command == "evolve")
            return cmd_evolve(config, out);
        return cmd_validate(config, out);
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument& e)
    {
        // parameter checks inside the library name the offending field
        err << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}
} // namespace latticeflow::cli
