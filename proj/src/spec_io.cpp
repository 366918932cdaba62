// SPDX-License-Identifier: Apache-2.0
//
// passr - joint transmit and pinching beamforming for PASS-assisted symbiotic radio
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "passr/experiment.hpp"

namespace passr
{

namespace
{

struct Named
{
    const char* name;
    int value;
};

constexpr Named kAxes[] = {
    {"transmit_power_dbm", static_cast<int>(SweepAxis::transmit_power_dbm)},
    {"antennas_per_waveguide", static_cast<int>(SweepAxis::antennas_per_waveguide)},
    {"iterations", static_cast<int>(SweepAxis::iterations)},
};

constexpr Named kSolvers[] = {
    {"lgd", static_cast<int>(SolverKind::lgd)},
    {"scapso", static_cast<int>(SolverKind::scapso)},
    {"elementwise", static_cast<int>(SolverKind::elementwise)},
    {"fixedpa", static_cast<int>(SolverKind::fixedpa)},
    {"mimo", static_cast<int>(SolverKind::mimo)},
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    if (trim(s).empty())
        return out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& text, const std::string& what)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(what + ": expected a finite number, got '" + text + "'");
    return v;
}

long long to_integer(const std::string& text, const std::string& what)
{
    long long v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw ConfigError(what + ": expected an integer, got '" + text + "'");
    return v;
}

int to_int(const std::string& text, const std::string& what)
{
    const long long v = to_integer(text, what);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(what + ": out of range");
    return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& text, const std::string& what)
{
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw ConfigError(what + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& text, const std::string& what)
{
    if (text == "true" || text == "1")
        return true;
    if (text == "false" || text == "0")
        return false;
    throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

std::vector<double> to_doubles(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    for (const std::string& item : split(text, ','))
        out.push_back(to_double(item, what));
    return out;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            s += ", ";
        s += format_double(v[i]);
    }
    return s;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Field
{
    const char* section;
    const char* key;
    std::function<void(ExperimentSpec&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentSpec&)> get;  // empty: not written by format_experiment
};

#define PASSR_DOUBLE(sec, name, expr)                                                                            \
    Field{sec, name, [](ExperimentSpec& s, const std::string& v, const std::string& w) { s.expr = to_double(v, w); }, \
          [](const ExperimentSpec& s) { return format_double(s.expr); }}
#define PASSR_INT(sec, name, expr)                                                                               \
    Field{sec, name, [](ExperimentSpec& s, const std::string& v, const std::string& w) { s.expr = to_int(v, w); },    \
          [](const ExperimentSpec& s) { return std::to_string(s.expr); }}
#define PASSR_BOOL(sec, name, expr)                                                                              \
    Field{sec, name, [](ExperimentSpec& s, const std::string& v, const std::string& w) { s.expr = to_bool(v, w); },   \
          [](const ExperimentSpec& s) { return bool_text(s.expr); }}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        Field{"scenario", "name", [](ExperimentSpec& s, const std::string& v, const std::string&) { s.scenario = v; },
              [](const ExperimentSpec& s) { return s.scenario; }},
        Field{"scenario", "solvers",
              [](ExperimentSpec& s, const std::string& v, const std::string&) { s.solvers = parse_solver_list(v); },
              [](const ExperimentSpec& s) {
                  std::string out;
                  for (std::size_t i = 0; i < s.solvers.size(); ++i)
                      out += (i ? "," : "") + std::string(to_string(s.solvers[i]));
                  return out;
              }},
        Field{"scenario", "sweep",
              [](ExperimentSpec& s, const std::string& v, const std::string&) { s.axis = parse_sweep_axis(v); },
              [](const ExperimentSpec& s) { return std::string(to_string(s.axis)); }},
        Field{"scenario", "values",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) { s.values = to_doubles(v, w); },
              [](const ExperimentSpec& s) { return join(s.values); }},
        PASSR_INT("scenario", "realizations", num_realizations),
        Field{"scenario", "seed",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) { s.seed = to_u64(v, w); },
              [](const ExperimentSpec& s) { return std::to_string(s.seed); }},

        PASSR_DOUBLE("system", "carrier_frequency_hz", system.carrier_frequency_hz),
        PASSR_DOUBLE("system", "effective_refractive_index", system.effective_refractive_index),
        PASSR_INT("system", "num_waveguides", system.num_waveguides),
        PASSR_INT("system", "num_pas_per_waveguide", system.num_pas_per_waveguide),
        PASSR_INT("system", "num_prs", system.num_prs),
        PASSR_DOUBLE("system", "pa_height_m", system.pa_height_m),
        PASSR_DOUBLE("system", "region_x_m", system.region_x_m),
        PASSR_DOUBLE("system", "region_y_m", system.region_y_m),
        PASSR_DOUBLE("system", "min_spacing_m", system.min_spacing_m),
        PASSR_DOUBLE("system", "max_power_w", system.max_power_w),
        Field{"system", "max_power_dbm",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) {
                  s.system.max_power_w = dbm_to_watts(to_double(v, w));
              },
              {}},
        PASSR_DOUBLE("system", "noise_power_pr_w", system.noise_power_w_pr),
        Field{"system", "noise_power_pr_dbm",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) {
                  s.system.noise_power_w_pr = dbm_to_watts(to_double(v, w));
              },
              {}},
        PASSR_DOUBLE("system", "noise_power_ir_w", system.noise_power_w_ir),
        Field{"system", "noise_power_ir_dbm",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) {
                  s.system.noise_power_w_ir = dbm_to_watts(to_double(v, w));
              },
              {}},
        PASSR_INT("system", "symbol_ratio", system.symbol_ratio),
        PASSR_DOUBLE("system", "detection_threshold", system.detection_threshold),
        Field{"system", "bd_position_m",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) {
                  const std::vector<double> p = to_doubles(v, w);
                  if (p.size() != 3)
                      throw ConfigError(w + ": expected three coordinates");
                  s.system.bd_position_m = Vec3(p[0], p[1], p[2]);
              },
              [](const ExperimentSpec& s) {
                  const Vec3& p = s.system.bd_position_m;
                  return join({p.x(), p.y(), p.z()});
              }},
        PASSR_DOUBLE("system", "bd_reflection_pr", system.bd_reflection_pr),
        PASSR_DOUBLE("system", "bd_reflection_ir", system.bd_reflection_ir),
        Field{"system", "amplitude_profile",
              [](ExperimentSpec& s, const std::string& v, const std::string& w) {
                  s.system.amplitude_profile = to_doubles(v, w);
              },
              [](const ExperimentSpec& s) { return join(s.system.amplitude_profile); }},

        PASSR_DOUBLE("lgd", "learning_rate", settings.lgd.learning_rate),
        PASSR_DOUBLE("lgd", "adam_beta1", settings.lgd.adam_beta1),
        PASSR_DOUBLE("lgd", "adam_beta2", settings.lgd.adam_beta2),
        PASSR_DOUBLE("lgd", "adam_epsilon", settings.lgd.adam_epsilon),
        PASSR_DOUBLE("lgd", "penalty_weight", settings.lgd.penalty_weight),
        PASSR_INT("lgd", "max_iterations", settings.lgd.max_iterations),
        PASSR_DOUBLE("lgd", "convergence_tol", settings.lgd.convergence_tol),
        PASSR_INT("lgd", "patience", settings.lgd.patience),

        PASSR_DOUBLE("sca", "tol", settings.sca.tol),
        PASSR_INT("sca", "max_iterations", settings.sca.max_iterations),
        PASSR_INT("sca", "subproblem_max_steps", settings.sca.subproblem_max_steps),
        PASSR_DOUBLE("sca", "subproblem_tol", settings.sca.subproblem_tol),
        PASSR_BOOL("sca", "enforce_detection", settings.sca.enforce_detection),

        PASSR_INT("pso", "num_particles", settings.pso.num_particles),
        PASSR_INT("pso", "max_iterations", settings.pso.max_iterations),
        PASSR_DOUBLE("pso", "cognitive", settings.pso.cognitive),
        PASSR_DOUBLE("pso", "social", settings.pso.social),
        PASSR_DOUBLE("pso", "inertia_max", settings.pso.inertia_max),
        PASSR_DOUBLE("pso", "inertia_min", settings.pso.inertia_min),
        PASSR_DOUBLE("pso", "penalty", settings.pso.penalty),
        PASSR_DOUBLE("pso", "velocity_clamp", settings.pso.velocity_clamp),

        PASSR_INT("outer", "max_rounds", settings.outer.max_rounds),
        PASSR_DOUBLE("outer", "tol", settings.outer.tol),

        PASSR_DOUBLE("elementwise", "grid_resolution", settings.elementwise.grid_resolution),
        PASSR_INT("elementwise", "max_rounds", settings.elementwise.max_rounds),
        PASSR_DOUBLE("elementwise", "tol", settings.elementwise.tol),
        PASSR_BOOL("elementwise", "refresh_per_antenna", settings.elementwise.refresh_per_antenna),
        PASSR_BOOL("elementwise", "reverse_order", settings.elementwise.reverse_order),
        PASSR_INT("elementwise", "refine_candidates", settings.elementwise.refine_candidates),
        PASSR_INT("elementwise", "refine_levels", settings.elementwise.refine_levels),
        PASSR_BOOL("elementwise", "zero_forcing_candidates", settings.elementwise.zero_forcing_candidates),
    };
    return table;
}

#undef PASSR_DOUBLE
#undef PASSR_INT
#undef PASSR_BOOL

// Keys that set the same quantity in different units.
const std::vector<std::pair<std::string, std::string>>& exclusive_keys()
{
    static const std::vector<std::pair<std::string, std::string>> pairs = {
        {"system.max_power_w", "system.max_power_dbm"},
        {"system.noise_power_pr_w", "system.noise_power_pr_dbm"},
        {"system.noise_power_ir_w", "system.noise_power_ir_dbm"},
    };
    return pairs;
}

bool is_integral(double v) { return std::floor(v) == v; }

} // namespace

const char* to_string(SweepAxis a)
{
    for (const Named& n : kAxes)
        if (n.value == static_cast<int>(a))
            return n.name;
    return "unknown";
}

const char* to_string(SolverKind s)
{
    for (const Named& n : kSolvers)
        if (n.value == static_cast<int>(s))
            return n.name;
    return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name)
{
    const std::string t = trim(name);
    for (const Named& n : kAxes)
        if (t == n.name)
            return static_cast<SweepAxis>(n.value);
    throw ConfigError("unknown sweep axis '" + t + "' (expected transmit_power_dbm, antennas_per_waveguide or iterations)");
}

SolverKind parse_solver(std::string_view name)
{
    const std::string t = trim(name);
    for (const Named& n : kSolvers)
        if (t == n.name)
            return static_cast<SolverKind>(n.value);
    throw ConfigError("unknown solver '" + t + "' (expected lgd, scapso, elementwise, fixedpa or mimo)");
}

std::vector<SolverKind> parse_solver_list(std::string_view list)
{
    std::vector<SolverKind> out;
    for (const std::string& item : split(list, ','))
    {
        const SolverKind s = parse_solver(item);
        for (SolverKind seen : out)
            if (seen == s)
                throw ConfigError("solver '" + item + "' listed twice");
        out.push_back(s);
    }
    if (out.empty())
        throw ConfigError("solver list is empty");
    return out;
}

SystemConfig ExperimentSpec::config_at(double value) const
{
    SystemConfig cfg = system;
    switch (axis)
    {
    case SweepAxis::transmit_power_dbm:
        cfg.max_power_w = dbm_to_watts(value);
        break;
    case SweepAxis::antennas_per_waveguide:
        cfg.num_pas_per_waveguide = static_cast<int>(value);
        break;
    case SweepAxis::iterations:
        break;
    }
    return cfg;
}

SolverSettings ExperimentSpec::settings_at(double value) const
{
    SolverSettings s = settings;
    if (axis == SweepAxis::iterations)
    {
        const int cap = static_cast<int>(value);
        s.lgd.max_iterations = cap;
        s.outer.max_rounds = cap;
        s.elementwise.max_rounds = cap;
        s.sca.max_iterations = cap;
    }
    return s;
}

void ExperimentSpec::validate() const
{
    if (scenario.empty() || scenario.find_first_of(",\"\n\r") != std::string::npos)
        throw ConfigError("scenario.name must be non-empty and free of commas, quotes and newlines");
    if (solvers.empty())
        throw ConfigError("scenario.solvers must name at least one solver");
    if (num_realizations < 1)
        throw ConfigError("scenario.realizations must be >= 1");
    if (values.empty())
        throw ConfigError("scenario.values must hold at least one sweep value");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw ConfigError("scenario.values must be strictly increasing");
    if (axis != SweepAxis::transmit_power_dbm)
        for (double v : values)
            if (!is_integral(v) || v < 1 || v > 1e6)
                throw ConfigError(std::string("scenario.values for ") + to_string(axis) +
                                  " must be integers in [1, 1e6]");

    bool needs_layout = false;
    bool needs_elementwise = false;
    for (SolverKind s : solvers)
    {
        needs_layout = needs_layout || s == SolverKind::scapso || s == SolverKind::elementwise ||
                       s == SolverKind::fixedpa;
        needs_elementwise = needs_elementwise || s == SolverKind::elementwise;
    }
    for (double v : values)
    {
        const SystemConfig cfg = config_at(v);
        const std::string at = std::string(" (at ") + to_string(axis) + " = " + format_double(v) + ")";
        try
        {
            cfg.validate();
            const SolverSettings s = settings_at(v);
            s.lgd.validate();
            s.sca.validate();
            s.pso.validate();
            s.outer.validate();
            if (needs_elementwise)
                s.elementwise.validate(cfg);
            if (needs_layout)
                fixed_pa_layout(cfg);
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(e.what() + at);
        }
    }
}

ExperimentSpec parse_experiment(std::istream& in, const std::string& origin)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError(origin + ": line " + std::to_string(e.line()) + ": " + e.message());
    }

    std::map<std::string, const Field*> by_name;
    std::set<std::string> sections;
    for (const Field& f : fields())
    {
        by_name[std::string(f.section) + "." + f.key] = &f;
        sections.insert(f.section);
    }

    ExperimentSpec spec;
    std::set<std::string> seen;
    for (const auto& [section, body] : tree)
    {
        if (!body.data().empty() && body.empty())
            throw ConfigError(origin + ": key '" + section + "' outside a section");
        if (!sections.count(section))
            throw ConfigError(origin + ": unknown section [" + section + "]");
        for (const auto& [key, value] : body)
        {
            const std::string full = section + "." + key;
            const auto it = by_name.find(full);
            if (it == by_name.end())
                throw ConfigError(origin + ": unknown key '" + key + "' in [" + section + "]");
            it->second->set(spec, trim(value.data()), origin + ": " + full);
            seen.insert(full);
        }
    }
    for (const auto& [a, b] : exclusive_keys())
        if (seen.count(a) && seen.count(b))
            throw ConfigError(origin + ": set only one of " + a + " and " + b);
    return spec;
}

ExperimentSpec parse_experiment_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_experiment(in);
}

ExperimentSpec load_experiment(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open spec file '" + path + "'");
    return parse_experiment(in, path);
}

std::string format_experiment(const ExperimentSpec& spec)
{
    std::ostringstream out;
    std::string section;
    for (const Field& f : fields())
    {
        if (!f.get)
            continue;
        if (section != f.section)
        {
            if (!section.empty())
                out << '\n';
            section = f.section;
            out << '[' << section << "]\n";
        }
        out << f.key << " = " << f.get(spec) << '\n';
    }
    return out.str();
}

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, ptr);
}

} // namespace passr
