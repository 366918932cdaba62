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
#include "passr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace passr
{

namespace
{

const char* const kRawHeader = "scenario,solver,sweep_value,realization,seed,sum_rate,per_pr_rates,kl,pe_upper_bound,"
                               "residual_power,residual_detection,residual_spacing,residual_range,iterations,status,"
                               "message";

std::string join_rates(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            s += ';';
        s += format_double(v[i]);
    }
    return s;
}

// Keeps a free-text field inside one CSV cell.
std::string sanitize(const std::string& text)
{
    std::string s = text;
    for (char& c : s)
    {
        if (c == ',')
            c = ';';
        else if (c == '"' || c == '\n' || c == '\r')
            c = ' ';
    }
    return s;
}

std::vector<std::string> split_line(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(const std::string& text, const char* column)
{
    T v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw std::runtime_error(std::string("raw csv: bad ") + column + " '" + text + "'");
    return v;
}

bool row_less(const ResultRow& a, const ResultRow& b)
{
    if (a.solver != b.solver)
        return a.solver < b.solver;
    if (a.sweep_value != b.sweep_value)
        return a.sweep_value < b.sweep_value;
    return a.realization < b.realization;
}

void open_for_write(std::ofstream& f, const std::filesystem::path& path)
{
    f.open(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot write '" + path.string() + "'");
}

} // namespace

Geometry generate_realization(std::uint64_t master_seed, int index, const SystemConfig& cfg)
{
    Rng rng(derive_seed(master_seed, {kGeometryStream, static_cast<std::uint64_t>(index)}));
    std::uniform_real_distribution<double> ux(0.0, cfg.region_x_m);
    std::uniform_real_distribution<double> uy(0.0, cfg.region_y_m);
    std::vector<Vec3> prs;
    for (int k = 0; k < cfg.num_prs; ++k)
    {
        const double x = ux(rng);
        const double y = uy(rng);
        prs.emplace_back(x, y, 0.0);
    }
    const double ix = ux(rng);
    const double iy = uy(rng);
    return make_geometry(cfg, std::move(prs), Vec3(ix, iy, 0.0));
}

std::uint64_t solver_seed(std::uint64_t master_seed, int index)
{
    return derive_seed(master_seed, {kSolverStream, static_cast<std::uint64_t>(index)});
}

SolveReport run_solver(SolverKind kind, const Geometry& geom, const SystemConfig& cfg, const SolverSettings& s,
                       std::uint64_t seed)
{
    try
    {
        switch (kind)
        {
        case SolverKind::lgd:
            return solve_lgd(geom, cfg, s.lgd, seed);
        case SolverKind::scapso:
            return solve_sca_pso(geom, cfg, s.sca, s.pso, s.outer, seed);
        case SolverKind::elementwise:
            return element_wise_search(geom, cfg, s.elementwise, s.sca, seed);
        case SolverKind::fixedpa:
            return fixed_pa_baseline(geom, cfg, s.sca, seed);
        case SolverKind::mimo:
            return conventional_mimo_baseline(geom, cfg, s.sca, seed);
        }
        throw SolverError("unknown solver kind");
    }
    catch (const std::exception& e)
    {
        SolveReport rep;
        rep.solver = to_string(kind);
        rep.seed = seed;
        rep.status = SolveStatus::failed;
        rep.message = e.what();
        return rep;
    }
}

std::size_t ResultTable::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return r.status == "failed"; }));
}

std::size_t ResultTable::infeasible() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return r.status == "infeasible"; }));
}

ResultRow make_row(const std::string& scenario, SolverKind kind, double sweep_value, int realization,
                   const SolveReport& rep)
{
    ResultRow row;
    row.scenario = scenario;
    row.solver = to_string(kind);
    row.sweep_value = sweep_value;
    row.realization = realization;
    row.seed = rep.seed;
    row.sum_rate = rep.rates.sum_rate;
    row.per_pr_rates = rep.rates.per_pr_rate;
    row.kl = rep.detection.kl;
    row.pe_upper_bound = rep.detection.pe_upper_bound;
    row.residuals = rep.residuals;
    row.iterations = rep.iterations;
    row.status = to_string(rep.status);
    row.wall_ms = rep.wall_ms;
    row.trace_metric = rep.trace_metric;
    row.trace = rep.trace;
    row.message = rep.message;
    return row;
}

ResultTable run_experiment(const ExperimentSpec& spec, int threads)
{
    spec.validate();
    const std::size_t n_values = spec.values.size();
    const std::size_t n_real = static_cast<std::size_t>(spec.num_realizations);
    const std::size_t n_solvers = spec.solvers.size();
    const std::size_t tasks = n_values * n_real;

    std::vector<ResultRow> rows(tasks * n_solvers);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t t = next++; t < tasks; t = next++)
        {
            const std::size_t v = t / n_real;
            const int index = static_cast<int>(t % n_real);
            const double value = spec.values[v];
            const SystemConfig cfg = spec.config_at(value);
            const SolverSettings settings = spec.settings_at(value);
            const Geometry geom = generate_realization(spec.seed, index, cfg);
            const std::uint64_t seed = solver_seed(spec.seed, index);
            for (std::size_t s = 0; s < n_solvers; ++s)
            {
                const SolveReport rep = run_solver(spec.solvers[s], geom, cfg, settings, seed);
                rows[t * n_solvers + s] = make_row(spec.scenario, spec.solvers[s], value, index, rep);
            }
        }
    };

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tasks)));
    if (workers == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i)
            pool.emplace_back(worker);
        for (std::thread& th : pool)
            th.join();
    }

    ResultTable table;
    table.axis = to_string(spec.axis);
    table.rows = std::move(rows);
    std::stable_sort(table.rows.begin(), table.rows.end(), row_less);
    return table;
}

std::vector<AggregateRow> aggregate(const ResultTable& table)
{
    std::vector<AggregateRow> out;
    std::vector<std::vector<double>> rates;
    for (const ResultRow& r : table.rows)
    {
        if (out.empty() || out.back().solver != r.solver || out.back().sweep_value != r.sweep_value)
        {
            out.push_back(AggregateRow{r.solver, r.sweep_value});
            rates.emplace_back();
        }
        AggregateRow& a = out.back();
        if (r.status == "failed")
        {
            ++a.failed;
            continue;
        }
        if (r.status == "infeasible")
            ++a.infeasible;
        ++a.count;
        a.mean_kl += r.kl;
        rates.back().push_back(r.sum_rate);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        AggregateRow& a = out[i];
        const std::vector<double>& v = rates[i];
        if (v.empty())
            continue;
        double sum = 0.0;
        for (double x : v)
            sum += x;
        a.mean_sum_rate = sum / static_cast<double>(v.size());
        a.mean_kl /= static_cast<double>(v.size());
        if (v.size() > 1)
        {
            double ss = 0.0;
            for (double x : v)
                ss += (x - a.mean_sum_rate) * (x - a.mean_sum_rate);
            a.std_sum_rate = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
    }
    return out;
}

void write_raw_csv(const ResultTable& table, std::ostream& out)
{
    out << kRawHeader << '\n';
    for (const ResultRow& r : table.rows)
    {
        out << r.scenario << ',' << r.solver << ',' << format_double(r.sweep_value) << ',' << r.realization << ','
            << r.seed << ',' << format_double(r.sum_rate) << ',' << join_rates(r.per_pr_rates) << ','
            << format_double(r.kl) << ',' << format_double(r.pe_upper_bound) << ','
            << format_double(r.residuals.power) << ',' << format_double(r.residuals.detection) << ','
            << format_double(r.residuals.spacing) << ',' << format_double(r.residuals.range) << ',' << r.iterations
            << ',' << r.status << ',' << sanitize(r.message) << '\n';
    }
}

ResultTable read_raw_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kRawHeader)
        throw std::runtime_error("raw csv: missing or unexpected header");
    ResultTable table;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const std::vector<std::string> f = split_line(line, ',');
        if (f.size() != 16)
            throw std::runtime_error("raw csv: expected 16 fields, got " + std::to_string(f.size()));
        ResultRow r;
        r.scenario = f[0];
        r.solver = f[1];
        r.sweep_value = parse_number<double>(f[2], "sweep_value");
        r.realization = parse_number<int>(f[3], "realization");
        r.seed = parse_number<std::uint64_t>(f[4], "seed");
        r.sum_rate = parse_number<double>(f[5], "sum_rate");
        if (!f[6].empty())
            for (const std::string& item : split_line(f[6], ';'))
                r.per_pr_rates.push_back(parse_number<double>(item, "per_pr_rates"));
        r.kl = parse_number<double>(f[7], "kl");
        r.pe_upper_bound = parse_number<double>(f[8], "pe_upper_bound");
        r.residuals.power = parse_number<double>(f[9], "residual_power");
        r.residuals.detection = parse_number<double>(f[10], "residual_detection");
        r.residuals.spacing = parse_number<double>(f[11], "residual_spacing");
        r.residuals.range = parse_number<double>(f[12], "residual_range");
        r.iterations = parse_number<int>(f[13], "iterations");
        r.status = f[14];
        r.message = f[15];
        table.rows.push_back(std::move(r));
    }
    return table;
}

void write_aggregated_csv(const ResultTable& table, std::ostream& out)
{
    out << "solver,sweep_axis,sweep_value,count,mean_sum_rate,std_sum_rate,mean_kl,failed,infeasible\n";
    for (const AggregateRow& a : aggregate(table))
        out << a.solver << ',' << table.axis << ',' << format_double(a.sweep_value) << ',' << a.count << ','
            << format_double(a.mean_sum_rate) << ',' << format_double(a.std_sum_rate) << ','
            << format_double(a.mean_kl) << ',' << a.failed << ',' << a.infeasible << '\n';
}

void write_timing_csv(const ResultTable& table, std::ostream& out)
{
    out << "solver,sweep_value,realization,iterations,wall_ms\n";
    for (const ResultRow& r : table.rows)
        out << r.solver << ',' << format_double(r.sweep_value) << ',' << r.realization << ',' << r.iterations << ','
            << format_double(r.wall_ms) << '\n';
}

void write_trace_csv(const ResultTable& table, std::ostream& out)
{
    out << "solver,sweep_value,realization,iteration,metric,value\n";
    for (const ResultRow& r : table.rows)
        for (std::size_t i = 0; i < r.trace.size(); ++i)
            out << r.solver << ',' << format_double(r.sweep_value) << ',' << r.realization << ',' << i << ','
                << r.trace_metric << ',' << format_double(r.trace[i]) << '\n';
}

void emit_results(const ResultTable& table, const std::string& dir, unsigned files)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    const struct
    {
        unsigned flag;
        const char* name;
        void (*write)(const ResultTable&, std::ostream&);
    } outputs[] = {
        {kRawCsv, "raw.csv", write_raw_csv},
        {kAggregatedCsv, "aggregated.csv", write_aggregated_csv},
        {kTimingCsv, "timing.csv", write_timing_csv},
        {kTraceCsv, "trace.csv", write_trace_csv},
    };
    for (const auto& o : outputs)
    {
        if (!(files & o.flag))
            continue;
        const fs::path path = fs::path(dir) / o.name;
        std::ofstream f;
        open_for_write(f, path);
        o.write(table, f);
        f.flush();
        if (!f)
            throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

} // namespace passr
