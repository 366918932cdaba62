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
// Command-line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "passr/passr.h"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

struct Overrides
{
    std::string spec_path;
    std::string out_dir = "results";
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string solvers;
    int realizations = 0;
    int threads = 1;
    bool keep_going = false;
};

int report_error(const char* what, passr_status status)
{
    std::fprintf(stderr, "passr: %s: %s: %s\n", what, passr_status_string(status), passr_last_error());
    return kExitUsage;
}

// Loads the spec and applies command-line overrides; returns null after printing the error.
passr_experiment* load(const Overrides& o)
{
    passr_experiment* spec = nullptr;
    passr_status st = passr_experiment_load(o.spec_path.c_str(), &spec);
    if (st != PASSR_OK)
    {
        report_error("loading spec", st);
        return nullptr;
    }
    if (o.has_seed)
        st = passr_experiment_set_seed(spec, o.seed);
    if (st == PASSR_OK && !o.solvers.empty())
        st = passr_experiment_set_solvers(spec, o.solvers.c_str());
    if (st == PASSR_OK && o.realizations > 0)
        st = passr_experiment_set_realizations(spec, o.realizations);
    if (st == PASSR_OK)
        st = passr_experiment_validate(spec);
    if (st != PASSR_OK)
    {
        report_error("invalid spec", st);
        passr_experiment_free(spec);
        return nullptr;
    }
    return spec;
}

void print_summary(const passr_results* res)
{
    struct Acc
    {
        double sum = 0.0;
        int count = 0;
        int failed = 0;
    };
    std::map<std::pair<std::string, double>, Acc> acc;
    const size_t rows = passr_results_row_count(res);
    for (size_t i = 0; i < rows; ++i)
    {
        passr_row r;
        if (passr_results_get_row(res, i, &r) != PASSR_OK)
            continue;
        Acc& a = acc[{r.solver, r.sweep_value}];
        if (std::string(r.status) == "failed")
        {
            ++a.failed;
            continue;
        }
        a.sum += r.sum_rate;
        ++a.count;
    }
    std::printf("%-12s %12s %14s %6s %7s\n", "solver", "sweep_value", "mean_sum_rate", "runs", "failed");
    for (const auto& [key, a] : acc)
        std::printf("%-12s %12g %14.6f %6d %7d\n", key.first.c_str(), key.second, a.count ? a.sum / a.count : 0.0,
                    a.count, a.failed);
}

int execute(const Overrides& o, unsigned files)
{
    passr_experiment* spec = load(o);
    if (!spec)
        return kExitUsage;
    passr_results* res = nullptr;
    passr_status st = passr_run(spec, o.threads, &res);
    passr_experiment_free(spec);
    if (st != PASSR_OK)
        return report_error("run", st);

    st = passr_results_write(res, o.out_dir.c_str(), files);
    if (st != PASSR_OK)
    {
        passr_results_free(res);
        return report_error("writing results", st);
    }
    print_summary(res);
    const size_t failed = passr_results_failure_count(res);
    const size_t infeasible = passr_results_infeasible_count(res);
    std::printf("rows: %zu, failed: %zu, infeasible: %zu, output: %s\n", passr_results_row_count(res), failed,
                infeasible, o.out_dir.c_str());
    passr_results_free(res);
    if ((failed || infeasible) && !o.keep_going)
    {
        std::fprintf(stderr, "passr: %zu failed and %zu infeasible solver runs (use --keep-going to exit 0)\n",
                     failed, infeasible);
        return kExitSolverFailure;
    }
    return kExitOk;
}

int check(const Overrides& o)
{
    passr_experiment* spec = load(o);
    if (!spec)
        return kExitUsage;
    size_t needed = 0;
    passr_experiment_describe(spec, nullptr, 0, &needed);
    std::string text(needed + 1, '\0');
    passr_experiment_describe(spec, text.data(), text.size(), nullptr);
    text.resize(needed);
    size_t rows = 0;
    passr_experiment_row_count(spec, &rows);
    passr_experiment_free(spec);
    std::printf("%s\n# valid; a run produces %zu rows\n", text.c_str(), rows);
    return kExitOk;
}

void add_common(CLI::App* cmd, Overrides& o, bool runs)
{
    cmd->add_option("spec-file", o.spec_path, "Experiment spec file")->required();
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&o](const std::uint64_t& s) {
            o.seed = s;
            o.has_seed = true;
        },
        "Master seed (overrides the spec)");
    cmd->add_option("--solvers", o.solvers, "Comma-separated subset of lgd,scapso,elementwise,fixedpa,mimo");
    cmd->add_option("--realizations", o.realizations, "Number of channel realizations")->check(CLI::PositiveNumber);
    if (runs)
    {
        cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_flag("--keep-going", o.keep_going, "Exit 0 even when solver runs fail");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"PASS-assisted symbiotic radio beamforming experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", passr_version());

    Overrides run_opts, check_opts, trace_opts;
    CLI::App* run = app.add_subcommand("run", "Run the experiment and write raw, aggregated and timing CSVs");
    add_common(run, run_opts, true);
    CLI::App* chk = app.add_subcommand("check", "Validate the spec without running it");
    add_common(chk, check_opts, false);
    CLI::App* trace = app.add_subcommand("trace", "Run the experiment and write per-iteration convergence CSVs");
    add_common(trace, trace_opts, true);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed())
        return execute(run_opts, PASSR_OUTPUT_RAW | PASSR_OUTPUT_AGGREGATED | PASSR_OUTPUT_TIMING);
    if (trace->parsed())
        return execute(trace_opts, PASSR_OUTPUT_RAW | PASSR_OUTPUT_TRACE);
    return check(check_opts);
}
