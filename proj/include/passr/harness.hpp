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
#pragma once

// Monte Carlo orchestration: seeded receiver placements, solver dispatch over a sweep, and CSV
// emission of raw rows, aggregates, timings and convergence traces.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "passr/experiment.hpp"

namespace passr
{

/// PR and IR positions uniform over [0, S_x] x [0, S_y] at z = 0, BD from the config.
/// Deterministic in (master_seed, index).
Geometry generate_realization(std::uint64_t master_seed, int index, const SystemConfig& cfg);

/// Seed handed to every solver for one realization; shared across sweep values and solvers.
std::uint64_t solver_seed(std::uint64_t master_seed, int index);

/// Runs one solver. Exceptions become a report with status failed and the message kept.
SolveReport run_solver(SolverKind kind, const Geometry& geom, const SystemConfig& cfg, const SolverSettings& settings,
                       std::uint64_t seed);

struct ResultRow
{
    std::string scenario;
    std::string solver;
    double sweep_value = 0.0;
    int realization = 0;
    std::uint64_t seed = 0;
    double sum_rate = 0.0;
    std::vector<double> per_pr_rates;
    double kl = 0.0;
    double pe_upper_bound = 1.0;
    Residuals residuals;
    int iterations = 0;
    std::string status = "ok";
    double wall_ms = 0.0;
    std::string trace_metric;
    std::vector<double> trace;
    std::string message;
};

struct ResultTable
{
    std::string axis;
    std::vector<ResultRow> rows;  // sorted by solver name, sweep value, realization

    std::size_t failures() const;    // rows with status failed
    std::size_t infeasible() const;  // rows with status infeasible
};

ResultRow make_row(const std::string& scenario, SolverKind kind, double sweep_value, int realization,
                   const SolveReport& rep);

/// Every (sweep value, realization, solver) triple; realizations run on up to `threads` workers.
ResultTable run_experiment(const ExperimentSpec& spec, int threads = 1);

struct AggregateRow
{
    std::string solver;
    double sweep_value = 0.0;
    int count = 0;
    double mean_sum_rate = 0.0;
    double std_sum_rate = 0.0;  // sample standard deviation, 0 for a single row
    double mean_kl = 0.0;
    int failed = 0;
    int infeasible = 0;
};

/// Mean and spread per (solver, sweep value), in table order.
std::vector<AggregateRow> aggregate(const ResultTable& table);

/// Raw rows without wall-clock so identical runs give identical bytes.
void write_raw_csv(const ResultTable& table, std::ostream& out);
/// Parses write_raw_csv output. Throws std::runtime_error on malformed input.
ResultTable read_raw_csv(std::istream& in);
void write_aggregated_csv(const ResultTable& table, std::ostream& out);
void write_timing_csv(const ResultTable& table, std::ostream& out);
/// One line per recorded iteration of every row.
void write_trace_csv(const ResultTable& table, std::ostream& out);

enum OutputFiles : unsigned
{
    kRawCsv = 1u,
    kAggregatedCsv = 2u,
    kTimingCsv = 4u,
    kTraceCsv = 8u,
};

/// Writes raw.csv, aggregated.csv, timing.csv and trace.csv as selected, creating `dir`.
/// Throws std::runtime_error naming the path on I/O failure.
void emit_results(const ResultTable& table, const std::string& dir, unsigned files);

} // namespace passr
