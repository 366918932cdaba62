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
#include "passr/passr.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "passr/harness.hpp"

struct passr_experiment
{
    passr::ExperimentSpec spec;
};

struct passr_results
{
    passr::ResultTable table;
};

namespace
{

thread_local std::string g_last_error;

passr_status fail(passr_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

// Maps exceptions from the core onto status codes.
template <class F>
passr_status guarded(F&& body)
{
    try
    {
        g_last_error.clear();
        return body();
    }
    catch (const passr::ConfigError& e)
    {
        return fail(PASSR_ERROR_CONFIG, e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(PASSR_ERROR_INTERNAL, "out of memory");
    }
    catch (const std::runtime_error& e)
    {
        return fail(PASSR_ERROR_IO, e.what());
    }
    catch (const std::exception& e)
    {
        return fail(PASSR_ERROR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(PASSR_ERROR_INTERNAL, "unknown exception");
    }
}

passr_status null_argument(const char* name) { return fail(PASSR_ERROR_INVALID_ARGUMENT, std::string(name) + " is null"); }

} // namespace

extern "C" {

const char* passr_version(void) { return "0.1.0"; }

const char* passr_last_error(void) { return g_last_error.c_str(); }

const char* passr_status_string(passr_status status)
{
    switch (status)
    {
    case PASSR_OK:
        return "ok";
    case PASSR_ERROR_INVALID_ARGUMENT:
        return "invalid argument";
    case PASSR_ERROR_CONFIG:
        return "configuration error";
    case PASSR_ERROR_IO:
        return "i/o error";
    case PASSR_ERROR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

passr_status passr_experiment_load(const char* path, passr_experiment** out)
{
    if (!path)
        return null_argument("path");
    if (!out)
        return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        *out = new passr_experiment{passr::load_experiment(path)};
        return PASSR_OK;
    });
}

passr_status passr_experiment_parse(const char* text, passr_experiment** out)
{
    if (!text)
        return null_argument("text");
    if (!out)
        return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        *out = new passr_experiment{passr::parse_experiment_text(text)};
        return PASSR_OK;
    });
}

void passr_experiment_free(passr_experiment* spec) { delete spec; }

passr_status passr_experiment_set_seed(passr_experiment* spec, uint64_t seed)
{
    if (!spec)
        return null_argument("spec");
    spec->spec.seed = seed;
    g_last_error.clear();
    return PASSR_OK;
}

passr_status passr_experiment_set_solvers(passr_experiment* spec, const char* list)
{
    if (!spec)
        return null_argument("spec");
    if (!list)
        return null_argument("list");
    return guarded([&] {
        try
        {
            spec->spec.solvers = passr::parse_solver_list(list);
        }
        catch (const passr::ConfigError& e)
        {
            return fail(PASSR_ERROR_INVALID_ARGUMENT, e.what());
        }
        return PASSR_OK;
    });
}

passr_status passr_experiment_set_realizations(passr_experiment* spec, int count)
{
    if (!spec)
        return null_argument("spec");
    if (count < 1)
        return fail(PASSR_ERROR_INVALID_ARGUMENT, "realization count must be >= 1");
    spec->spec.num_realizations = count;
    g_last_error.clear();
    return PASSR_OK;
}

passr_status passr_experiment_validate(const passr_experiment* spec)
{
    if (!spec)
        return null_argument("spec");
    return guarded([&] {
        spec->spec.validate();
        return PASSR_OK;
    });
}

passr_status passr_experiment_describe(const passr_experiment* spec, char* buffer, size_t size, size_t* needed)
{
    if (!spec)
        return null_argument("spec");
    if (!buffer && size > 0)
        return null_argument("buffer");
    return guarded([&] {
        const std::string text = passr::format_experiment(spec->spec);
        if (needed)
            *needed = text.size();
        if (size > 0)
        {
            const size_t n = std::min(size - 1, text.size());
            std::memcpy(buffer, text.data(), n);
            buffer[n] = '\0';
        }
        return PASSR_OK;
    });
}

passr_status passr_experiment_row_count(const passr_experiment* spec, size_t* count)
{
    if (!spec)
        return null_argument("spec");
    if (!count)
        return null_argument("count");
    const auto& s = spec->spec;
    *count = s.solvers.size() * s.values.size() * static_cast<size_t>(std::max(0, s.num_realizations));
    g_last_error.clear();
    return PASSR_OK;
}

passr_status passr_run(const passr_experiment* spec, int threads, passr_results** out)
{
    if (!spec)
        return null_argument("spec");
    if (!out)
        return null_argument("out");
    if (threads < 1)
        return fail(PASSR_ERROR_INVALID_ARGUMENT, "thread count must be >= 1");
    *out = nullptr;
    return guarded([&] {
        *out = new passr_results{passr::run_experiment(spec->spec, threads)};
        return PASSR_OK;
    });
}

void passr_results_free(passr_results* results) { delete results; }

size_t passr_results_row_count(const passr_results* results) { return results ? results->table.rows.size() : 0; }

size_t passr_results_failure_count(const passr_results* results) { return results ? results->table.failures() : 0; }

size_t passr_results_infeasible_count(const passr_results* results)
{
    return results ? results->table.infeasible() : 0;
}

passr_status passr_results_get_row(const passr_results* results, size_t index, passr_row* row)
{
    if (!results)
        return null_argument("results");
    if (!row)
        return null_argument("row");
    if (index >= results->table.rows.size())
        return fail(PASSR_ERROR_INVALID_ARGUMENT, "row index out of range");
    const passr::ResultRow& r = results->table.rows[index];
    row->solver = r.solver.c_str();
    row->status = r.status.c_str();
    row->message = r.message.c_str();
    row->sweep_value = r.sweep_value;
    row->realization = r.realization;
    row->seed = r.seed;
    row->sum_rate = r.sum_rate;
    row->kl = r.kl;
    row->pe_upper_bound = r.pe_upper_bound;
    row->residual_power = r.residuals.power;
    row->residual_detection = r.residuals.detection;
    row->residual_spacing = r.residuals.spacing;
    row->residual_range = r.residuals.range;
    row->iterations = r.iterations;
    row->wall_ms = r.wall_ms;
    row->trace_length = r.trace.size();
    g_last_error.clear();
    return PASSR_OK;
}

passr_status passr_results_get_trace(const passr_results* results, size_t index, double* values, size_t capacity,
                                     size_t* written)
{
    if (!results)
        return null_argument("results");
    if (!values && capacity > 0)
        return null_argument("values");
    if (index >= results->table.rows.size())
        return fail(PASSR_ERROR_INVALID_ARGUMENT, "row index out of range");
    const std::vector<double>& t = results->table.rows[index].trace;
    const size_t n = std::min(capacity, t.size());
    std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n), values);
    if (written)
        *written = n;
    g_last_error.clear();
    return PASSR_OK;
}

passr_status passr_results_write(const passr_results* results, const char* directory, unsigned files)
{
    if (!results)
        return null_argument("results");
    if (!directory)
        return null_argument("directory");
    if (files == 0 || (files & ~15u))
        return fail(PASSR_ERROR_INVALID_ARGUMENT, "unknown output selection");
    return guarded([&] {
        passr::emit_results(results->table, directory, files);
        return PASSR_OK;
    });
}

} // extern "C"
