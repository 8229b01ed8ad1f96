#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtoff/world.hpp"

namespace rtoff {

// Flat run description; together with the code version it fully determines a
// run. Field names double as the keys of the key=value config file.
struct ScenarioConfig {
    SchedulerKind scheduler = SchedulerKind::LatencyAware;
    FitHeuristic heuristic = FitHeuristic::WorstFit;
    int num_clients = 30;
    int num_workers = 4;
    double uncertainty_factor = 1.0;
    double arrival_rate = 1.0; // tasks per second per client
    Duration laxity_mean_us = 100'000;
    std::optional<Duration> laxity_stddev_us; // defaults to 20% of the mean
    Duration actual_exec_us = 30'000;
    Duration wcet_us = 100'000;
    std::int64_t result_payload_bytes = 0;
    Duration wireless_mean_us = 30'000;
    Duration wireless_stddev_us = 10'000;
    Duration wired_mean_us = 200;
    Duration wired_stddev_us = 0;
    double duration_s = 60.0;
    std::uint64_t seed = 1;

    Duration resolved_laxity_stddev() const {
        return laxity_stddev_us ? *laxity_stddev_us : laxity_mean_us / 5;
    }
};

// Aggregated counters and rates for one run. Every submitted task has exactly
// one outcome, so in_flight_at_end is zero after a normal drain; the field
// stays separate from both rates regardless.
struct RunMetrics {
    std::int64_t submitted = 0;
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t completed_on_time = 0;
    std::int64_t missed = 0;
    std::int64_t in_flight_at_end = 0;
    std::int64_t preemptions = 0;
    double success_rate = 0.0;    // completed on time / submitted
    double miss_rate = 0.0;       // missed / (completed on time + missed)
    double acceptance_rate = 0.0; // accepted / submitted
    double mean_response_us = 0.0;
    double mean_fallback_lead_us = 0.0;
};

// Throws ConfigError when a field is out of range.
void validate(const ScenarioConfig& config);

// Parses a flat key=value file. Keys must match ScenarioConfig field names
// exactly; unknown keys and malformed values are errors. '#' starts a
// comment.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

// Builds and runs one world. The optional trace output receives the per-task
// records.
RunMetrics run_scenario(const ScenarioConfig& config,
                        std::vector<TaskRecord>* trace = nullptr);

// One CSV row of a sweep (or of a single run, scenario 0).
struct ResultRow {
    int run_id = 0;
    int scenario = 0;
    ScenarioConfig config;
    RunMetrics metrics;
};

// Sweep presets mirroring the three evaluation scenarios: scenario 1 varies
// the client count, scenario 2 the laxity mean, scenario 3 the wireless
// latency spread.
ScenarioConfig scenario_base(int scenario);
std::vector<double> scenario_axis_values(int scenario);
ScenarioConfig scenario_point(int scenario, double axis_value);
double axis_value_of(int scenario, const ScenarioConfig& config);
std::string scenario_axis_label(int scenario);

inline std::vector<double> default_u_values() { return {0.5, 0.75, 1.0, 1.25}; }
inline std::vector<std::uint64_t> default_seeds() { return {1, 2, 3, 4, 5}; }

// Runs (axis value x scheduler x seed) and returns rows in a fixed order:
// axis values in sweep order, reference first, then the uncertainty factors
// ascending, seeds ascending. Optional per-run traces land in `traces`
// parallel to the returned rows.
std::vector<ResultRow> run_sweep(int scenario, const std::vector<double>& u_values,
                                 const std::vector<std::uint64_t>& seeds,
                                 std::vector<std::vector<TaskRecord>>* traces = nullptr);

extern const char* const kMetricsCsvHeader;
extern const char* const kTraceCsvHeader;

void write_metrics_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TaskRecord>& records);

std::string scheduler_name(SchedulerKind kind);
std::string heuristic_name(FitHeuristic h);
SchedulerKind scheduler_from_name(const std::string& name);
FitHeuristic heuristic_from_name(const std::string& name);

} // namespace rtoff
