#include "rtoff/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rtoff/check.hpp"

namespace rtoff {

const char* const kMetricsCsvHeader =
    "run_id,scenario,scheduler,heuristic,u_factor,clients,workers,laxity_mean_ms,"
    "latency_mean_ms,latency_std_ms,seed,submitted,accepted,rejected,completed_on_time,"
    "missed,in_flight_at_end,success_rate,miss_rate,mean_response_ms,mean_fallback_lead_ms";

const char* const kTraceCsvHeader =
    "task_id,client,submit,decision,worker,dispatches,preemptions,completion,deadline,verdict";

std::string scheduler_name(SchedulerKind kind) {
    return kind == SchedulerKind::LatencyAware ? "latency_aware" : "reference";
}

SchedulerKind scheduler_from_name(const std::string& name) {
    if (name == "latency_aware")
        return SchedulerKind::LatencyAware;
    if (name == "reference")
        return SchedulerKind::Reference;
    throw ConfigError("unknown scheduler '" + name + "'");
}

std::string heuristic_name(FitHeuristic h) {
    switch (h) {
    case FitHeuristic::FirstFit:
        return "first_fit";
    case FitHeuristic::BestFit:
        return "best_fit";
    case FitHeuristic::WorstFit:
        return "worst_fit";
    }
    return "worst_fit";
}

FitHeuristic heuristic_from_name(const std::string& name) {
    if (name == "first_fit")
        return FitHeuristic::FirstFit;
    if (name == "best_fit")
        return FitHeuristic::BestFit;
    if (name == "worst_fit")
        return FitHeuristic::WorstFit;
    throw ConfigError("unknown heuristic '" + name + "'");
}

void validate(const ScenarioConfig& c) {
    if (c.num_clients < 1)
        throw ConfigError("num_clients must be >= 1");
    if (c.num_workers < 1)
        throw ConfigError("num_workers must be >= 1");
    if (c.uncertainty_factor < 0.0)
        throw ConfigError("uncertainty_factor must be >= 0");
    if (c.arrival_rate <= 0.0)
        throw ConfigError("arrival_rate must be > 0");
    if (c.laxity_mean_us <= 0)
        throw ConfigError("laxity_mean_us must be > 0");
    if (c.resolved_laxity_stddev() < 0)
        throw ConfigError("laxity_stddev_us must be >= 0");
    if (c.actual_exec_us <= 0)
        throw ConfigError("actual_exec_us must be > 0");
    if (c.wcet_us < c.actual_exec_us)
        throw ConfigError("wcet_us must be >= actual_exec_us");
    if (c.result_payload_bytes < 0)
        throw ConfigError("result_payload_bytes must be >= 0");
    if (c.wireless_mean_us < 0 || c.wired_mean_us < 0)
        throw ConfigError("link means must be >= 0");
    if (c.wireless_stddev_us < 0 || c.wired_stddev_us < 0)
        throw ConfigError("link stddevs must be >= 0");
    if (c.duration_s <= 0.0)
        throw ConfigError("duration_s must be > 0");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& value, const std::string& key, int line) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof())
        throw ConfigError("bad value '" + value + "' for " + key + " (line " +
                          std::to_string(line) + ")");
    return out;
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": expected key=value (line " +
                              std::to_string(line_no) + ")");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "scheduler") {
            cfg.scheduler = scheduler_from_name(value);
        } else if (key == "heuristic") {
            cfg.heuristic = heuristic_from_name(value);
        } else if (key == "num_clients") {
            cfg.num_clients = parse_number<int>(value, key, line_no);
        } else if (key == "num_workers") {
            cfg.num_workers = parse_number<int>(value, key, line_no);
        } else if (key == "uncertainty_factor") {
            cfg.uncertainty_factor = parse_number<double>(value, key, line_no);
        } else if (key == "arrival_rate") {
            cfg.arrival_rate = parse_number<double>(value, key, line_no);
        } else if (key == "laxity_mean_us") {
            cfg.laxity_mean_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "laxity_stddev_us") {
            cfg.laxity_stddev_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "actual_exec_us") {
            cfg.actual_exec_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "wcet_us") {
            cfg.wcet_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "result_payload_bytes") {
            cfg.result_payload_bytes = parse_number<std::int64_t>(value, key, line_no);
        } else if (key == "wireless_mean_us") {
            cfg.wireless_mean_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "wireless_stddev_us") {
            cfg.wireless_stddev_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "wired_mean_us") {
            cfg.wired_mean_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "wired_stddev_us") {
            cfg.wired_stddev_us = parse_number<Duration>(value, key, line_no);
        } else if (key == "duration_s") {
            cfg.duration_s = parse_number<double>(value, key, line_no);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(value, key, line_no);
        } else {
            throw ConfigError(origin + ": unknown key '" + key + "' (line " +
                              std::to_string(line_no) + ")");
        }
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

RunMetrics run_scenario(const ScenarioConfig& config, std::vector<TaskRecord>* trace) {
    validate(config);

    WorldConfig wc;
    wc.kind = config.scheduler;
    wc.scheduler.uncertainty_factor = config.uncertainty_factor;
    wc.scheduler.heuristic = config.heuristic;
    wc.scheduler.num_workers = config.num_workers;
    wc.num_clients = config.num_clients;
    wc.client.arrival_rate = config.arrival_rate;
    wc.client.laxity_mean = config.laxity_mean_us;
    wc.client.laxity_stddev = config.resolved_laxity_stddev();
    wc.client.actual_exec = config.actual_exec_us;
    wc.client.wcet = config.wcet_us;
    wc.client.result_payload_bytes = config.result_payload_bytes;
    wc.wireless = LinkModel{config.wireless_mean_us, config.wireless_stddev_us,
                            1'000, std::nullopt};
    wc.wired = LinkModel{config.wired_mean_us, config.wired_stddev_us, 0, std::nullopt};
    wc.duration = static_cast<SimTime>(std::llround(config.duration_s * 1e6));
    wc.seed = config.seed;

    World world(wc);
    world.run();

    const World::Totals& t = world.totals();
    RunMetrics m;
    m.submitted = t.submitted;
    m.accepted = t.accepted;
    m.rejected = t.rejected;
    m.completed_on_time = t.on_time;
    m.missed = t.missed;
    m.in_flight_at_end = t.accepted - t.on_time - t.missed;
    m.preemptions = t.preemptions;
    if (m.submitted > 0) {
        m.success_rate = static_cast<double>(m.completed_on_time) /
                         static_cast<double>(m.submitted);
        m.acceptance_rate = static_cast<double>(m.accepted) /
                            static_cast<double>(m.submitted);
    }
    std::int64_t decided = m.completed_on_time + m.missed;
    if (decided > 0) {
        m.miss_rate = static_cast<double>(m.missed) / static_cast<double>(decided);
        m.mean_response_us = static_cast<double>(t.response_sum) /
                             static_cast<double>(decided);
    }
    if (m.rejected > 0)
        m.mean_fallback_lead_us = static_cast<double>(t.fallback_lead_sum) /
                                  static_cast<double>(m.rejected);

    if (trace)
        *trace = world.records();
    return m;
}

ScenarioConfig scenario_base(int scenario) {
    ScenarioConfig cfg;
    switch (scenario) {
    case 1:
        // Load scaling: a single worker serves a growing client population.
        cfg.num_clients = 50;
        cfg.num_workers = 1;
        cfg.laxity_mean_us = 100'000;
        break;
    case 2:
        cfg.num_clients = 30;
        cfg.num_workers = 4;
        cfg.laxity_mean_us = 180'000;
        break;
    case 3:
        cfg.num_clients = 30;
        cfg.num_workers = 4;
        cfg.laxity_mean_us = 100'000;
        break;
    default:
        throw ConfigError("scenario must be 1, 2 or 3");
    }
    return cfg;
}

std::vector<double> scenario_axis_values(int scenario) {
    switch (scenario) {
    case 1:
        return {10, 20, 30, 40, 50};
    case 2:
        return {180, 150, 120, 90, 60}; // laxity mean in ms, shrinking
    case 3:
        return {10, 20, 30, 40, 50}; // wireless latency stddev in ms
    default:
        throw ConfigError("scenario must be 1, 2 or 3");
    }
}

ScenarioConfig scenario_point(int scenario, double axis_value) {
    ScenarioConfig cfg = scenario_base(scenario);
    switch (scenario) {
    case 1:
        cfg.num_clients = static_cast<int>(axis_value);
        break;
    case 2:
        cfg.laxity_mean_us = static_cast<Duration>(std::llround(axis_value * 1000.0));
        break;
    case 3:
        cfg.wireless_stddev_us = static_cast<Duration>(std::llround(axis_value * 1000.0));
        break;
    default:
        throw ConfigError("scenario must be 1, 2 or 3");
    }
    return cfg;
}

double axis_value_of(int scenario, const ScenarioConfig& config) {
    switch (scenario) {
    case 2:
        return static_cast<double>(config.laxity_mean_us) / 1000.0;
    case 3:
        return static_cast<double>(config.wireless_stddev_us) / 1000.0;
    default:
        return static_cast<double>(config.num_clients);
    }
}

std::string scenario_axis_label(int scenario) {
    switch (scenario) {
    case 2:
        return "laxity mean [ms]";
    case 3:
        return "latency stddev [ms]";
    default:
        return "clients";
    }
}

std::vector<ResultRow> run_sweep(int scenario, const std::vector<double>& u_values,
                                 const std::vector<std::uint64_t>& seeds,
                                 std::vector<std::vector<TaskRecord>>* traces) {
    if (seeds.empty())
        throw ConfigError("sweep needs at least one seed");
    std::vector<ResultRow> rows;
    int run_id = 1;
    for (double axis : scenario_axis_values(scenario)) {
        // Reference first, then the latency-aware scheduler per uncertainty
        // factor, each across all seeds.
        for (int variant = 0; variant <= static_cast<int>(u_values.size()); ++variant) {
            for (std::uint64_t seed : seeds) {
                ScenarioConfig cfg = scenario_point(scenario, axis);
                cfg.seed = seed;
                if (variant == 0) {
                    cfg.scheduler = SchedulerKind::Reference;
                } else {
                    cfg.scheduler = SchedulerKind::LatencyAware;
                    cfg.uncertainty_factor = u_values[variant - 1];
                }
                ResultRow row;
                row.run_id = run_id++;
                row.scenario = scenario;
                row.config = cfg;
                if (traces) {
                    traces->emplace_back();
                    row.metrics = run_scenario(cfg, &traces->back());
                } else {
                    row.metrics = run_scenario(cfg);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string ms_from_us(double us) { return fixed(us / 1000.0, 3); }

} // namespace

void write_metrics_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kMetricsCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        const ScenarioConfig& c = r.config;
        const RunMetrics& m = r.metrics;
        bool latency_aware = c.scheduler == SchedulerKind::LatencyAware;
        out << r.run_id << ',' << r.scenario << ',' << scheduler_name(c.scheduler) << ','
            << (latency_aware ? heuristic_name(c.heuristic) : "none") << ','
            << fixed(latency_aware ? c.uncertainty_factor : 0.0, 2) << ',' << c.num_clients
            << ',' << c.num_workers << ',' << ms_from_us(static_cast<double>(c.laxity_mean_us))
            << ',' << ms_from_us(static_cast<double>(c.wireless_mean_us)) << ','
            << ms_from_us(static_cast<double>(c.wireless_stddev_us)) << ',' << c.seed << ','
            << m.submitted << ',' << m.accepted << ',' << m.rejected << ','
            << m.completed_on_time << ',' << m.missed << ',' << m.in_flight_at_end << ','
            << fixed(m.success_rate, 6) << ',' << fixed(m.miss_rate, 6) << ','
            << ms_from_us(m.mean_response_us) << ',' << ms_from_us(m.mean_fallback_lead_us)
            << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<TaskRecord>& records) {
    out << kTraceCsvHeader << '\n';
    for (const TaskRecord& rec : records) {
        out << rec.id << ',' << rec.client << ',' << rec.submit << ',' << rec.decision << ',';
        if (rec.worker >= 0)
            out << rec.worker;
        out << ',' << rec.dispatches << ',' << rec.preemptions << ',';
        if (rec.has_completion)
            out << rec.completion;
        out << ',' << rec.deadline << ',';
        switch (rec.verdict) {
        case Verdict::Rejected:
            out << "rejected";
            break;
        case Verdict::CompletedOnTime:
            out << "completed_on_time";
            break;
        case Verdict::MissedDeadline:
            out << "missed_deadline";
            break;
        }
        out << '\n';
    }
}

} // namespace rtoff
