#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtoff/check.hpp"
#include "rtoff/harness.hpp"
#include "rtoff/plot.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fill) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw rtoff::ConfigError("cannot write '" + path.string() + "'");
    fill(out);
}

void print_summary(const rtoff::ResultRow& row) {
    const rtoff::RunMetrics& m = row.metrics;
    std::printf("scheduler=%s u=%.2f clients=%d workers=%d seed=%llu\n",
                rtoff::scheduler_name(row.config.scheduler).c_str(),
                row.config.uncertainty_factor, row.config.num_clients,
                row.config.num_workers,
                static_cast<unsigned long long>(row.config.seed));
    std::printf("  submitted=%lld accepted=%lld rejected=%lld on_time=%lld missed=%lld\n",
                static_cast<long long>(m.submitted), static_cast<long long>(m.accepted),
                static_cast<long long>(m.rejected),
                static_cast<long long>(m.completed_on_time),
                static_cast<long long>(m.missed));
    std::printf("  success_rate=%.4f miss_rate=%.4f acceptance_rate=%.4f "
                "mean_response=%.1fms\n",
                m.success_rate, m.miss_rate, m.acceptance_rate,
                m.mean_response_us / 1000.0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latency-aware real-time task offloading simulator"};
    app.require_subcommand(1);

    bool trace = false;
    app.add_flag("--trace", trace, "also write per-task trace CSV files");

    // run
    auto* run_cmd = app.add_subcommand("run", "run one scenario from a config file");
    std::string config_path;
    std::string run_out = "out";
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    run_cmd->add_option("--config", config_path, "key=value config file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_override, "override the config seed");
    run_cmd->add_option("--out", run_out, "output directory (default: out)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario parameter sweep");
    int scenario = 1;
    std::vector<double> u_values;
    std::vector<std::uint64_t> seeds;
    std::string sweep_out = "out";
    sweep_cmd->add_option("--scenario", scenario, "scenario number: 1, 2 or 3")
        ->required()
        ->check(CLI::Range(1, 3));
    sweep_cmd->add_option("--u", u_values,
                          "uncertainty factors (default: 0.5 0.75 1.0 1.25)");
    sweep_cmd->add_option("--seeds", seeds, "seeds (default: 1 2 3 4 5)");
    sweep_cmd->add_option("--out", sweep_out, "output directory (default: out)");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render charts from a metrics CSV");
    std::string csv_path;
    std::string plot_out = "out";
    plot_cmd->add_option("--csv", csv_path, "metrics CSV produced by run/sweep")->required();
    plot_cmd->add_option("--out", plot_out, "output directory (default: out)");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        if (*run_cmd) {
            rtoff::ScenarioConfig cfg = rtoff::parse_config_file(config_path);
            if (seed_set)
                cfg.seed = seed_override;

            std::vector<rtoff::TaskRecord> records;
            rtoff::ResultRow row;
            row.run_id = 1;
            row.scenario = 0;
            row.config = cfg;
            row.metrics = rtoff::run_scenario(cfg, &records);

            fs::path dir(run_out);
            write_file(dir / "run.csv", [&](std::ostream& out) {
                rtoff::write_metrics_csv(out, {row});
            });
            if (trace) {
                write_file(dir / "trace.csv", [&](std::ostream& out) {
                    rtoff::write_trace_csv(out, records);
                });
            }
            print_summary(row);
            std::printf("wrote %s\n", (dir / "run.csv").string().c_str());
        } else if (*sweep_cmd) {
            if (u_values.empty())
                u_values = rtoff::default_u_values();
            if (seeds.empty())
                seeds = rtoff::default_seeds();

            std::vector<std::vector<rtoff::TaskRecord>> traces;
            std::vector<rtoff::ResultRow> rows =
                rtoff::run_sweep(scenario, u_values, seeds, trace ? &traces : nullptr);

            fs::path dir(sweep_out);
            fs::path csv = dir / ("scenario" + std::to_string(scenario) + ".csv");
            write_file(csv, [&](std::ostream& out) {
                rtoff::write_metrics_csv(out, rows);
            });
            if (trace) {
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    char name[64];
                    std::snprintf(name, sizeof name, "trace_run%03d.csv", rows[i].run_id);
                    write_file(dir / name, [&](std::ostream& out) {
                        rtoff::write_trace_csv(out, traces[i]);
                    });
                }
            }
            std::printf("wrote %s (%zu rows)\n", csv.string().c_str(), rows.size());
        } else if (*plot_cmd) {
            std::vector<std::string> files = rtoff::emit_plots(csv_path, plot_out);
            for (const std::string& f : files)
                std::printf("wrote %s\n", f.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
