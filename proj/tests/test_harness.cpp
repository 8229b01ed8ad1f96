#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rtoff/check.hpp"
#include "rtoff/harness.hpp"
#include "rtoff/plot.hpp"

using namespace rtoff;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rtoff_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string csv_of(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_metrics_csv(out, rows);
    return out.str();
}

} // namespace

TEST_CASE("config text parses every field") {
    std::string text =
        "# comment line\n"
        "scheduler = reference\n"
        "heuristic = best_fit\n"
        "num_clients = 12\n"
        "num_workers = 3\n"
        "uncertainty_factor = 1.25\n"
        "arrival_rate = 2.5\n"
        "laxity_mean_us = 150000\n"
        "laxity_stddev_us = 10000\n"
        "actual_exec_us = 20000\n"
        "wcet_us = 90000\n"
        "result_payload_bytes = 4096\n"
        "wireless_mean_us = 25000   # trailing comment\n"
        "wireless_stddev_us = 5000\n"
        "wired_mean_us = 300\n"
        "wired_stddev_us = 10\n"
        "duration_s = 30\n"
        "seed = 99\n";
    ScenarioConfig cfg = parse_config_text(text, "test");
    CHECK(cfg.scheduler == SchedulerKind::Reference);
    CHECK(cfg.heuristic == FitHeuristic::BestFit);
    CHECK(cfg.num_clients == 12);
    CHECK(cfg.num_workers == 3);
    CHECK(cfg.uncertainty_factor == doctest::Approx(1.25));
    CHECK(cfg.arrival_rate == doctest::Approx(2.5));
    CHECK(cfg.laxity_mean_us == 150'000);
    CHECK(cfg.resolved_laxity_stddev() == 10'000);
    CHECK(cfg.actual_exec_us == 20'000);
    CHECK(cfg.wcet_us == 90'000);
    CHECK(cfg.result_payload_bytes == 4096);
    CHECK(cfg.wireless_mean_us == 25'000);
    CHECK(cfg.wireless_stddev_us == 5'000);
    CHECK(cfg.wired_mean_us == 300);
    CHECK(cfg.wired_stddev_us == 10);
    CHECK(cfg.duration_s == doctest::Approx(30.0));
    CHECK(cfg.seed == 99);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("num_clients = many\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just a line\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("num_workers = 0\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("uncertainty_factor = -1\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("wcet_us = 10000\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/rtoff.conf"), ConfigError);
}

TEST_CASE("laxity stddev defaults to a fifth of the mean") {
    ScenarioConfig cfg = parse_config_text("laxity_mean_us = 150000\n", "t");
    CHECK(cfg.resolved_laxity_stddev() == 30'000);
}

TEST_CASE("an unloaded deterministic run succeeds completely") {
    ScenarioConfig cfg;
    cfg.num_clients = 1;
    cfg.num_workers = 1;
    cfg.laxity_mean_us = 2'000'000; // huge laxity
    cfg.laxity_stddev_us = 0;
    cfg.wireless_stddev_us = 0;
    cfg.duration_s = 10.0;
    RunMetrics m = run_scenario(cfg);
    CHECK(m.submitted > 0);
    CHECK(m.rejected == 0);
    CHECK(m.missed == 0);
    CHECK(m.success_rate == doctest::Approx(1.0));
    CHECK(m.in_flight_at_end == 0);
}

TEST_CASE("sweep emits one row per scenario point, scheduler and seed") {
    std::vector<ResultRow> rows = run_sweep(2, {1.0}, {1});
    // 5 laxity points x (reference + one factor) x 1 seed.
    REQUIRE(rows.size() == 10);
    CHECK(rows[0].config.scheduler == SchedulerKind::Reference);
    CHECK(rows[1].config.scheduler == SchedulerKind::LatencyAware);
    // Scenario 2 sweeps the laxity mean downwards.
    CHECK(rows[0].config.laxity_mean_us == 180'000);
    CHECK(rows[2].config.laxity_mean_us == 150'000);
    CHECK(rows[8].config.laxity_mean_us == 60'000);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(rows[i].run_id == static_cast<int>(i + 1));
}

TEST_CASE("metrics csv has the exact schema and stable bytes") {
    ScenarioConfig cfg;
    cfg.num_clients = 3;
    cfg.duration_s = 5.0;
    ResultRow row;
    row.run_id = 1;
    row.scenario = 0;
    row.config = cfg;
    row.metrics = run_scenario(cfg);

    std::string csv = csv_of({row});
    std::istringstream in(csv);
    std::string header, data;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, data));
    CHECK(header == kMetricsCsvHeader);
    CHECK(std::count(header.begin(), header.end(), ',') == 20);
    CHECK(std::count(data.begin(), data.end(), ',') == 20);

    // Re-running the same config reproduces the same bytes.
    ResultRow again = row;
    again.metrics = run_scenario(cfg);
    CHECK(csv_of({again}) == csv);
}

TEST_CASE("trace csv marks rejected tasks with empty worker and completion") {
    ScenarioConfig cfg;
    cfg.num_clients = 20;
    cfg.num_workers = 1;
    cfg.duration_s = 10.0;
    std::vector<TaskRecord> records;
    run_scenario(cfg, &records);
    REQUIRE(!records.empty());

    std::ostringstream out;
    write_trace_csv(out, records);
    std::istringstream in(out.str());
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == kTraceCsvHeader);

    bool saw_rejected = false;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const TaskRecord& rec = records[row++];
        if (rec.verdict == Verdict::Rejected) {
            saw_rejected = true;
            CHECK(line.find(",,") != std::string::npos);
            CHECK(line.substr(line.size() - 8) == "rejected");
        }
    }
    CHECK(row == records.size());
    CHECK(saw_rejected);
}

TEST_CASE("plots render from a csv and reject bad input") {
    TempDir dir;
    fs::path csv = dir.path / "metrics.csv";

    SUBCASE("a sweep csv yields one svg per scenario") {
        std::vector<ResultRow> rows = run_sweep(3, {0.5}, {1});
        std::ofstream out(csv);
        write_metrics_csv(out, rows);
        out.close();

        auto files = emit_plots(csv.string(), (dir.path / "plots").string());
        REQUIRE(files.size() == 1);
        CHECK(files[0].find("plot_scenario3.svg") != std::string::npos);
        std::ifstream svg(files[0]);
        std::string content((std::istreambuf_iterator<char>(svg)),
                            std::istreambuf_iterator<char>());
        CHECK(content.find("<svg") == 0);
        CHECK(content.find("reference") != std::string::npos);
        CHECK(content.find("U=0.50") != std::string::npos);
    }

    SUBCASE("a single-row csv still renders a chart") {
        ScenarioConfig cfg;
        cfg.num_clients = 2;
        cfg.duration_s = 5.0;
        ResultRow row;
        row.run_id = 1;
        row.scenario = 1;
        row.config = cfg;
        row.metrics = run_scenario(cfg);
        std::ofstream out(csv);
        write_metrics_csv(out, {row});
        out.close();
        auto files = emit_plots(csv.string(), (dir.path / "plots").string());
        CHECK(files.size() == 1);
    }

    SUBCASE("an empty csv is an error and writes nothing") {
        std::ofstream out(csv);
        out << kMetricsCsvHeader << "\n";
        out.close();
        CHECK_THROWS_AS(emit_plots(csv.string(), (dir.path / "plots").string()), CsvError);
        CHECK_FALSE(fs::exists(dir.path / "plots" / "plot_scenario1.svg"));
    }

    SUBCASE("a malformed row is reported by number") {
        std::ofstream out(csv);
        out << kMetricsCsvHeader << "\n";
        out << "1,1,latency_aware,worst_fit,1.00,10\n"; // too few fields
        out.close();
        try {
            emit_plots(csv.string(), (dir.path / "plots").string());
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        }
    }
}
