#include "rtoff/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rtoff/harness.hpp"

namespace rtoff {

namespace {

struct CsvRow {
    int scenario = 0;
    std::string scheduler;
    double u_factor = 0.0;
    double clients = 0.0;
    double laxity_mean_ms = 0.0;
    double latency_std_ms = 0.0;
    double success_rate = 0.0;
    double miss_rate = 0.0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_field(const std::string& value, int row_no, const std::string& name) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw CsvError("row " + std::to_string(row_no) + ": bad " + name + " value '" +
                       value + "'");
    }
}

std::vector<CsvRow> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw CsvError("cannot open csv file '" + path + "'");

    std::string header;
    if (!std::getline(in, header))
        throw CsvError("csv file '" + path + "' is empty");
    if (header != kMetricsCsvHeader)
        throw CsvError("csv header does not match the metrics schema");

    std::vector<CsvRow> rows;
    std::string line;
    int row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty())
            continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 21)
            throw CsvError("row " + std::to_string(row_no) + ": expected 21 fields, got " +
                           std::to_string(f.size()));
        CsvRow row;
        row.scenario = static_cast<int>(parse_field(f[1], row_no, "scenario"));
        row.scheduler = f[2];
        row.u_factor = parse_field(f[4], row_no, "u_factor");
        row.clients = parse_field(f[5], row_no, "clients");
        row.laxity_mean_ms = parse_field(f[7], row_no, "laxity_mean_ms");
        row.latency_std_ms = parse_field(f[9], row_no, "latency_std_ms");
        row.success_rate = parse_field(f[17], row_no, "success_rate");
        row.miss_rate = parse_field(f[18], row_no, "miss_rate");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw CsvError("csv file '" + path + "' has no data rows");
    return rows;
}

double axis_of(const CsvRow& r) {
    switch (r.scenario) {
    case 2:
        return r.laxity_mean_ms;
    case 3:
        return r.latency_std_ms;
    default:
        return r.clients;
    }
}

// (scheduler, u) series key; the reference sorts ahead of the others.
using SeriesKey = std::pair<int, double>;

std::string series_label(const SeriesKey& key) {
    if (key.first == 0)
        return "reference";
    char buf[32];
    std::snprintf(buf, sizeof buf, "U=%.2f", key.second);
    return buf;
}

const char* kPalette[] = {"#555555", "#1f77b4", "#2ca02c", "#ff7f0e",
                          "#d62728", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct SeriesData {
    // axis value -> (mean success, mean miss) over seeds
    std::map<double, std::pair<double, double>> points;
};

std::string render_scenario_svg(int scenario, const std::map<SeriesKey, SeriesData>& series) {
    const double width = 760, height = 500;
    const double left = 70, right = width - 180, top = 40, bottom = height - 60;

    double xmin = 0, xmax = 0;
    bool first = true;
    for (const auto& [key, data] : series) {
        for (const auto& [x, y] : data.points) {
            if (first) {
                xmin = xmax = x;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    if (xmax == xmin)
        xmax = xmin + 1; // single-point chart still renders

    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
    auto sy = [&](double y) { return bottom - y * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (left + (right - left) / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">Scenario " << scenario
        << ": success rate (solid) and miss fraction (dashed)</text>\n";

    // Axes and gridlines.
    for (int i = 0; i <= 5; ++i) {
        double frac = i / 5.0;
        double y = sy(frac);
        svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(right)
            << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(frac) << "</text>\n";
    }
    std::vector<double> xticks;
    for (const auto& [key, data] : series)
        for (const auto& [x, y] : data.points)
            xticks.push_back(x);
    std::sort(xticks.begin(), xticks.end());
    xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
    for (double x : xticks) {
        svg << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(bottom) << "\" x2=\""
            << num(sx(x)) << "\" y2=\"" << num(bottom + 5) << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(bottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(x) << "</text>\n";
    }
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right)
        << "\" y2=\"" << num(bottom) << "\" stroke=\"#333333\"/>\n";
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(bottom) << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << num(left + (right - left) / 2) << "\" y=\"" << num(height - 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << scenario_axis_label(scenario) << "</text>\n";

    // Series: one color per scheduler variant; success solid, miss dashed.
    int color_idx = 0;
    double legend_y = top + 6;
    for (const auto& [key, data] : series) {
        const char* color = kPalette[color_idx % 8];
        ++color_idx;

        for (int metric = 0; metric < 2; ++metric) {
            std::ostringstream pts;
            for (const auto& [x, y] : data.points) {
                double v = metric == 0 ? y.first : y.second;
                pts << num(sx(x)) << ',' << num(sy(v)) << ' ';
            }
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" "
                << (metric == 1 ? "stroke-dasharray=\"6 4\" " : "") << "points=\""
                << pts.str() << "\"/>\n";
            for (const auto& [x, y] : data.points) {
                double v = metric == 0 ? y.first : y.second;
                svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(v))
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
        }

        svg << "<line x1=\"" << num(right + 16) << "\" y1=\"" << num(legend_y) << "\" x2=\""
            << num(right + 44) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(right + 50) << "\" y=\"" << num(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series_label(key)
            << "</text>\n";
        legend_y += 18;
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir) {
    std::vector<CsvRow> rows = read_metrics_csv(csv_path);

    // scenario -> series -> axis -> accumulated (success, miss, count)
    std::map<int, std::map<SeriesKey, std::map<double, std::array<double, 3>>>> grouped;
    for (const CsvRow& r : rows) {
        SeriesKey key{r.scheduler == "reference" ? 0 : 1,
                      r.scheduler == "reference" ? 0.0 : r.u_factor};
        auto& acc = grouped[r.scenario][key][axis_of(r)];
        acc[0] += r.success_rate;
        acc[1] += r.miss_rate;
        acc[2] += 1.0;
    }

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    for (const auto& [scenario, by_series] : grouped) {
        std::map<SeriesKey, SeriesData> series;
        for (const auto& [key, by_axis] : by_series) {
            SeriesData data;
            for (const auto& [x, acc] : by_axis)
                data.points[x] = {acc[0] / acc[2], acc[1] / acc[2]};
            series[key] = std::move(data);
        }
        std::string path =
            (std::filesystem::path(out_dir) /
             ("plot_scenario" + std::to_string(scenario) + ".svg")).string();
        std::ofstream out(path);
        if (!out)
            throw CsvError("cannot write plot file '" + path + "'");
        out << render_scenario_svg(scenario, series);
        written.push_back(path);
    }
    return written;
}

} // namespace rtoff
