#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rtoff {

class CsvError : public std::runtime_error {
public:
    explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

// Reads a metrics CSV and writes one SVG chart per scenario found in it:
// success rate (solid) and miss fraction (dashed) against the scenario's
// swept axis, one series for the reference scheduler and one per uncertainty
// factor, averaged over seeds. Returns the paths written. Malformed rows and
// empty inputs raise CsvError naming the problem.
std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir);

} // namespace rtoff
