#pragma once

#include <stdexcept>
#include <string>

namespace rtoff {

// Invalid configuration detected before a run starts.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency violation; the run that raised it is unusable.
class SimulationError : public std::logic_error {
public:
    explicit SimulationError(const std::string& what) : std::logic_error(what) {}
};

namespace detail {
[[noreturn]] inline void check_failed(const char* expr, const char* file, int line,
                                      const std::string& msg) {
    std::string full = std::string(file) + ":" + std::to_string(line) +
                       ": check failed: " + expr;
    if (!msg.empty())
        full += " (" + msg + ")";
    throw SimulationError(full);
}
} // namespace detail

// Always-on consistency check. These guard simulation bookkeeping that must
// never be wrong regardless of build type; violations abort the run.
#define RTOFF_CHECK(cond)                                                      \
    do {                                                                       \
        if (!(cond))                                                           \
            ::rtoff::detail::check_failed(#cond, __FILE__, __LINE__, "");      \
    } while (0)

#define RTOFF_CHECK_MSG(cond, msg)                                             \
    do {                                                                       \
        if (!(cond))                                                           \
            ::rtoff::detail::check_failed(#cond, __FILE__, __LINE__, (msg));   \
    } while (0)

} // namespace rtoff
