#pragma once

#include <cstdint>
#include <optional>

namespace rtoff {

// All simulation time is integer microseconds since run start. Durations use
// the same unit; there is no floating-point time anywhere in the system.
using SimTime = std::int64_t;
using Duration = std::int64_t;

using TaskId = std::uint64_t;
using ClientId = std::uint32_t;
using WorkerId = std::uint32_t;

// The offloaded unit of work, as shared between client, scheduler and worker.
struct Task {
    TaskId id = 0;
    ClientId client = 0;
    SimTime absolute_deadline = 0;          // fixed by the client at creation
    Duration initial_relative_deadline = 0; // relative deadline at creation
    Duration connection_setup_time = 0;     // handshake time measured by the client
    Duration wcet = 0;                      // worst-case execution time
    Duration elapsed_execution = 0;         // execution time spent so far
    std::int64_t params_bytes = 0;          // input payload, size only
    std::int64_t result_payload_bytes = 0;  // result payload, size only

    // Real compute demand used by the simulated worker. The scheduler never
    // reads it; it plans with the WCET.
    Duration actual_execution = 0;
};

enum class Verdict { Rejected, CompletedOnTime, MissedDeadline };

// Exactly one outcome exists per submitted task per run. A task counts as on
// time iff its result reached the client at or before the original deadline.
struct TaskOutcome {
    TaskId task_id = 0;
    Verdict verdict = Verdict::Rejected;
    SimTime submit_time = 0;
    SimTime decision_time = 0;
    std::optional<SimTime> completion_time; // absent for rejected tasks
};

// Execution time still owed against the planning bound. Never negative.
inline Duration remaining_wcet(const Task& t) {
    Duration rem = t.wcet - t.elapsed_execution;
    return rem > 0 ? rem : 0;
}

// Slack between now and the deadline after reserving the remaining WCET.
// May be negative for expired or overloaded tasks.
inline Duration laxity(const Task& t, SimTime now) {
    return t.absolute_deadline - now - remaining_wcet(t);
}

// Remaining WCET per unit of time to deadline. The deadline must still be in
// the future; callers get an empty result otherwise and must treat the task
// as infeasible rather than divide.
inline std::optional<double> density(Duration remaining, SimTime deadline, SimTime now) {
    if (deadline <= now)
        return std::nullopt;
    if (remaining <= 0)
        return 0.0;
    return static_cast<double>(remaining) / static_cast<double>(deadline - now);
}

inline std::optional<double> density(const Task& t, SimTime now) {
    return density(remaining_wcet(t), t.absolute_deadline, now);
}

} // namespace rtoff
