#pragma once

#include <cstdint>
#include <optional>

#include "rtoff/core.hpp"
#include "rtoff/link.hpp"

namespace rtoff {

// Workload shape for one client. Laxity is the slack added on top of the
// WCET when the client picks a relative deadline.
struct ClientConfig {
    double arrival_rate = 1.0;        // tasks per second
    Duration laxity_mean = 100'000;
    Duration laxity_stddev = 20'000;
    Duration actual_exec = 30'000;
    Duration wcet = 100'000;
    std::int64_t result_payload_bytes = 0;
};

// Earliest time the next task may be submitted. Clients are strictly single
// in flight: the sporadic interval is drawn from the previous submission, but
// submission waits for the previous task's outcome.
SimTime next_submission_time(SimTime prev_submission, SimTime prev_outcome,
                             const ClientConfig& config, Rng& rng);

// Builds a fresh task at submission time. The laxity sample is clamped at
// zero, and the connection setup field carries a handshake measurement taken
// on the wireless link at this submission.
Task make_task(TaskId id, ClientId client, SimTime now, const ClientConfig& config,
               const LinkModel& wireless, Rng& rng);

// Per-client bookkeeping driven by the event loop.
struct ClientState {
    ClientId id = 0;
    ClientConfig config;

    std::optional<TaskId> in_flight;
    SimTime prev_submission = 0;
    SimTime prev_outcome = 0;
    bool submitted_before = false;

    std::int64_t submitted = 0;
    std::int64_t rejected = 0;
    std::int64_t on_time = 0;
    std::int64_t missed = 0;
    // Accumulators for run-level means.
    std::int64_t response_sum = 0;      // completion - submit, completed tasks
    std::int64_t fallback_lead_sum = 0; // creation laxity - rejection latency

    void note_submission(TaskId task, SimTime now);
    // Records the outcome of the in-flight task. creation_laxity is the
    // task's laxity at creation time (relative deadline minus WCET).
    void note_outcome(const TaskOutcome& outcome, Duration creation_laxity, SimTime now);
};

} // namespace rtoff
