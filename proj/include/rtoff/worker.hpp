#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rtoff/core.hpp"
#include "rtoff/event_queue.hpp"
#include "rtoff/link.hpp"

namespace rtoff {

// Simulated worker: executes one task at a time, opens the client connection
// in parallel with the computation, suspends the running task when another
// one arrives, and resumes suspended tasks on scheduler command. The paper
// architecture's worker-internal threads appear here as concurrent events.
class WorkerAgent {
public:
    struct Hooks {
        // Fired when a running execution is suspended; carries the executed
        // time so far (preemption-excluded).
        std::function<void(TaskId, Duration executed)> suspended;
        // Fired at execution completion with the final elapsed time.
        std::function<void(TaskId, Duration elapsed)> completed;
        // Fired at completion with the earliest instant the result can leave:
        // execution end or connection readiness, whichever is later.
        std::function<void(const Task&, SimTime send_time)> result_ready;
    };

    WorkerAgent(WorkerId id, EventQueue& queue, Rng& rng, LinkModel client_link,
                Duration context_switch_cost, Hooks hooks);

    // Fresh dispatch (or migration with carried elapsed time). Suspends any
    // execution in progress and starts this one; connection setup to the
    // client begins immediately, racing the computation.
    void on_receive_task(const Task& task);

    // Scheduler-commanded resume of a suspended execution. The open client
    // connection from the first dispatch is reused. Suspends the current
    // execution first if one is in progress.
    void on_resume(TaskId task_id);

    // Drops a suspended context (the scheduler restarted the task elsewhere).
    void on_cancel_suspended(TaskId task_id);

    WorkerId id() const { return id_; }
    bool idle() const { return !current_.has_value(); }
    bool drained() const { return !current_ && suspended_.empty(); }
    std::size_t suspended_count() const { return suspended_.size(); }

private:
    struct Execution {
        Task task;
        Duration executed_before = 0; // accumulated over earlier segments
        SimTime segment_start = 0;    // when the current segment makes progress
        SimTime conn_ready_at = 0;
        std::uint64_t epoch = 0;
    };

    void displace_current(); // suspend, or complete on an exact tie
    void suspend_current();
    void start_segment(Execution ex);
    void on_exec_complete(TaskId task_id, std::uint64_t epoch);
    bool known(TaskId id) const;

    WorkerId id_;
    EventQueue& queue_;
    Rng& rng_;
    LinkModel client_link_;
    Duration context_switch_cost_;
    Hooks hooks_;

    std::optional<Execution> current_;
    std::vector<Execution> suspended_; // suspension order; most recent last
    std::uint64_t next_epoch_ = 1;
};

} // namespace rtoff
