#pragma once

#include <memory>
#include <vector>

#include "rtoff/baseline.hpp"
#include "rtoff/client.hpp"
#include "rtoff/core.hpp"
#include "rtoff/event_queue.hpp"
#include "rtoff/link.hpp"
#include "rtoff/scheduler.hpp"
#include "rtoff/worker.hpp"

namespace rtoff {

enum class SchedulerKind { LatencyAware, Reference };

// Everything that determines one run, network and workload included.
struct WorldConfig {
    SchedulerKind kind = SchedulerKind::LatencyAware;
    SchedulerConfig scheduler;
    int num_clients = 30;
    ClientConfig client;
    LinkModel wireless;                       // client <-> infrastructure
    LinkModel wired{200, 0, 0, std::nullopt}; // scheduler <-> workers
    Duration context_switch_cost = 0;
    SimTime duration = 60'000'000;
    std::uint64_t seed = 1;
};

// Full lifecycle of one task, kept for traces and assertions.
struct TaskRecord {
    TaskId id = 0;
    ClientId client = 0;
    SimTime submit = 0;
    SimTime decision = 0;
    SimTime completion = 0;
    SimTime resolved_at = 0; // when the outcome reached the client
    SimTime deadline = 0;
    Duration creation_laxity = 0;
    bool decided = false;
    bool resolved = false;
    bool has_completion = false;
    Verdict verdict = Verdict::Rejected;
    RejectReason reject_reason = RejectReason::NoFeasibleWorker;
    bool accepted = false;
    int worker = -1;
    int dispatches = 0;
    int preemptions = 0;
    // Adjustment diagnostics from the latency-aware scheduler.
    bool adjusted = false;
    SimTime adjusted_deadline = 0;
    Duration expected_delay = 0;
    Duration adjusted_delay = 0;
};

// One simulation world: a seeded event loop, one scheduler, the workers and
// the clients, connected by sampled links. Messages that share a persistent
// connection (client->scheduler, scheduler->worker, worker->scheduler,
// scheduler->client) are delivered in order, like a byte stream; per-task
// result connections are independent.
class World {
public:
    struct Totals {
        std::int64_t submitted = 0;
        std::int64_t accepted = 0;
        std::int64_t rejected = 0;
        std::int64_t on_time = 0;
        std::int64_t missed = 0;
        std::int64_t preemptions = 0;
        std::int64_t response_sum = 0;
        std::int64_t fallback_lead_sum = 0;
    };

    explicit World(const WorldConfig& config);

    // Generates the workload up to the configured duration, drains every
    // outstanding task to an outcome, then validates the accounting.
    void run();

    const Totals& totals() const { return totals_; }
    const std::vector<TaskRecord>& records() const { return records_; }
    const EventQueue& queue() const { return queue_; }
    const SchedulerPolicy& policy() const { return *policy_; }

private:
    void schedule_next_submission(ClientId c);
    void submit(ClientId c);
    void scheduler_receive(const Task& task);
    void execute_commands(const std::vector<DispatchCommand>& cmds);
    void deliver_result(const Task& task, SimTime send_time);
    void client_outcome(TaskId id, Verdict verdict);
    TaskRecord& record(TaskId id);
    void validate_end_state();

    // Ordered delivery over a persistent connection: the arrival time never
    // precedes the previous arrival on the same channel.
    SimTime channel_send(SimTime& channel_last, const LinkModel& link, std::int64_t bytes);

    WorldConfig cfg_;
    EventQueue queue_;
    Rng rng_;
    std::unique_ptr<SchedulerPolicy> policy_;
    std::vector<std::unique_ptr<WorkerAgent>> workers_;
    std::vector<ClientState> clients_;

    std::vector<SimTime> ch_client_to_sched_;
    std::vector<SimTime> ch_sched_to_client_;
    std::vector<SimTime> ch_sched_to_worker_;
    std::vector<SimTime> ch_worker_to_sched_;

    std::vector<TaskRecord> records_; // index = task id - 1
    Totals totals_;
    TaskId next_task_id_ = 1;
    bool ran_ = false;
};

} // namespace rtoff
