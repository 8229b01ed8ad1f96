#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtoff/core.hpp"

namespace rtoff {

enum class FitHeuristic { FirstFit, BestFit, WorstFit };

struct SchedulerConfig {
    double uncertainty_factor = 1.0; // scales the booked network delay, >= 0
    FitHeuristic heuristic = FitHeuristic::WorstFit;
    int num_workers = 4;
};

enum class RejectReason { PastAdjustedDeadline, NoFeasibleWorker };

// Admission answer returned to the submitting client.
struct Decision {
    bool accepted = false;
    WorkerId worker = 0;
    RejectReason reason = RejectReason::NoFeasibleWorker;

    static Decision accept(WorkerId w) { return Decision{true, w, RejectReason::NoFeasibleWorker}; }
    static Decision reject(RejectReason r) { return Decision{false, 0, r}; }
};

// A task after the latency-aware deadline tightening. expected_delay is the
// observed client-to-scheduler transit, adjusted_delay additionally accounts
// for a connection setup that outlasts the execution.
struct AdjustedTask {
    Task task;
    SimTime adjusted_deadline = 0;
    Duration expected_delay = 0;
    Duration adjusted_delay = 0;
};

// Scheduler-side record of an accepted, incomplete task.
struct QueuedTask {
    Task task; // elapsed_execution = last value confirmed by the worker
    SimTime adjusted_deadline = 0;
    Duration expected_delay = 0;
    Duration adjusted_delay = 0;
    bool suspended = false;        // has a saved context on this queue's worker
    bool awaiting_suspend = false; // displaced; preemption not yet confirmed
};

// Per-worker EDF queue. At most one task is ever dispatched to the worker;
// everything else waits here, ordered by (adjusted_deadline, task id).
struct WorkerQueueState {
    WorkerId worker = 0;
    std::optional<QueuedTask> running;
    std::vector<QueuedTask> pending;
};

// Derives the adjusted deadline from the client-reported timing fields.
// The expected delay is clamped at zero so clock anomalies never loosen a
// deadline, and the scaled adjustment is rounded half away from zero.
AdjustedTask adjust_deadline(const Task& task, SimTime now, const SchedulerConfig& config);

// First acceptance gate: the time to the adjusted deadline must be strictly
// greater than the remaining execution bound.
bool admission_precheck(const AdjustedTask& adj, SimTime now);

struct FeasibleSchedule {
    // (task id, predicted finish time), in execution order.
    std::vector<std::pair<TaskId, SimTime>> finish_times;
};

// Simulates single-worker preemptive EDF over the queue contents plus the
// candidate, all treated as released now. Returns the predicted finish times
// iff every task finishes by its adjusted deadline and the candidate also
// passes its own strict precheck; empty otherwise. Dispatch latency between
// scheduler and worker is not charged here.
std::optional<FeasibleSchedule> feasible_with(const WorkerQueueState& queue,
                                              const QueuedTask& candidate, SimTime now);

// Sum of task densities over running + pending + candidate, measured against
// adjusted deadlines. Finished tasks contribute zero; a task whose adjusted
// deadline has already passed makes the result infinite, so callers must
// filter queues through feasible_with first.
double queue_density(const WorkerQueueState& queue, const QueuedTask& candidate, SimTime now);

// Picks the target worker among feasible ones. FirstFit takes the lowest
// worker id, BestFit the highest total density, WorstFit the lowest; density
// ties resolve to the lowest worker id.
WorkerId select_worker(const std::map<WorkerId, double>& feasible, FitHeuristic heuristic);

// Instruction from a scheduling decision to the simulation fabric.
struct DispatchCommand {
    enum class Kind { Start, Resume, CancelSuspended };
    Kind kind = Kind::Start;
    WorkerId worker = 0;
    TaskId task_id = 0;
    Task task; // populated for Start (fresh dispatch or migration)
};

struct SubmissionOutcome {
    Decision decision;
    std::vector<DispatchCommand> commands;
    bool preempted = false;
    TaskId preempted_task = 0;
    // Populated by the latency-aware scheduler for tracing.
    bool has_adjustment = false;
    SimTime adjusted_deadline = 0;
    Duration expected_delay = 0;
    Duration adjusted_delay = 0;
};

// Common driving surface for the latency-aware scheduler and the reference
// baseline. Implementations are passive state machines; the event loop calls
// in with the current simulation time.
class SchedulerPolicy {
public:
    virtual ~SchedulerPolicy() = default;

    virtual SubmissionOutcome on_submission(const Task& task, SimTime now) = 0;

    // The worker finished task_id; frees the slot and dispatches a successor.
    virtual std::vector<DispatchCommand> on_completion(WorkerId worker, TaskId task_id,
                                                       SimTime now) = 0;

    // The worker confirmed a suspension with the executed time so far.
    virtual std::vector<DispatchCommand> on_preempt_ack(WorkerId worker, TaskId task_id,
                                                        Duration executed, SimTime now) = 0;

    virtual bool idle() const = 0;
    virtual std::size_t task_count() const = 0;
    virtual void audit() const = 0; // throws on internal inconsistency
    virtual std::string name() const = 0;
};

// The latency-aware partitioned-EDF scheduler: deadline adjustment, strict
// admission precheck, per-worker queue-copy feasibility simulation, fit
// heuristic selection, and preemption control.
class PartitionedEdfScheduler : public SchedulerPolicy {
public:
    explicit PartitionedEdfScheduler(SchedulerConfig config);

    SubmissionOutcome on_submission(const Task& task, SimTime now) override;
    std::vector<DispatchCommand> on_completion(WorkerId worker, TaskId task_id,
                                               SimTime now) override;
    std::vector<DispatchCommand> on_preempt_ack(WorkerId worker, TaskId task_id,
                                                Duration executed, SimTime now) override;
    bool idle() const override;
    std::size_t task_count() const override;
    void audit() const override;
    std::string name() const override { return "latency_aware"; }

    const SchedulerConfig& config() const { return config_; }
    const WorkerQueueState& queue(WorkerId worker) const;
    // Test hook: preloads a queue with running/pending tasks.
    WorkerQueueState& mutable_queue(WorkerId worker);

private:
    void insert_pending(WorkerQueueState& q, QueuedTask entry);

    SchedulerConfig config_;
    std::vector<WorkerQueueState> queues_;
};

} // namespace rtoff
