#pragma once

#include <optional>
#include <vector>

#include "rtoff/scheduler.hpp"

namespace rtoff {

// Global-EDF record of an accepted, incomplete task (original deadlines).
struct GlobalEntry {
    Task task; // elapsed_execution = last value confirmed by the worker
    bool suspended = false;        // saved context exists on suspended_on
    bool awaiting_suspend = false; // displaced; suspension not yet confirmed
    WorkerId suspended_on = 0;
};

// One shared EDF queue over all workers, with preemption and migration. The
// m running tasks track the m earliest deadlines among incomplete accepted
// tasks. Admission only requires the time to deadline to cover the WCET; no
// deadline adjustment and no per-worker feasibility simulation.
struct GlobalQueueState {
    std::vector<std::optional<GlobalEntry>> running; // indexed by worker
    std::vector<GlobalEntry> pending;                // ordered by (deadline, id)
};

class GlobalEdfScheduler : public SchedulerPolicy {
public:
    explicit GlobalEdfScheduler(int num_workers);

    SubmissionOutcome on_submission(const Task& task, SimTime now) override;
    std::vector<DispatchCommand> on_completion(WorkerId worker, TaskId task_id,
                                               SimTime now) override;
    std::vector<DispatchCommand> on_preempt_ack(WorkerId worker, TaskId task_id,
                                                Duration executed, SimTime now) override;
    bool idle() const override;
    std::size_t task_count() const override;
    void audit() const override;
    std::string name() const override { return "reference"; }

    const GlobalQueueState& state() const { return state_; }

private:
    // Fills free workers from the pending queue in deadline order; resumes in
    // place where possible, migrates (cancel + restart with carried elapsed
    // time) otherwise. If fresh_id is still pending afterwards and outranks
    // the latest running deadline, that worker is preempted for it.
    void dispatch_round(SimTime now, std::optional<TaskId> fresh_id,
                        std::vector<DispatchCommand>& cmds, SubmissionOutcome* out);
    void insert_pending(GlobalEntry entry);

    GlobalQueueState state_;
};

} // namespace rtoff
