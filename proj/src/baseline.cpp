#include "rtoff/baseline.hpp"

#include <algorithm>
#include <set>

#include "rtoff/check.hpp"

namespace rtoff {

namespace {

std::pair<SimTime, TaskId> edf_key(const GlobalEntry& e) {
    return {e.task.absolute_deadline, e.task.id};
}

bool edf_before(const GlobalEntry& a, const GlobalEntry& b) {
    return edf_key(a) < edf_key(b);
}

} // namespace

GlobalEdfScheduler::GlobalEdfScheduler(int num_workers) {
    RTOFF_CHECK_MSG(num_workers >= 1, "need at least one worker");
    state_.running.resize(static_cast<std::size_t>(num_workers));
}

void GlobalEdfScheduler::insert_pending(GlobalEntry entry) {
    auto it = std::lower_bound(state_.pending.begin(), state_.pending.end(), entry, edf_before);
    state_.pending.insert(it, std::move(entry));
}

SubmissionOutcome GlobalEdfScheduler::on_submission(const Task& task, SimTime now) {
    SubmissionOutcome out;
    // The reference admission test: reject only when the time to deadline is
    // already less than the WCET. Equal is accepted.
    if (task.absolute_deadline - now < task.wcet) {
        out.decision = Decision::reject(RejectReason::PastAdjustedDeadline);
        return out;
    }

    GlobalEntry entry;
    entry.task = task;
    insert_pending(std::move(entry));

    dispatch_round(now, task.id, out.commands, &out);

    // Worker assignment for the decision record: the running slot when the
    // task went out immediately, otherwise it waits in the global queue and
    // the worker is only known at dispatch time.
    WorkerId assigned = 0;
    for (std::size_t w = 0; w < state_.running.size(); ++w) {
        if (state_.running[w] && state_.running[w]->task.id == task.id) {
            assigned = static_cast<WorkerId>(w);
            break;
        }
    }
    out.decision = Decision::accept(assigned);
    audit();
    return out;
}

void GlobalEdfScheduler::dispatch_round(SimTime now, std::optional<TaskId> contender_id,
                                        std::vector<DispatchCommand>& cmds,
                                        SubmissionOutcome* out) {
    (void)now;
    // Feed idle workers with the earliest-deadline dispatchable tasks. A task
    // whose suspension is still unconfirmed cannot be restarted yet.
    for (;;) {
        std::optional<WorkerId> free_worker;
        for (std::size_t w = 0; w < state_.running.size(); ++w) {
            if (!state_.running[w]) {
                free_worker = static_cast<WorkerId>(w);
                break;
            }
        }
        if (!free_worker)
            break;

        auto it = std::find_if(state_.pending.begin(), state_.pending.end(),
                               [](const GlobalEntry& e) { return !e.awaiting_suspend; });
        if (it == state_.pending.end())
            break;

        GlobalEntry entry = *it;
        state_.pending.erase(it);

        WorkerId target = *free_worker;
        if (entry.suspended && !state_.running[entry.suspended_on]) {
            // Resume in place; avoids re-sending the task.
            target = entry.suspended_on;
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::Resume, target,
                                           entry.task.id, Task{}});
        } else if (entry.suspended) {
            // Migrate: drop the saved context and restart elsewhere with the
            // elapsed execution carried over.
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::CancelSuspended,
                                           entry.suspended_on, entry.task.id, Task{}});
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::Start, target,
                                           entry.task.id, entry.task});
        } else {
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::Start, target,
                                           entry.task.id, entry.task});
        }
        entry.suspended = false;
        state_.running[target] = std::move(entry);
    }

    // Preemption: a task that just became schedulable (fresh arrival, or a
    // suspension ack that made it dispatchable again) displaces the latest
    // running deadline when it strictly outranks it.
    if (!contender_id)
        return;
    auto cont_it = std::find_if(state_.pending.begin(), state_.pending.end(),
                                [&](const GlobalEntry& e) { return e.task.id == *contender_id; });
    if (cont_it == state_.pending.end())
        return;

    std::optional<WorkerId> latest;
    for (std::size_t w = 0; w < state_.running.size(); ++w) {
        if (!state_.running[w])
            continue;
        if (!latest || edf_key(*state_.running[w]) > edf_key(*state_.running[*latest]))
            latest = static_cast<WorkerId>(w);
    }
    RTOFF_CHECK(latest.has_value()); // all slots filled, else the task was dispatched

    if (cont_it->task.absolute_deadline >= state_.running[*latest]->task.absolute_deadline)
        return;

    GlobalEntry displaced = *state_.running[*latest];
    displaced.awaiting_suspend = true;
    if (out) {
        out->preempted = true;
        out->preempted_task = displaced.task.id;
    }
    GlobalEntry contender = *cont_it;
    state_.pending.erase(cont_it);
    insert_pending(std::move(displaced));

    WorkerId target = *latest;
    if (contender.suspended && contender.suspended_on == target) {
        cmds.push_back(DispatchCommand{DispatchCommand::Kind::Resume, target,
                                       contender.task.id, Task{}});
    } else {
        if (contender.suspended)
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::CancelSuspended,
                                           contender.suspended_on, contender.task.id, Task{}});
        cmds.push_back(DispatchCommand{DispatchCommand::Kind::Start, target,
                                       contender.task.id, contender.task});
    }
    contender.suspended = false;
    state_.running[target] = std::move(contender);
}

std::vector<DispatchCommand> GlobalEdfScheduler::on_completion(WorkerId worker, TaskId task_id,
                                                               SimTime now) {
    RTOFF_CHECK(worker < state_.running.size());
    if (state_.running[worker] && state_.running[worker]->task.id == task_id) {
        state_.running[worker].reset();
    } else {
        // Completed on the worker before a preemption dispatch arrived.
        auto it = std::find_if(state_.pending.begin(), state_.pending.end(),
                               [&](const GlobalEntry& e) { return e.task.id == task_id; });
        RTOFF_CHECK_MSG(it != state_.pending.end(), "completion for unknown task");
        state_.pending.erase(it);
    }

    std::vector<DispatchCommand> cmds;
    dispatch_round(now, std::nullopt, cmds, nullptr);
    audit();
    return cmds;
}

std::vector<DispatchCommand> GlobalEdfScheduler::on_preempt_ack(WorkerId worker, TaskId task_id,
                                                                Duration executed, SimTime now) {
    auto it = std::find_if(state_.pending.begin(), state_.pending.end(),
                           [&](const GlobalEntry& e) { return e.task.id == task_id; });
    RTOFF_CHECK_MSG(it != state_.pending.end(), "suspension ack for unknown task");
    RTOFF_CHECK(it->awaiting_suspend);
    it->awaiting_suspend = false;
    it->suspended = true;
    it->suspended_on = worker;
    it->task.elapsed_execution = executed;

    // A free worker may have been waiting for this confirmation, and the task
    // may outrank something dispatched in the meantime.
    std::vector<DispatchCommand> cmds;
    dispatch_round(now, task_id, cmds, nullptr);
    audit();
    return cmds;
}

bool GlobalEdfScheduler::idle() const {
    if (!state_.pending.empty())
        return false;
    for (const auto& r : state_.running)
        if (r)
            return false;
    return true;
}

std::size_t GlobalEdfScheduler::task_count() const {
    std::size_t n = state_.pending.size();
    for (const auto& r : state_.running)
        if (r)
            ++n;
    return n;
}

void GlobalEdfScheduler::audit() const {
    std::set<TaskId> seen;
    SimTime latest_running = -1;
    bool any_free = false;
    for (const auto& r : state_.running) {
        if (!r) {
            any_free = true;
            continue;
        }
        RTOFF_CHECK_MSG(seen.insert(r->task.id).second, "task in two slots");
        latest_running = std::max(latest_running, r->task.absolute_deadline);
    }
    for (std::size_t i = 0; i < state_.pending.size(); ++i) {
        const GlobalEntry& e = state_.pending[i];
        RTOFF_CHECK_MSG(seen.insert(e.task.id).second, "task in two slots");
        if (i + 1 < state_.pending.size())
            RTOFF_CHECK_MSG(edf_before(e, state_.pending[i + 1]),
                            "pending queue out of EDF order");
        if (!e.awaiting_suspend) {
            RTOFF_CHECK_MSG(!any_free, "dispatchable task waiting while a worker is free");
            RTOFF_CHECK_MSG(e.task.absolute_deadline >= latest_running,
                            "pending task outranks a running one");
        }
    }
}

} // namespace rtoff
