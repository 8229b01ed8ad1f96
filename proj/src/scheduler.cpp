#include "rtoff/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rtoff/check.hpp"

namespace rtoff {

namespace {

// Total EDF order within a queue: earlier adjusted deadline first, ties by
// ascending task id for determinism.
std::pair<SimTime, TaskId> edf_key(const QueuedTask& t) {
    return {t.adjusted_deadline, t.task.id};
}

bool edf_before(const QueuedTask& a, const QueuedTask& b) {
    return edf_key(a) < edf_key(b);
}

} // namespace

AdjustedTask adjust_deadline(const Task& task, SimTime now, const SchedulerConfig& config) {
    // Transit observed on the client connection: how much of the relative
    // deadline was already consumed getting here. Clamped at zero so a task
    // arriving "early" never gains deadline.
    Duration d_exp = task.initial_relative_deadline - (task.absolute_deadline - now);
    if (d_exp < 0)
        d_exp = 0;

    Duration d_adj = d_exp;
    if (task.connection_setup_time > task.wcet)
        d_adj = d_exp + task.connection_setup_time - task.wcet;

    Duration margin = std::llround(config.uncertainty_factor * static_cast<double>(d_adj));
    AdjustedTask adj;
    adj.task = task;
    adj.adjusted_deadline = task.absolute_deadline - margin;
    adj.expected_delay = d_exp;
    adj.adjusted_delay = d_adj;
    return adj;
}

bool admission_precheck(const AdjustedTask& adj, SimTime now) {
    return adj.adjusted_deadline - now > remaining_wcet(adj.task);
}

std::optional<FeasibleSchedule> feasible_with(const WorkerQueueState& queue,
                                              const QueuedTask& candidate, SimTime now) {
    AdjustedTask cand_adj;
    cand_adj.task = candidate.task;
    cand_adj.adjusted_deadline = candidate.adjusted_deadline;
    if (!admission_precheck(cand_adj, now))
        return std::nullopt;

    std::vector<const QueuedTask*> tasks;
    tasks.reserve(queue.pending.size() + 2);
    if (queue.running)
        tasks.push_back(&*queue.running);
    for (const auto& t : queue.pending)
        tasks.push_back(&t);
    tasks.push_back(&candidate);
    std::sort(tasks.begin(), tasks.end(),
              [](const QueuedTask* a, const QueuedTask* b) { return edf_before(*a, *b); });

    // Everything is already released, so EDF on one worker just runs the
    // tasks in deadline order; finish times accumulate from now.
    FeasibleSchedule sched;
    SimTime t = now;
    for (const QueuedTask* qt : tasks) {
        t += remaining_wcet(qt->task);
        if (t > qt->adjusted_deadline)
            return std::nullopt;
        sched.finish_times.emplace_back(qt->task.id, t);
    }
    return sched;
}

double queue_density(const WorkerQueueState& queue, const QueuedTask& candidate, SimTime now) {
    double sum = 0.0;
    auto add = [&](const QueuedTask& qt) {
        Duration rem = remaining_wcet(qt.task);
        auto d = density(rem, qt.adjusted_deadline, now);
        if (d) {
            sum += *d;
        } else if (rem > 0) {
            sum = std::numeric_limits<double>::infinity();
        }
    };
    if (queue.running)
        add(*queue.running);
    for (const auto& t : queue.pending)
        add(t);
    add(candidate);
    return sum;
}

WorkerId select_worker(const std::map<WorkerId, double>& feasible, FitHeuristic heuristic) {
    RTOFF_CHECK_MSG(!feasible.empty(), "select_worker needs a non-empty feasible set");
    if (heuristic == FitHeuristic::FirstFit)
        return feasible.begin()->first; // lowest worker id

    auto best = feasible.begin();
    for (auto it = std::next(feasible.begin()); it != feasible.end(); ++it) {
        bool better = heuristic == FitHeuristic::BestFit ? it->second > best->second
                                                         : it->second < best->second;
        if (better)
            best = it; // ties keep the lowest id because iteration is ascending
    }
    return best->first;
}

PartitionedEdfScheduler::PartitionedEdfScheduler(SchedulerConfig config)
    : config_(config), queues_(static_cast<std::size_t>(config.num_workers)) {
    RTOFF_CHECK_MSG(config.num_workers >= 1, "need at least one worker");
    RTOFF_CHECK_MSG(config.uncertainty_factor >= 0.0, "uncertainty factor must be >= 0");
    for (std::size_t i = 0; i < queues_.size(); ++i)
        queues_[i].worker = static_cast<WorkerId>(i);
}

const WorkerQueueState& PartitionedEdfScheduler::queue(WorkerId worker) const {
    RTOFF_CHECK(worker < queues_.size());
    return queues_[worker];
}

WorkerQueueState& PartitionedEdfScheduler::mutable_queue(WorkerId worker) {
    RTOFF_CHECK(worker < queues_.size());
    return queues_[worker];
}

void PartitionedEdfScheduler::insert_pending(WorkerQueueState& q, QueuedTask entry) {
    auto it = std::lower_bound(q.pending.begin(), q.pending.end(), entry, edf_before);
    q.pending.insert(it, std::move(entry));
}

SubmissionOutcome PartitionedEdfScheduler::on_submission(const Task& task, SimTime now) {
    AdjustedTask adj = adjust_deadline(task, now, config_);

    SubmissionOutcome out;
    out.has_adjustment = true;
    out.adjusted_deadline = adj.adjusted_deadline;
    out.expected_delay = adj.expected_delay;
    out.adjusted_delay = adj.adjusted_delay;

    if (!admission_precheck(adj, now)) {
        out.decision = Decision::reject(RejectReason::PastAdjustedDeadline);
        return out;
    }

    QueuedTask cand;
    cand.task = adj.task;
    cand.adjusted_deadline = adj.adjusted_deadline;
    cand.expected_delay = adj.expected_delay;
    cand.adjusted_delay = adj.adjusted_delay;

    std::map<WorkerId, double> fits;
    for (const auto& q : queues_) {
        if (feasible_with(q, cand, now)) {
            fits.emplace(q.worker, queue_density(q, cand, now));
            if (config_.heuristic == FitHeuristic::FirstFit)
                break;
        }
    }
    if (fits.empty()) {
        out.decision = Decision::reject(RejectReason::NoFeasibleWorker);
        return out;
    }

    WorkerId target = select_worker(fits, config_.heuristic);
    WorkerQueueState& q = queues_[target];
    out.decision = Decision::accept(target);

    insert_pending(q, cand);

    if (!q.running) {
        // Worker idle: dispatch the queue head. In live runs the queue was
        // empty, so the head is the task just admitted.
        dispatch_head(q, out.commands);
    } else if (q.pending.front().task.id == task.id &&
               cand.adjusted_deadline < q.running->adjusted_deadline) {
        // The new task outranks the running one: displace it back into the
        // queue and push the new task to the worker. The displaced task's
        // elapsed time arrives with the worker's suspension ack.
        QueuedTask displaced = *q.running;
        displaced.awaiting_suspend = true;
        out.preempted = true;
        out.preempted_task = displaced.task.id;
        insert_pending(q, std::move(displaced));

        q.running = q.pending.front();
        q.pending.erase(q.pending.begin());
        out.commands.push_back(DispatchCommand{DispatchCommand::Kind::Start, target,
                                               q.running->task.id, q.running->task});
    }

    audit();
    return out;
}

std::vector<DispatchCommand> PartitionedEdfScheduler::on_completion(WorkerId worker,
                                                                    TaskId task_id,
                                                                    SimTime now) {
    (void)now;
    RTOFF_CHECK(worker < queues_.size());
    WorkerQueueState& q = queues_[worker];

    if (q.running && q.running->task.id == task_id) {
        q.running.reset();
    } else {
        // The task finished on the worker before a preemption dispatch
        // reached it; its queue entry moved to pending in the meantime.
        auto it = std::find_if(q.pending.begin(), q.pending.end(),
                               [&](const QueuedTask& t) { return t.task.id == task_id; });
        RTOFF_CHECK_MSG(it != q.pending.end(), "completion for unknown task");
        q.pending.erase(it);
    }

    std::vector<DispatchCommand> cmds;
    if (!q.running && !q.pending.empty()) {
        QueuedTask head = q.pending.front();
        q.pending.erase(q.pending.begin());
        RTOFF_CHECK_MSG(!head.awaiting_suspend, "dispatching a task with unconfirmed suspension");
        if (head.suspended) {
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::Resume, worker,
                                           head.task.id, Task{}});
            head.suspended = false;
        } else {
            cmds.push_back(DispatchCommand{DispatchCommand::Kind::Start, worker,
                                           head.task.id, head.task});
        }
        q.running = std::move(head);
    }

    audit();
    return cmds;
}

std::vector<DispatchCommand> PartitionedEdfScheduler::on_preempt_ack(WorkerId worker,
                                                                     TaskId task_id,
                                                                     Duration executed,
                                                                     SimTime now) {
    (void)now;
    RTOFF_CHECK(worker < queues_.size());
    WorkerQueueState& q = queues_[worker];
    auto it = std::find_if(q.pending.begin(), q.pending.end(),
                           [&](const QueuedTask& t) { return t.task.id == task_id; });
    RTOFF_CHECK_MSG(it != q.pending.end(), "suspension ack for unknown task");
    RTOFF_CHECK(it->awaiting_suspend);
    it->awaiting_suspend = false;
    it->suspended = true;
    it->task.elapsed_execution = executed;
    audit();
    return {};
}

bool PartitionedEdfScheduler::idle() const {
    for (const auto& q : queues_)
        if (q.running || !q.pending.empty())
            return false;
    return true;
}

std::size_t PartitionedEdfScheduler::task_count() const {
    std::size_t n = 0;
    for (const auto& q : queues_)
        n += q.pending.size() + (q.running ? 1 : 0);
    return n;
}

void PartitionedEdfScheduler::audit() const {
    std::set<TaskId> seen;
    for (const auto& q : queues_) {
        if (q.running)
            RTOFF_CHECK_MSG(seen.insert(q.running->task.id).second, "task in two queues");
        for (std::size_t i = 0; i < q.pending.size(); ++i) {
            RTOFF_CHECK_MSG(seen.insert(q.pending[i].task.id).second, "task in two queues");
            if (i + 1 < q.pending.size())
                RTOFF_CHECK_MSG(edf_before(q.pending[i], q.pending[i + 1]),
                                "pending queue out of EDF order");
        }
    }
}

} // namespace rtoff
