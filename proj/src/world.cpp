#include "rtoff/world.hpp"

#include <algorithm>

#include "rtoff/check.hpp"

namespace rtoff {

World::World(const WorldConfig& config) : cfg_(config), rng_(config.seed) {
    RTOFF_CHECK_MSG(cfg_.num_clients >= 1, "need at least one client");
    RTOFF_CHECK_MSG(cfg_.duration > 0, "duration must be positive");

    if (cfg_.kind == SchedulerKind::LatencyAware)
        policy_ = std::make_unique<PartitionedEdfScheduler>(cfg_.scheduler);
    else
        policy_ = std::make_unique<GlobalEdfScheduler>(cfg_.scheduler.num_workers);

    int m = cfg_.scheduler.num_workers;
    ch_sched_to_worker_.assign(m, 0);
    ch_worker_to_sched_.assign(m, 0);
    for (int w = 0; w < m; ++w) {
        WorkerAgent::Hooks hooks;
        WorkerId wid = static_cast<WorkerId>(w);
        hooks.suspended = [this, wid](TaskId id, Duration executed) {
            TaskRecord& rec = record(id);
            ++rec.preemptions;
            ++totals_.preemptions;
            SimTime arrival = channel_send(ch_worker_to_sched_[wid], cfg_.wired, 0);
            queue_.post_at(arrival, [this, wid, id, executed] {
                execute_commands(policy_->on_preempt_ack(wid, id, executed, queue_.now()));
            });
        };
        hooks.completed = [this, wid](TaskId id, Duration) {
            SimTime arrival = channel_send(ch_worker_to_sched_[wid], cfg_.wired, 0);
            queue_.post_at(arrival, [this, wid, id] {
                execute_commands(policy_->on_completion(wid, id, queue_.now()));
            });
        };
        hooks.result_ready = [this](const Task& task, SimTime send_time) {
            deliver_result(task, send_time);
        };
        workers_.push_back(std::make_unique<WorkerAgent>(wid, queue_, rng_, cfg_.wireless,
                                                         cfg_.context_switch_cost,
                                                         std::move(hooks)));
    }

    clients_.resize(static_cast<std::size_t>(cfg_.num_clients));
    ch_client_to_sched_.assign(cfg_.num_clients, 0);
    ch_sched_to_client_.assign(cfg_.num_clients, 0);
    for (int c = 0; c < cfg_.num_clients; ++c) {
        clients_[c].id = static_cast<ClientId>(c);
        clients_[c].config = cfg_.client;
    }
}

SimTime World::channel_send(SimTime& channel_last, const LinkModel& link, std::int64_t bytes) {
    Duration delay = transfer_time(link, bytes, rng_);
    SimTime arrival = std::max(queue_.now() + delay, channel_last);
    channel_last = arrival;
    return arrival;
}

TaskRecord& World::record(TaskId id) {
    RTOFF_CHECK(id >= 1 && id <= static_cast<TaskId>(records_.size()));
    return records_[id - 1];
}

void World::schedule_next_submission(ClientId c) {
    ClientState& client = clients_[c];
    SimTime when = next_submission_time(client.prev_submission, client.prev_outcome,
                                        client.config, rng_);
    if (when > cfg_.duration)
        return; // the workload window is over for this client
    queue_.post_at(when, [this, c] { submit(c); });
}

void World::submit(ClientId c) {
    ClientState& client = clients_[c];
    SimTime now = queue_.now();

    Task task = make_task(next_task_id_++, c, now, client.config, cfg_.wireless, rng_);

    TaskRecord rec;
    rec.id = task.id;
    rec.client = c;
    rec.submit = now;
    rec.deadline = task.absolute_deadline;
    rec.creation_laxity = task.initial_relative_deadline - task.wcet;
    records_.push_back(rec);

    client.note_submission(task.id, now);
    ++totals_.submitted;

    SimTime arrival = channel_send(ch_client_to_sched_[c], cfg_.wireless, task.params_bytes);
    queue_.post_at(arrival, [this, task] { scheduler_receive(task); });
}

void World::scheduler_receive(const Task& task) {
    SimTime now = queue_.now();
    SubmissionOutcome out = policy_->on_submission(task, now);

    TaskRecord& rec = record(task.id);
    rec.decided = true;
    rec.decision = now;
    if (out.has_adjustment) {
        rec.adjusted = true;
        rec.adjusted_deadline = out.adjusted_deadline;
        rec.expected_delay = out.expected_delay;
        rec.adjusted_delay = out.adjusted_delay;
    }

    if (out.decision.accepted) {
        rec.accepted = true;
        if (cfg_.kind == SchedulerKind::LatencyAware)
            rec.worker = static_cast<int>(out.decision.worker);
        ++totals_.accepted;
        execute_commands(out.commands);
    } else {
        rec.reject_reason = out.decision.reason;
        ++totals_.rejected;
        // The client learns about the rejection at once; only the link delay
        // applies.
        TaskId id = task.id;
        SimTime arrival = channel_send(ch_sched_to_client_[task.client], cfg_.wireless, 0);
        queue_.post_at(arrival, [this, id] { client_outcome(id, Verdict::Rejected); });
    }
}

void World::execute_commands(const std::vector<DispatchCommand>& cmds) {
    for (const DispatchCommand& cmd : cmds) {
        WorkerId w = cmd.worker;
        switch (cmd.kind) {
        case DispatchCommand::Kind::Start: {
            TaskRecord& rec = record(cmd.task_id);
            ++rec.dispatches;
            rec.worker = static_cast<int>(w);
            Task task = cmd.task;
            SimTime arrival = channel_send(ch_sched_to_worker_[w], cfg_.wired,
                                           task.params_bytes);
            queue_.post_at(arrival, [this, w, task] { workers_[w]->on_receive_task(task); });
            break;
        }
        case DispatchCommand::Kind::Resume: {
            TaskRecord& rec = record(cmd.task_id);
            ++rec.dispatches;
            rec.worker = static_cast<int>(w);
            TaskId id = cmd.task_id;
            SimTime arrival = channel_send(ch_sched_to_worker_[w], cfg_.wired, 0);
            queue_.post_at(arrival, [this, w, id] { workers_[w]->on_resume(id); });
            break;
        }
        case DispatchCommand::Kind::CancelSuspended: {
            TaskId id = cmd.task_id;
            SimTime arrival = channel_send(ch_sched_to_worker_[w], cfg_.wired, 0);
            queue_.post_at(arrival, [this, w, id] { workers_[w]->on_cancel_suspended(id); });
            break;
        }
        }
    }
}

void World::deliver_result(const Task& task, SimTime send_time) {
    // Result travels on the connection the worker opened for this task, so
    // no ordering constraint with other messages applies.
    Duration delay = transfer_time(cfg_.wireless, task.result_payload_bytes, rng_);
    TaskId id = task.id;
    SimTime deadline = task.absolute_deadline;
    queue_.post_at(send_time + delay, [this, id, deadline] {
        Verdict v = queue_.now() <= deadline ? Verdict::CompletedOnTime
                                             : Verdict::MissedDeadline;
        client_outcome(id, v);
    });
}

void World::client_outcome(TaskId id, Verdict verdict) {
    SimTime now = queue_.now();
    TaskRecord& rec = record(id);
    RTOFF_CHECK_MSG(!rec.resolved, "second outcome for a task");
    rec.resolved = true;
    rec.resolved_at = now;
    rec.verdict = verdict;
    if (verdict != Verdict::Rejected) {
        rec.has_completion = true;
        rec.completion = now;
    }

    TaskOutcome outcome;
    outcome.task_id = id;
    outcome.verdict = verdict;
    outcome.submit_time = rec.submit;
    outcome.decision_time = rec.decision;
    if (rec.has_completion)
        outcome.completion_time = rec.completion;

    ClientState& client = clients_[rec.client];
    client.note_outcome(outcome, rec.creation_laxity, now);

    switch (verdict) {
    case Verdict::Rejected:
        break;
    case Verdict::CompletedOnTime:
        ++totals_.on_time;
        break;
    case Verdict::MissedDeadline:
        ++totals_.missed;
        break;
    }

    schedule_next_submission(rec.client);
}

void World::run() {
    RTOFF_CHECK_MSG(!ran_, "a world runs once");
    ran_ = true;
    for (int c = 0; c < cfg_.num_clients; ++c)
        schedule_next_submission(static_cast<ClientId>(c));
    // Submissions stop at the duration; everything in the system then drains
    // so that every submitted task reaches exactly one outcome.
    queue_.run_all();

    std::int64_t rejected = 0, on_time = 0, missed = 0, response = 0, fallback = 0;
    for (const ClientState& c : clients_) {
        rejected += c.rejected;
        on_time += c.on_time;
        missed += c.missed;
        response += c.response_sum;
        fallback += c.fallback_lead_sum;
    }
    RTOFF_CHECK(totals_.rejected == rejected);
    RTOFF_CHECK(totals_.on_time == on_time);
    RTOFF_CHECK(totals_.missed == missed);
    totals_.response_sum = response;
    totals_.fallback_lead_sum = fallback;

    validate_end_state();
}

void World::validate_end_state() {
    // Counter conservation over the whole run.
    RTOFF_CHECK_MSG(totals_.submitted == totals_.accepted + totals_.rejected,
                    "submitted != accepted + rejected");
    RTOFF_CHECK_MSG(totals_.accepted == totals_.on_time + totals_.missed,
                    "accepted tasks left without an outcome");
    RTOFF_CHECK_MSG(static_cast<std::int64_t>(records_.size()) == totals_.submitted,
                    "record count mismatch");

    for (const ClientState& c : clients_)
        RTOFF_CHECK_MSG(!c.in_flight, "client still has a task in flight after drain");
    for (const auto& w : workers_)
        RTOFF_CHECK_MSG(w->drained(), "worker still holds executions after drain");
    RTOFF_CHECK_MSG(policy_->idle(), "scheduler queues not empty after drain");
    RTOFF_CHECK_MSG(policy_->task_count() == 0, "scheduler still tracks tasks");
    RTOFF_CHECK_MSG(queue_.posted_count() == queue_.fired_count(), "events lost");

    for (const TaskRecord& rec : records_) {
        RTOFF_CHECK_MSG(rec.decided && rec.resolved, "task without decision or outcome");
        if (rec.verdict == Verdict::Rejected)
            RTOFF_CHECK(!rec.has_completion);
        else
            RTOFF_CHECK(rec.has_completion && rec.accepted);
    }
}

} // namespace rtoff
