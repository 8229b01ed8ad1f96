#include "rtoff/worker.hpp"

#include <algorithm>

#include "rtoff/check.hpp"

namespace rtoff {

WorkerAgent::WorkerAgent(WorkerId id, EventQueue& queue, Rng& rng, LinkModel client_link,
                         Duration context_switch_cost, Hooks hooks)
    : id_(id), queue_(queue), rng_(rng), client_link_(client_link),
      context_switch_cost_(context_switch_cost), hooks_(std::move(hooks)) {
    RTOFF_CHECK(context_switch_cost_ >= 0);
}

bool WorkerAgent::known(TaskId id) const {
    if (current_ && current_->task.id == id)
        return true;
    return std::any_of(suspended_.begin(), suspended_.end(),
                       [&](const Execution& e) { return e.task.id == id; });
}

void WorkerAgent::on_receive_task(const Task& task) {
    RTOFF_CHECK_MSG(!known(task.id), "duplicate task id on worker");
    RTOFF_CHECK(task.actual_execution >= task.elapsed_execution);

    Execution ex;
    ex.task = task;
    ex.executed_before = task.elapsed_execution; // nonzero only for migrations
    ex.conn_ready_at = queue_.now() + connection_setup_time(client_link_, rng_);

    displace_current();
    start_segment(std::move(ex));
}

void WorkerAgent::on_resume(TaskId task_id) {
    auto it = std::find_if(suspended_.rbegin(), suspended_.rend(),
                           [&](const Execution& e) { return e.task.id == task_id; });
    RTOFF_CHECK_MSG(it != suspended_.rend(), "resume for a task not suspended here");
    Execution ex = *it;
    suspended_.erase(std::next(it).base());

    displace_current();
    start_segment(std::move(ex));
}

void WorkerAgent::displace_current() {
    if (!current_)
        return;
    Duration done = current_->executed_before + (queue_.now() - current_->segment_start);
    if (done >= current_->task.actual_execution) {
        // The arrival landed exactly on the completion instant; the
        // completion wins the tie no matter how the events were ordered.
        RTOFF_CHECK(done == current_->task.actual_execution);
        on_exec_complete(current_->task.id, current_->epoch);
    } else {
        suspend_current();
    }
}

void WorkerAgent::on_cancel_suspended(TaskId task_id) {
    auto it = std::find_if(suspended_.begin(), suspended_.end(),
                           [&](const Execution& e) { return e.task.id == task_id; });
    RTOFF_CHECK_MSG(it != suspended_.end(), "cancel for a task not suspended here");
    suspended_.erase(it);
}

void WorkerAgent::suspend_current() {
    Execution ex = *current_;
    current_.reset();
    // Progress only counts from the segment start; a suspension landing in a
    // context-switch window contributes nothing.
    Duration ran = queue_.now() - ex.segment_start;
    if (ran > 0)
        ex.executed_before += ran;
    RTOFF_CHECK_MSG(ex.executed_before < ex.task.actual_execution,
                    "suspending an execution that already finished");
    Duration executed = ex.executed_before;
    TaskId id = ex.task.id;
    suspended_.push_back(std::move(ex));
    if (hooks_.suspended)
        hooks_.suspended(id, executed);
}

void WorkerAgent::start_segment(Execution ex) {
    ex.segment_start = queue_.now() + context_switch_cost_;
    ex.epoch = next_epoch_++;
    Duration remaining = ex.task.actual_execution - ex.executed_before;
    RTOFF_CHECK(remaining >= 0);
    TaskId id = ex.task.id;
    std::uint64_t epoch = ex.epoch;
    queue_.post(context_switch_cost_ + remaining, [this, id, epoch] {
        on_exec_complete(id, epoch);
    });
    current_ = std::move(ex);
}

void WorkerAgent::on_exec_complete(TaskId task_id, std::uint64_t epoch) {
    // Stale completion events from segments that were suspended are ignored.
    if (!current_ || current_->task.id != task_id || current_->epoch != epoch)
        return;

    Execution ex = *current_;
    current_.reset();

    Duration elapsed = ex.executed_before + (queue_.now() - ex.segment_start);
    RTOFF_CHECK_MSG(elapsed == ex.task.actual_execution,
                    "elapsed execution diverged from the configured demand");

    if (hooks_.completed)
        hooks_.completed(task_id, elapsed);

    // The result leaves once the connection opened at dispatch is usable.
    SimTime send_time = std::max(queue_.now(), ex.conn_ready_at);
    Task done = ex.task;
    done.elapsed_execution = elapsed;
    if (hooks_.result_ready)
        hooks_.result_ready(done, send_time);
}

} // namespace rtoff
