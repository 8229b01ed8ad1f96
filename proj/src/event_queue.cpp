#include "rtoff/event_queue.hpp"

#include <algorithm>
#include <utility>

#include "rtoff/check.hpp"

namespace rtoff {

void EventQueue::post(Duration delay, Handler fn) {
    RTOFF_CHECK_MSG(delay >= 0, "event delay must be non-negative");
    post_at(now_ + delay, std::move(fn));
}

void EventQueue::post_at(SimTime when, Handler fn) {
    RTOFF_CHECK_MSG(!finished_, "posting after run completion");
    RTOFF_CHECK(when >= now_);
    heap_.push_back(Event{when, next_seq_++, std::move(fn)});
    std::push_heap(heap_.begin(), heap_.end(), After{});
    ++posted_;
}

EventQueue::Event EventQueue::pop_next() {
    std::pop_heap(heap_.begin(), heap_.end(), After{});
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    return ev;
}

void EventQueue::run_until(SimTime t_end) {
    RTOFF_CHECK_MSG(t_end >= now_, "time must not move backwards");
    while (!heap_.empty() && heap_.front().at <= t_end) {
        Event ev = pop_next();
        now_ = ev.at;
        ++fired_;
        ev.fn();
    }
    now_ = t_end;
}

void EventQueue::run_all() {
    while (!heap_.empty()) {
        Event ev = pop_next();
        now_ = ev.at;
        ++fired_;
        ev.fn();
    }
    finished_ = true;
}

} // namespace rtoff
