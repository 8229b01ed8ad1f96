#include "rtoff/client.hpp"

#include <algorithm>
#include <cmath>

#include "rtoff/check.hpp"

namespace rtoff {

SimTime next_submission_time(SimTime prev_submission, SimTime prev_outcome,
                             const ClientConfig& config, Rng& rng) {
    RTOFF_CHECK(config.arrival_rate > 0.0);
    Duration interval = std::llround(rng.exponential(1e6 / config.arrival_rate));
    if (interval < 0)
        interval = 0;
    return std::max(prev_submission + interval, prev_outcome);
}

Task make_task(TaskId id, ClientId client, SimTime now, const ClientConfig& config,
               const LinkModel& wireless, Rng& rng) {
    Duration lax = std::llround(rng.normal(static_cast<double>(config.laxity_mean),
                                           static_cast<double>(config.laxity_stddev)));
    if (lax < 0)
        lax = 0;

    Task t;
    t.id = id;
    t.client = client;
    t.initial_relative_deadline = config.wcet + lax;
    t.absolute_deadline = now + t.initial_relative_deadline;
    t.connection_setup_time = connection_setup_time(wireless, rng);
    t.wcet = config.wcet;
    t.elapsed_execution = 0;
    t.params_bytes = 0;
    t.result_payload_bytes = config.result_payload_bytes;
    t.actual_execution = config.actual_exec;
    return t;
}

void ClientState::note_submission(TaskId task, SimTime now) {
    RTOFF_CHECK_MSG(!in_flight, "client already has a task in flight");
    in_flight = task;
    prev_submission = now;
    submitted_before = true;
    ++submitted;
}

void ClientState::note_outcome(const TaskOutcome& outcome, Duration creation_laxity,
                               SimTime now) {
    RTOFF_CHECK_MSG(in_flight && *in_flight == outcome.task_id,
                    "outcome for a task this client does not have in flight");
    in_flight.reset();
    prev_outcome = now;

    switch (outcome.verdict) {
    case Verdict::Rejected:
        ++rejected;
        // Lead time the fallback gains over just missing the deadline: the
        // laxity chosen at creation minus the time the rejection took to
        // come back.
        fallback_lead_sum += creation_laxity - (now - outcome.submit_time);
        break;
    case Verdict::CompletedOnTime:
        ++on_time;
        response_sum += now - outcome.submit_time;
        break;
    case Verdict::MissedDeadline:
        ++missed;
        response_sum += now - outcome.submit_time;
        break;
    }
}

} // namespace rtoff
