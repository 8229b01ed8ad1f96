#include <doctest.h>

#include <vector>

#include "rtoff/check.hpp"
#include "rtoff/worker.hpp"

using namespace rtoff;

namespace {

struct Capture {
    struct Suspension {
        TaskId id;
        Duration executed;
        SimTime at;
    };
    struct Completion {
        TaskId id;
        Duration elapsed;
        SimTime at;
    };
    struct Result {
        TaskId id;
        SimTime send_time;
    };
    std::vector<Suspension> suspensions;
    std::vector<Completion> completions;
    std::vector<Result> results;
};

struct Rig {
    EventQueue queue;
    Rng rng{1};
    Capture cap;
    WorkerAgent agent;

    explicit Rig(LinkModel client_link, Duration ctx_switch = 0)
        : agent(0, queue, rng, client_link, ctx_switch,
                WorkerAgent::Hooks{
                    [this](TaskId id, Duration executed) {
                        cap.suspensions.push_back({id, executed, queue.now()});
                    },
                    [this](TaskId id, Duration elapsed) {
                        cap.completions.push_back({id, elapsed, queue.now()});
                    },
                    [this](const Task& t, SimTime send) {
                        cap.results.push_back({t.id, send});
                    }}) {}
};

Task exec_task(TaskId id, Duration actual, Duration elapsed = 0) {
    Task t;
    t.id = id;
    t.actual_execution = actual;
    t.wcet = actual * 3;
    t.elapsed_execution = elapsed;
    t.absolute_deadline = 10'000'000;
    return t;
}

} // namespace

TEST_CASE("idle worker completes after the actual execution time") {
    Rig rig(LinkModel{10'000, 0, 0, std::nullopt});
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.run_all();

    REQUIRE(rig.cap.completions.size() == 1);
    CHECK(rig.cap.completions[0].at == 30'000);
    CHECK(rig.cap.completions[0].elapsed == 30'000);
    // Connection (2 x 10ms) was still ahead of the execution end.
    REQUIRE(rig.cap.results.size() == 1);
    CHECK(rig.cap.results[0].send_time == 30'000);
}

TEST_CASE("result waits for the connection when setup outlasts execution") {
    Rig rig(LinkModel{20'000, 0, 0, std::nullopt}); // setup = 40ms, exec = 30ms
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.run_all();
    REQUIRE(rig.cap.results.size() == 1);
    CHECK(rig.cap.completions[0].at == 30'000);
    CHECK(rig.cap.results[0].send_time == 40'000);
}

TEST_CASE("preempted time is excluded from the elapsed execution") {
    Rig rig(LinkModel{0, 0, 0, std::nullopt});
    // A runs 10ms, is displaced by B for 15ms, then resumes for its last 20ms.
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.post(10'000, [&] {
        rig.agent.on_receive_task(exec_task(2, 15'000));
        // Resume lands at B's completion instant; the completion event was
        // posted first so it wins the tie.
        rig.queue.post(15'000, [&] { rig.agent.on_resume(1); });
    });
    rig.queue.run_all();

    REQUIRE(rig.cap.suspensions.size() == 1);
    CHECK(rig.cap.suspensions[0].id == 1);
    CHECK(rig.cap.suspensions[0].executed == 10'000);
    CHECK(rig.cap.suspensions[0].at == 10'000);

    REQUIRE(rig.cap.completions.size() == 2);
    CHECK(rig.cap.completions[0].id == 2);
    CHECK(rig.cap.completions[0].at == 25'000);
    CHECK(rig.cap.completions[1].id == 1);
    CHECK(rig.cap.completions[1].at == 45'000);
    CHECK(rig.cap.completions[1].elapsed == 30'000);
    CHECK(rig.agent.drained());
}

TEST_CASE("a resumed task reuses its original connection") {
    Rig rig(LinkModel{50'000, 0, 0, std::nullopt}); // setup takes 100ms
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.post(10'000, [&] {
        rig.agent.on_receive_task(exec_task(2, 10'000));
        rig.queue.post(10'000, [&] { rig.agent.on_resume(1); });
    });
    rig.queue.run_all();

    // Task 1 finishes at 40ms but its connection from t=0 opens at 100ms.
    REQUIRE(rig.cap.results.size() == 2);
    CHECK(rig.cap.results[1].id == 1);
    CHECK(rig.cap.results[1].send_time == 100'000);
}

TEST_CASE("completion posted earlier wins a tie against an arriving task") {
    Rig rig(LinkModel{0, 0, 0, std::nullopt});
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    // Arrives exactly at the completion instant; the completion event was
    // posted first, so it fires first and nothing is suspended.
    rig.queue.post(30'000, [&] { rig.agent.on_receive_task(exec_task(2, 5'000)); });
    rig.queue.run_all();

    CHECK(rig.cap.suspensions.empty());
    REQUIRE(rig.cap.completions.size() == 2);
    CHECK(rig.cap.completions[0].id == 1);
    CHECK(rig.cap.completions[0].elapsed == 30'000);
}

TEST_CASE("migrated tasks carry elapsed execution into a fresh start") {
    Rig rig(LinkModel{0, 0, 0, std::nullopt});
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000, 12'000)); });
    rig.queue.run_all();
    REQUIRE(rig.cap.completions.size() == 1);
    CHECK(rig.cap.completions[0].at == 18'000);
    CHECK(rig.cap.completions[0].elapsed == 30'000);
}

TEST_CASE("cancel drops a suspended context") {
    Rig rig(LinkModel{0, 0, 0, std::nullopt});
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.post(10'000, [&] { rig.agent.on_receive_task(exec_task(2, 5'000)); });
    rig.queue.post(16'000, [&] { rig.agent.on_cancel_suspended(1); });
    rig.queue.run_all();

    CHECK(rig.agent.drained());
    REQUIRE(rig.cap.completions.size() == 1);
    CHECK(rig.cap.completions[0].id == 2);
}

TEST_CASE("context switch cost delays segment starts") {
    Rig rig(LinkModel{0, 0, 0, std::nullopt}, 2'000);
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.run_all();
    REQUIRE(rig.cap.completions.size() == 1);
    CHECK(rig.cap.completions[0].at == 32'000);
    CHECK(rig.cap.completions[0].elapsed == 30'000);
}

TEST_CASE("bookkeeping errors abort the run") {
    Rig rig(LinkModel{0, 0, 0, std::nullopt});
    rig.queue.post(0, [&] { rig.agent.on_receive_task(exec_task(1, 30'000)); });
    rig.queue.post(1'000, [&] {
        CHECK_THROWS_AS(rig.agent.on_receive_task(exec_task(1, 30'000)), SimulationError);
        CHECK_THROWS_AS(rig.agent.on_resume(99), SimulationError);
        CHECK_THROWS_AS(rig.agent.on_cancel_suspended(99), SimulationError);
    });
    rig.queue.run_all();
}
