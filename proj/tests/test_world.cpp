#include <doctest.h>

#include "rtoff/check.hpp"
#include "rtoff/world.hpp"

using namespace rtoff;

namespace {

WorldConfig small_world(SchedulerKind kind, std::uint64_t seed) {
    WorldConfig wc;
    wc.kind = kind;
    wc.scheduler.uncertainty_factor = 1.0;
    wc.scheduler.heuristic = FitHeuristic::WorstFit;
    wc.scheduler.num_workers = 2;
    wc.num_clients = 8;
    wc.client.arrival_rate = 1.0;
    wc.client.laxity_mean = 100'000;
    wc.client.laxity_stddev = 20'000;
    wc.client.actual_exec = 30'000;
    wc.client.wcet = 100'000;
    wc.wireless = LinkModel{30'000, 10'000, 1'000, std::nullopt};
    wc.wired = LinkModel{200, 0, 0, std::nullopt};
    wc.duration = 15'000'000;
    wc.seed = seed;
    return wc;
}

bool records_equal(const TaskRecord& a, const TaskRecord& b) {
    return a.id == b.id && a.client == b.client && a.submit == b.submit &&
           a.decision == b.decision && a.completion == b.completion &&
           a.resolved_at == b.resolved_at && a.deadline == b.deadline &&
           a.verdict == b.verdict && a.accepted == b.accepted && a.worker == b.worker &&
           a.dispatches == b.dispatches && a.preemptions == b.preemptions &&
           a.expected_delay == b.expected_delay && a.adjusted_delay == b.adjusted_delay;
}

} // namespace

TEST_CASE("identical seeds give identical runs") {
    for (SchedulerKind kind : {SchedulerKind::LatencyAware, SchedulerKind::Reference}) {
        World a(small_world(kind, 7));
        World b(small_world(kind, 7));
        a.run();
        b.run();

        CHECK(a.totals().submitted == b.totals().submitted);
        CHECK(a.totals().accepted == b.totals().accepted);
        CHECK(a.totals().on_time == b.totals().on_time);
        CHECK(a.totals().missed == b.totals().missed);
        CHECK(a.totals().preemptions == b.totals().preemptions);
        REQUIRE(a.records().size() == b.records().size());
        for (std::size_t i = 0; i < a.records().size(); ++i)
            CHECK(records_equal(a.records()[i], b.records()[i]));

        World c(small_world(kind, 8));
        c.run();
        bool same = c.totals().submitted == a.totals().submitted &&
                    c.records().size() == a.records().size() &&
                    (a.records().empty() ||
                     records_equal(a.records().front(), c.records().front()));
        CHECK_FALSE(same);
    }
}

TEST_CASE("observed transit equals the submit-to-decision gap") {
    WorldConfig wc = small_world(SchedulerKind::LatencyAware, 21);
    World world(wc);
    world.run();
    REQUIRE(world.totals().submitted > 50);
    for (const TaskRecord& rec : world.records()) {
        REQUIRE(rec.adjusted);
        // Shared clocks make the booked delay exactly the observed transit.
        CHECK(rec.expected_delay == rec.decision - rec.submit);
    }
}

TEST_CASE("zero jitter and a full uncertainty factor never miss") {
    WorldConfig wc = small_world(SchedulerKind::LatencyAware, 3);
    wc.wireless = LinkModel{30'000, 0, 1'000, std::nullopt};
    wc.wired = LinkModel{200, 0, 0, std::nullopt};
    wc.scheduler.num_workers = 1;
    wc.num_clients = 12;
    World world(wc);
    world.run();
    CHECK(world.totals().submitted > 100);
    CHECK(world.totals().missed == 0);
    CHECK(world.totals().rejected > 0); // one worker cannot take everything
}

TEST_CASE("rejections reach the client before the original deadline") {
    WorldConfig wc = small_world(SchedulerKind::LatencyAware, 5);
    wc.wireless = LinkModel{30'000, 0, 1'000, std::nullopt};
    wc.scheduler.num_workers = 1;
    wc.num_clients = 12;
    World world(wc);
    world.run();
    int rejected = 0;
    for (const TaskRecord& rec : world.records()) {
        if (rec.verdict != Verdict::Rejected)
            continue;
        ++rejected;
        CHECK(rec.resolved_at < rec.deadline);
    }
    CHECK(rejected > 0);
}

TEST_CASE("preemptions happen and the accounting survives them") {
    WorldConfig wc = small_world(SchedulerKind::LatencyAware, 11);
    // Wide laxity spread reorders deadlines enough to force preemptions.
    wc.scheduler.num_workers = 1;
    wc.num_clients = 6;
    wc.client.laxity_mean = 500'000;
    wc.client.laxity_stddev = 350'000;
    wc.client.actual_exec = 80'000;
    wc.client.wcet = 100'000;
    wc.duration = 30'000'000;
    World world(wc);
    world.run(); // run() validates conservation and drained state internally
    CHECK(world.totals().preemptions > 0);
    CHECK(world.totals().submitted ==
          world.totals().accepted + world.totals().rejected);
}

TEST_CASE("the reference scheduler accepts more and misses more under load") {
    WorldConfig la = small_world(SchedulerKind::LatencyAware, 17);
    la.scheduler.num_workers = 1;
    la.num_clients = 30;
    WorldConfig ref = la;
    ref.kind = SchedulerKind::Reference;

    World a(la), b(ref);
    a.run();
    b.run();

    double la_acceptance = static_cast<double>(a.totals().accepted) /
                           static_cast<double>(a.totals().submitted);
    double ref_acceptance = static_cast<double>(b.totals().accepted) /
                            static_cast<double>(b.totals().submitted);
    CHECK(ref_acceptance > la_acceptance);
    CHECK(b.totals().missed > a.totals().missed);
}

TEST_CASE("a world refuses to run twice") {
    World world(small_world(SchedulerKind::LatencyAware, 1));
    world.run();
    CHECK_THROWS_AS(world.run(), SimulationError);
}
