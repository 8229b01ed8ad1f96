#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

// Test-only exhaustive feasibility oracle, independent of the scheduler
// implementation. Tasks are (remaining, deadline) pairs in integer quanta,
// all released at time 0 on one preemptable worker. At every quantum any
// incomplete task may run; the instance is feasible iff some choice sequence
// finishes every task by its deadline (finish time <= deadline). Idling is
// never explored since inserting idle time cannot make an infeasible
// instance feasible.
namespace oracle {

struct Instance {
    std::vector<std::pair<int, int>> tasks; // (remaining quanta, deadline quanta)
};

namespace detail {

inline std::uint64_t encode(const std::vector<int>& rem) {
    std::uint64_t key = 0;
    for (int r : rem)
        key = key * 64 + static_cast<std::uint64_t>(r);
    return key;
}

inline bool search(std::vector<int>& rem, const std::vector<int>& deadline, int t,
                   std::unordered_set<std::uint64_t>& dead) {
    bool all_done = true;
    for (std::size_t i = 0; i < rem.size(); ++i) {
        if (rem[i] == 0)
            continue;
        all_done = false;
        if (rem[i] > deadline[i] - t)
            return false; // this task can no longer make it
    }
    if (all_done)
        return true;

    std::uint64_t key = encode(rem);
    if (dead.count(key))
        return false;

    for (std::size_t i = 0; i < rem.size(); ++i) {
        if (rem[i] == 0)
            continue;
        // Identical siblings explore the same subtree; skip duplicates.
        bool dup = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (rem[j] == rem[i] && deadline[j] == deadline[i]) {
                dup = true;
                break;
            }
        }
        if (dup)
            continue;

        --rem[i];
        bool ok = search(rem, deadline, t + 1, dead);
        ++rem[i];
        if (ok)
            return true;
    }
    dead.insert(key);
    return false;
}

} // namespace detail

inline bool exhaustive_feasible(const Instance& inst) {
    std::vector<int> rem, deadline;
    for (auto [r, d] : inst.tasks) {
        rem.push_back(r);
        deadline.push_back(d);
    }
    std::unordered_set<std::uint64_t> dead;
    return detail::search(rem, deadline, 0, dead);
}

} // namespace oracle
