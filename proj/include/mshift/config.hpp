#pragma once

#include <cstdint>

namespace mshift {

// Search budgets and knobs shared by the classification pipeline.
// Truncated searches surface as explicit flags, never as silent wrong answers.
struct Config {
    int n_max = 8;                           // deepest stringing level tried
    std::uint64_t coloring_budget = 1000000; // colorings enumerated per stringing level
    std::uint64_t subset_budget = 1u << 20;  // states visited per image-subset search
    std::uint64_t persistent_budget = 1u << 20; // states visited per persistent-function search
    int d_max = 6;                           // largest supported extension size
    std::uint64_t seed = 1;                  // simulation seed
    int jobs = 1;                            // worker threads for the coloring grid
    std::uint64_t time_budget_ms = 0;        // soft wall-clock cap for the search grid, 0 = off
    // Budget-relative minimality: treat an exhausted (n_max, budgets) search as certifying
    // the minimal index. Off by default; without it verdicts fall back to UNKNOWN rather
    // than risk a false NO.
    bool accept_budgeted_minimality = false;
};

}  // namespace mshift
