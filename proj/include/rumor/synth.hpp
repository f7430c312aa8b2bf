#pragma once

#include <cstdint>
#include <vector>

#include "rumor/corpus.hpp"

namespace rumor {

// Knobs of the synthetic corpus. With margin = 0 both classes are drawn from
// the same distributions and only the label differs.
struct SynthConfig {
    double margin = 1.0;          // class separation of surface, user and volume signals
    double credit_strength = 1.0;  // rate of class-specific vocabulary (scaled by min(margin, 1))
    double early_signal = 0.05;    // share of the surface signal present at t_0
    double growth_hours = 36.0;    // hours until the surface signal is at full strength
    int min_tweets = 120;
    int max_tweets = 220;
    int early_tweets = 6;         // arrivals guaranteed within the first hour
    int stray_tweets = 3;         // before the window and after it, each
    int interval_count = 48;
};

// Deterministic for a fixed seed. Events alternate rumor, news, rumor, ... so
// an even count is balanced (an odd count gives rumors the extra event).
// Throws UsageError for n_events < 2 or an invalid config.
std::vector<Event> generate_synthetic_corpus(std::uint64_t seed, int n_events, const SynthConfig& config = {});

}  // namespace rumor
