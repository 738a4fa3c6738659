// Small, fast experiment configs for unit tests. Policy semantics do not
// depend on epoch count, so tests shrink it to keep runtimes low.
#pragma once

#include "tempora/sim_config.hpp"

namespace tempora::testing {

inline ExperimentConfig small_config(std::uint64_t seed = 7) {
    ExperimentConfig c;
    c.seed = seed;
    c.population = {2, 3, 2, 3};
    c.stages = {2, 2};
    c.market.task_arrival_rate_per_hour = 8.0;
    c.market.category_count = 5;
    c.market.requester_count = 6;
    c.train.epochs = 40;
    return c;
}

}  // namespace tempora::testing
