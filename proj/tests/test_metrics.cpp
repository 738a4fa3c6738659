#include <doctest.h>

#include "support/oracles.hpp"
#include "tempora/metrics.hpp"
#include "tempora/rng.hpp"

using namespace tempora;

TEST_CASE("perfect top-k ranking scores one") {
    const std::vector<std::string> ranked = {"a", "b", "c", "d"};
    CHECK(average_precision_at_k(ranked, {"a", "b", "c"}, 3) == doctest::Approx(1.0));
}

TEST_CASE("no relevant items scores zero") {
    const std::vector<std::string> ranked = {"a", "b", "c"};
    CHECK(average_precision_at_k(ranked, {}, 3) == 0.0);
}

TEST_CASE("hand-enumerated AP fixture") {
    // ranked [R, N, R], |relevant| = 2, k = 3 -> (1/1 + 2/3) / 2
    const std::vector<std::string> ranked = {"r1", "n1", "r2"};
    const double ap = average_precision_at_k(ranked, {"r1", "r2"}, 3);
    CHECK(ap == doctest::Approx(0.833333333333).epsilon(1e-9));
}

TEST_CASE("k below one is invalid") {
    const std::vector<std::string> ranked = {"a"};
    CHECK_THROWS_AS(average_precision_at_k(ranked, {"a"}, 0), InvalidK);
}

TEST_CASE("denominator is min(|relevant|, k)") {
    // 4 relevant items but k=2: perfect top-2 should score 1.0
    const std::vector<std::string> ranked = {"a", "b", "x", "y"};
    CHECK(average_precision_at_k(ranked, {"a", "b", "c", "d"}, 2) ==
          doctest::Approx(1.0));
}

TEST_CASE("map is the unweighted mean of per-worker AP") {
    RankedOutcome perfect{"W1", {"a", "b"}, {"a", "b"}};
    RankedOutcome bad{"W2", {"x", "y"}, {"z"}};
    const std::vector<RankedOutcome> outcomes = {perfect, bad};
    CHECK(map_at_k(outcomes, 2) == doctest::Approx(0.5));
    const std::vector<RankedOutcome> one = {perfect};
    CHECK(map_at_k(one, 2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(map_at_k({}, 2), EmptyInput);
}

TEST_CASE("AP agrees with the reference accumulation on random rankings") {
    Rng rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_int(0, 14));
        std::vector<std::string> ranked;
        std::vector<std::string> relevant;
        for (int i = 0; i < n; ++i) {
            ranked.push_back("t" + std::to_string(i));
            if (rng.bernoulli(0.4)) relevant.push_back("t" + std::to_string(i));
        }
        rng.shuffle(ranked);
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, 9));
        const std::set<std::string> rel(relevant.begin(), relevant.end());
        CHECK(average_precision_at_k(ranked, rel, k) ==
              doctest::Approx(oracle::ap_at_k_reference(ranked, relevant, k))
                  .epsilon(1e-12));
    }
}

TEST_CASE("AP is invariant to permutations of non-relevant items below k") {
    Rng rng(505);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 6 + static_cast<int>(rng.uniform_int(0, 10));
        std::vector<std::string> ranked;
        std::set<std::string> relevant;
        for (int i = 0; i < n; ++i) {
            ranked.push_back("t" + std::to_string(i));
            if (rng.bernoulli(0.35)) relevant.insert("t" + std::to_string(i));
        }
        const std::size_t k = 3 + static_cast<std::size_t>(rng.uniform_int(0, 3));
        const double base = average_precision_at_k(ranked, relevant, k);

        // shuffle only the non-relevant tail positions beyond k
        std::vector<std::size_t> tail_positions;
        for (std::size_t i = k; i < ranked.size(); ++i) {
            if (!relevant.count(ranked[i])) tail_positions.push_back(i);
        }
        if (tail_positions.size() < 2) continue;
        std::vector<std::string> permuted = ranked;
        std::vector<std::string> tail_values;
        for (std::size_t p : tail_positions) tail_values.push_back(permuted[p]);
        rng.shuffle(tail_values);
        for (std::size_t i = 0; i < tail_positions.size(); ++i) {
            permuted[tail_positions[i]] = tail_values[i];
        }
        CHECK(average_precision_at_k(permuted, relevant, k) == base);
    }
}
