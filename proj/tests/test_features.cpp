#include <doctest.h>

#include "tempora/features.hpp"

using namespace tempora;

namespace {

Task make_task(const std::string& id, double pay, const std::string& category,
               TaskType type = TaskType::Regular, std::int64_t duration = 300) {
    Task t;
    t.task_id = id;
    t.requester_id = "R1";
    t.category = category;
    t.task_type = type;
    t.payment_per_task = usd(pay);
    t.payment_per_batch = usd(pay * 2);
    t.declared_duration_s = duration;
    t.acceptance_rate = 0.5;
    t.posted_at = 1000;
    return t;
}

const CategorySet kCats({"a", "b", "c", "d"});

}  // namespace

TEST_CASE("degenerate range scales to one half") {
    RangeNormalizer norm;
    const auto f = encode_features(make_task("T1", 0.0, "a"), 0.0, norm, kCats);
    CHECK(f.values[0] == 0.5);  // payment_per_task
    CHECK(f.values[1] == 0.5);  // payment_per_batch
    CHECK(f.values[2] == 0.5);  // prior count
    CHECK(f.values[4] == 0.5);  // duration
}

TEST_CASE("running range maps max to one") {
    RangeNormalizer norm;
    encode_features(make_task("T1", 1.0, "a"), 0.0, norm, kCats);
    const auto f = encode_features(make_task("T2", 3.0, "a"), 0.0, norm, kCats);
    CHECK(f.values[0] == doctest::Approx(1.0));
}

TEST_CASE("mid-range value scales linearly with one-hot and type flags") {
    RangeNormalizer norm;
    encode_features(make_task("T1", 1.0, "a"), 0.0, norm, kCats);
    encode_features(make_task("T2", 3.0, "a"), 0.0, norm, kCats);
    const auto f =
        encode_features(make_task("T3", 2.0, "c", TaskType::Exam), 0.0, norm, kCats);
    CHECK(f.values[0] == doctest::Approx(0.5));
    CHECK(f.values.size() == FeatureVector::dimension(4));
    // one-hot: categories a,b,c,d at indices 5..8; "c" is index 2
    CHECK(f.values[5] == 0.0);
    CHECK(f.values[6] == 0.0);
    CHECK(f.values[7] == 1.0);
    CHECK(f.values[8] == 0.0);
    // type flags (regular, training, exam)
    CHECK(f.values[9] == 0.0);
    CHECK(f.values[10] == 0.0);
    CHECK(f.values[11] == 1.0);
}

TEST_CASE("exactly one category and one type flag are hot") {
    RangeNormalizer norm;
    for (const auto& cat : kCats.names()) {
        const auto f = encode_features(make_task("T" + cat, 1.0, cat), 2.0, norm, kCats);
        double cat_sum = 0.0, type_sum = 0.0;
        for (std::size_t i = 5; i < 9; ++i) cat_sum += f.values[i];
        for (std::size_t i = 9; i < 12; ++i) type_sum += f.values[i];
        CHECK(cat_sum == 1.0);
        CHECK(type_sum == 1.0);
        for (double v : f.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("unknown category is rejected") {
    RangeNormalizer norm;
    CHECK_THROWS_AS(encode_features(make_task("T1", 1.0, "zebra"), 0.0, norm, kCats),
                    UnknownCategory);
}

TEST_CASE("prior completions from the requester are counted from history") {
    TaskIndex index;
    index.add(make_task("T1", 1.0, "a"));
    index.add(make_task("T2", 1.0, "b"));
    Task other = make_task("T3", 1.0, "a");
    other.requester_id = "R2";
    index.add(other);

    std::vector<InteractionRecord> history = {
        InteractionRecord::make("W1", "T1", Outcome::Completed, 1, 60),
        InteractionRecord::make("W1", "T2", Outcome::Completed, 2, 60),
        InteractionRecord::make("W1", "T3", Outcome::Completed, 3, 60),
        InteractionRecord::make("W1", "T1", Outcome::Previewed, 4),
    };
    const Task probe = make_task("T9", 1.0, "c");  // requester R1
    CHECK(prior_tasks_from_requester(probe, history, index) == 2.0);
}
