#include <doctest.h>

#include <array>

#include "tempora/chronotype.hpp"

using namespace tempora;

namespace {

MpiResponse uniform_response(int value) {
    MpiResponse r;
    r.answers.fill(value);
    return r;
}

MpiResponse split_response(int switch_value, int single_value) {
    MpiResponse r;
    for (std::size_t i = 0; i < MpiResponse::kItemCount; ++i) {
        r.answers[i] = is_switch_keyed(i) ? switch_value : single_value;
    }
    return r;
}

}  // namespace

TEST_CASE("attention validation") {
    MpiResponse r = uniform_response(3);
    r.attention_checks = {{3, 3}};
    CHECK(validate_attention(r));
    r.attention_checks = {{3, 4}};
    CHECK_FALSE(validate_attention(r));
    r.attention_checks.clear();
    CHECK(validate_attention(r));  // vacuous
}

TEST_CASE("maximal polychronic pattern scores 5") {
    CHECK(score_mpi(split_response(5, 1)).value == doctest::Approx(5.0));
}

TEST_CASE("all-neutral answers are the fixed point") {
    CHECK(score_mpi(uniform_response(3)).value == doctest::Approx(3.0));
}

TEST_CASE("reverse scoring of single-tasking items") {
    // switch-keyed 4, single-task-keyed 2 -> reversed to 4 -> mean 4.0
    CHECK(score_mpi(split_response(4, 2)).value == doctest::Approx(4.0));
}

TEST_CASE("uniform answers always score 3 due to the 7/7 keying split") {
    for (int a = 1; a <= 5; ++a) {
        CHECK(score_mpi(uniform_response(a)).value == doctest::Approx(3.0));
    }
}

TEST_CASE("out of range answers rejected") {
    MpiResponse r = uniform_response(3);
    r.answers[4] = 6;
    CHECK_THROWS_AS(score_mpi(r), InvalidResponse);
    r.answers[4] = 0;
    CHECK_THROWS_AS(score_mpi(r), InvalidResponse);
}

TEST_CASE("classification threshold and tie rule") {
    CHECK(classify(MpiScore{5.0}).classification == Chronotype::Polychronic);
    CHECK(classify(MpiScore{3.0}).classification == Chronotype::Monochronic);
    CHECK(classify(MpiScore{2.0}).classification == Chronotype::Monochronic);
    CHECK(classify(MpiScore{3.0000001}).classification == Chronotype::Polychronic);
}

TEST_CASE("keying symmetry: flipping every answer mirrors the score") {
    std::array<int, 14> pattern = {1, 4, 2, 5, 3, 1, 2, 4, 5, 3, 2, 1, 4, 5};
    MpiResponse r;
    r.answers = pattern;
    MpiResponse flipped;
    for (std::size_t i = 0; i < 14; ++i) flipped.answers[i] = 6 - pattern[i];
    CHECK(score_mpi(r).value + score_mpi(flipped).value == doctest::Approx(6.0));
}

TEST_CASE("raising a switch-keyed answer never lowers the score") {
    std::array<int, 14> base = {2, 3, 1, 4, 2, 5, 3, 2, 4, 1, 3, 2, 5, 4};
    MpiResponse r;
    r.answers = base;
    const double s0 = score_mpi(r).value;
    for (std::size_t i = 0; i < 14; ++i) {
        if (!is_switch_keyed(i) || base[i] == 5) continue;
        MpiResponse bumped = r;
        bumped.answers[i] += 1;
        CHECK(score_mpi(bumped).value >= s0);
    }
}

TEST_CASE("csv row parsing") {
    const auto row =
        parse_mpi_csv_row("W001,5,4,5,4,1,2,5,1,4,2,1,5,2,1,3");
    CHECK(row.worker_id == "W001");
    CHECK(row.response.answers[0] == 5);
    CHECK(row.response.answers[13] == 1);
    REQUIRE(row.response.attention_checks.size() == 1);
    CHECK(row.response.attention_checks[0] == std::pair<int, int>{3, 3});
    CHECK(validate_attention(row.response));

    CHECK_THROWS_AS(parse_mpi_csv_row("W001,5,4"), ParseError);
    CHECK_THROWS_AS(parse_mpi_csv_row("W001,5,4,x,4,1,2,5,1,4,2,1,5,2,1,3"),
                    ParseError);
}
