// Multitasking Preference Inventory scoring and monochronic/polychronic
// classification. The 14 inventory items are indexed in questionnaire order
// with the attention-check item excluded; seven items are keyed toward
// task-switching affinity and seven toward single-tasking, the latter are
// reverse-scored before averaging.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tempora/errors.hpp"

namespace tempora {

enum class Chronotype { Monochronic, Polychronic };

std::string to_string(Chronotype c);

struct MpiScore {
    double value = 3.0;  // mean of keyed items, in [1, 5]
};

struct ChronotypeProfile {
    Chronotype classification = Chronotype::Monochronic;
    MpiScore score;
};

struct MpiResponse {
    static constexpr std::size_t kItemCount = 14;

    std::array<int, kItemCount> answers{};  // each in 1..5
    // (expected, given) pairs; the questionnaire's check asks for "neutral" = 3.
    std::vector<std::pair<int, int>> attention_checks;
};

// Items keyed toward task-switching preference (scored as answered);
// the complement is single-tasking-keyed and reverse-scored (6 - answer).
// 0-based positions in questionnaire order.
constexpr std::array<std::size_t, 7> kSwitchKeyedItems = {0, 1, 2, 3, 6, 8, 11};

bool is_switch_keyed(std::size_t item_index);

// True iff every attention check was answered exactly as instructed.
bool validate_attention(const MpiResponse& response);

// Reverse-scores the single-tasking-keyed items and averages all 14.
// Throws InvalidResponse for out-of-range answers.
MpiScore score_mpi(const MpiResponse& response);

// Above scale midpoint -> polychronic; midpoint and below -> monochronic.
ChronotypeProfile classify(MpiScore score);

// One CSV respondent row: worker_id, a1..a14, attention_given.
struct MpiCsvRow {
    std::string worker_id;
    MpiResponse response;
};

// Parses "worker_id,a1,...,a14,attention_given". Throws ParseError.
MpiCsvRow parse_mpi_csv_row(const std::string& line);

// Header expected on MPI response CSV files.
extern const char* const kMpiCsvHeader;

}  // namespace tempora
