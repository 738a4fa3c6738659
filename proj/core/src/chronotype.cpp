#include "tempora/chronotype.hpp"

#include <algorithm>
#include <sstream>

namespace tempora {

const char* const kMpiCsvHeader =
    "worker_id,a1,a2,a3,a4,a5,a6,a7,a8,a9,a10,a11,a12,a13,a14,attention_given";

std::string to_string(Chronotype c) {
    return c == Chronotype::Monochronic ? "monochronic" : "polychronic";
}

bool is_switch_keyed(std::size_t item_index) {
    return std::find(kSwitchKeyedItems.begin(), kSwitchKeyedItems.end(),
                     item_index) != kSwitchKeyedItems.end();
}

bool validate_attention(const MpiResponse& response) {
    for (const auto& [expected, given] : response.attention_checks) {
        if (expected != given) return false;
    }
    return true;
}

MpiScore score_mpi(const MpiResponse& response) {
    double sum = 0.0;
    for (std::size_t i = 0; i < MpiResponse::kItemCount; ++i) {
        const int a = response.answers[i];
        if (a < 1 || a > 5) {
            throw InvalidResponse("MPI answer " + std::to_string(i + 1) +
                                  " out of range: " + std::to_string(a));
        }
        sum += is_switch_keyed(i) ? a : 6 - a;
    }
    return MpiScore{sum / static_cast<double>(MpiResponse::kItemCount)};
}

ChronotypeProfile classify(MpiScore score) {
    ChronotypeProfile profile;
    profile.score = score;
    profile.classification = score.value > 3.0 ? Chronotype::Polychronic
                                               : Chronotype::Monochronic;
    return profile;
}

MpiCsvRow parse_mpi_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);

    if (fields.size() != 16) {
        throw ParseError("expected 16 CSV fields, got " +
                         std::to_string(fields.size()));
    }
    MpiCsvRow row;
    row.worker_id = fields[0];
    if (row.worker_id.empty()) throw ParseError("empty worker_id");
    auto to_int = [](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            throw ParseError("non-integer answer field: '" + s + "'");
        }
        if (pos != s.size()) throw ParseError("trailing junk in field: '" + s + "'");
        return v;
    };
    for (std::size_t i = 0; i < MpiResponse::kItemCount; ++i) {
        row.response.answers[i] = to_int(fields[1 + i]);
    }
    row.response.attention_checks.emplace_back(3, to_int(fields[15]));
    return row;
}

}  // namespace tempora
