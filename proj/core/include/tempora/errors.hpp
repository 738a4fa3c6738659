// Error taxonomy shared across the library. Every failure mode callers are
// expected to branch on gets its own type so tests can assert on them.
#pragma once

#include <stdexcept>
#include <string>

namespace tempora {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySample final : Error { using Error::Error; };
struct InvalidResponse final : Error { using Error::Error; };
struct UnknownCategory final : Error { using Error::Error; };
struct NumericalError final : Error { using Error::Error; };
struct ColdStart final : Error { using Error::Error; };
struct ParseError final : Error { using Error::Error; };
struct OrderError final : Error { using Error::Error; };
struct NoWageData final : Error { using Error::Error; };
struct UndefinedBaseline final : Error { using Error::Error; };
struct SampleTooSmall final : Error { using Error::Error; };
struct DegenerateSample final : Error { using Error::Error; };
struct TooFewGroups final : Error { using Error::Error; };
struct EmptyInput final : Error { using Error::Error; };
struct InvalidK final : Error { using Error::Error; };
struct DegenerateTable final : Error { using Error::Error; };
struct InvalidParams final : Error { using Error::Error; };
struct ConfigError final : Error { using Error::Error; };
struct IoError final : Error { using Error::Error; };

}  // namespace tempora
