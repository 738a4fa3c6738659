#pragma once

namespace tempora {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tempora
