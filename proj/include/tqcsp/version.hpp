#pragma once

namespace tqcsp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tqcsp
