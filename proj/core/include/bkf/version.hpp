#pragma once

namespace bkf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bkf
