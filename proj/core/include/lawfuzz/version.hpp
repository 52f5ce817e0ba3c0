#pragma once

namespace lawfuzz {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lawfuzz
