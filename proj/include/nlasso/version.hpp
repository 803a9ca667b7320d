#pragma once

namespace nlasso {

inline constexpr const char* kVersion = "0.1.0";

} // namespace nlasso
