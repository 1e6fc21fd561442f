#pragma once

namespace etdms {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace etdms
