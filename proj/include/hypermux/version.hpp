#pragma once

namespace hypermux {
inline constexpr const char* kVersion = "0.1.0";
}
