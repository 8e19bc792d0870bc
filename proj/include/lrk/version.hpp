#pragma once

namespace lrk {
inline constexpr const char* kVersion = "0.1.0";
}
