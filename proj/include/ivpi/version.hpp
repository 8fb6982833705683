#pragma once

namespace ivpi {
inline constexpr const char* kVersion = "0.1.0";
}
