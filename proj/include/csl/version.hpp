#pragma once

namespace csl {

inline constexpr const char* kVersion = "1.0.0";

}
