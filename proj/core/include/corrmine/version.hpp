#pragma once

namespace corrmine {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace corrmine
