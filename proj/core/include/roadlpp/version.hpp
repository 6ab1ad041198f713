#pragma once

namespace roadlpp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace roadlpp
