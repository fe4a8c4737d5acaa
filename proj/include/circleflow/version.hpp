#pragma once

namespace circleflow {
inline constexpr const char* version = "0.1.0";
}
