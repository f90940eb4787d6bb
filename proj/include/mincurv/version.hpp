#pragma once

namespace mincurv {
inline constexpr const char* version = "0.1.0";
}
