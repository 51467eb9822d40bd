#pragma once

namespace ks2 {

inline constexpr const char* version = "1.0.0";

}
