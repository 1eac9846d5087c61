#pragma once

namespace gibbswave {

inline constexpr const char* kVersion = "0.1.0";

}
