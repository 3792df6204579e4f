#pragma once

namespace phaseless {

inline constexpr const char* VERSION = "0.1.0";

}
