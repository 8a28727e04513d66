#pragma once

#include "tbnet/network.hpp"
#include "tbnet/io.hpp"
#include "tbnet/matching.hpp"
#include "tbnet/treebased.hpp"
#include "tbnet/temporal.hpp"
#include "tbnet/antichain.hpp"

namespace tbnet {
inline constexpr const char* kVersion = "0.1.0";
}
