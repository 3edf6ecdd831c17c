#pragma once

#include "eclim/apps.hpp"
#include "eclim/channels.hpp"
#include "eclim/error.hpp"
#include "eclim/gaussian.hpp"
#include "eclim/linalg.hpp"
#include "eclim/lindblad.hpp"
#include "eclim/models.hpp"
#include "eclim/norms.hpp"
#include "eclim/opcore.hpp"
#include "eclim/random.hpp"

namespace eclim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

}  // namespace eclim
