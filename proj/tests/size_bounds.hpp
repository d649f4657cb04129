#pragma once

#include "arithdyn/checks.hpp"

namespace testsupport {

using arithdyn::archimedean_size_check;
using arithdyn::finite_size_check;

}  // namespace testsupport
