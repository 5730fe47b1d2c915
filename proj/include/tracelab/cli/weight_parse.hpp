#pragma once

#include <cstddef>
#include <string>

#include "tracelab/bpw.hpp"

namespace tracelab::cli {

/// "3", "-2.5", "2i", "-i", "1+2i", "1e-3-4e-2i".
Complex parse_complex(const std::string& text);

/// `harmonic`, `invsq` (both generated to `count` terms) or
/// `list:v1,v2,...` with complex entries.
WeightSpec parse_weight_spec(const std::string& text, std::size_t count);

}  // namespace tracelab::cli
