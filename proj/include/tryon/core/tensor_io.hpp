#pragma once

#include <string>

#include "tryon/core/tensor.hpp"

namespace tryon::core {

// Portable binary tensor container: raw little-endian values in <path> plus a
// JSON sidecar <path>.json describing shape and dtype ("f32" or "f64").
void save_tensor(const std::string& path, const Tensor& t, bool as_f32 = true);
Tensor load_tensor(const std::string& path);

}  // namespace tryon::core
