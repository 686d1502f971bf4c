#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tryon/core/tensor.hpp"

namespace tryon::core {

// Single-file parameter archive with an embedded config fingerprint. Used for
// module checkpoints (parameters + optimizer state + rng state).
struct Checkpoint {
    uint64_t config_fingerprint = 0;
    int64_t step = 0;
    int64_t epoch = 0;
    std::string rng_state;
    std::string config_text;  // canonical config, for inspection
    std::map<std::string, Tensor> tensors;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

// FNV-1a over a byte string; used for config fingerprints and file hashes.
uint64_t fnv1a64(const std::string& bytes);
uint64_t file_hash(const std::string& path);
std::string hash_hex(uint64_t h);

}  // namespace tryon::core
