#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tryon {

// Shape/size violations (mismatched spatial dims, bad channel counts, ...).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Invalid scalar arguments (negative weights, out-of-range probabilities, ...).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A pluggable component did not honor its contract (wrong token count, ...).
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Attribute record validation failure; carries every violation found.
struct ValidationError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ValidationError(std::vector<std::string> v);
};

// Caption text that does not follow the template; names the first bad slot.
struct CaptionParseError : std::runtime_error {
    std::string slot;
    CaptionParseError(const std::string& slot_name, const std::string& msg);
};

struct EmptyCaptionError : std::runtime_error {
    EmptyCaptionError() : std::runtime_error("caption empty after cleaning") {}
};

struct CaptionUnavailableError : std::runtime_error {
    CaptionUnavailableError()
        : std::runtime_error("all caption clients failed and no attribute annotation present") {}
};

// Missing or unusable annotation (parse classes, pose files, ...).
struct AnnotationError : std::runtime_error {
    explicit AnnotationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Per-asset dataset errors; names the offending asset.
struct AssetError : std::runtime_error {
    std::string asset;
    AssetError(const std::string& asset_name, const std::string& msg);
};

// Checkpoint/config fingerprints that do not match.
struct ProvenanceError : std::runtime_error {
    explicit ProvenanceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tryon
