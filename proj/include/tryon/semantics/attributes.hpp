#pragma once

#include <array>
#include <string>
#include <vector>

#include "tryon/core/errors.hpp"
#include "tryon/core/rng.hpp"

namespace tryon::sem {

// Seven-slot structured garment record. Enum slots are closed sets; pattern
// and color are free lowercase tokens.
struct GarmentAttributes {
    std::string fit;           // slim | loose | straight
    std::string pattern;       // lowercase token
    std::string color;         // lowercase token
    std::string neckline;      // low | mid | high
    std::string collar;        // v-neck | deep v-neck | round neck | square neck | irregular
    std::string sleeve;        // sleeveless | short sleeve | long sleeve
    std::string shirt_length;  // high waist | normal | long | extra-long

    bool operator==(const GarmentAttributes&) const = default;
};

const std::vector<std::string>& fit_values();
const std::vector<std::string>& neckline_values();
const std::vector<std::string>& collar_values();
const std::vector<std::string>& sleeve_values();
const std::vector<std::string>& shirt_length_values();

// Returns the validated record or throws ValidationError carrying the
// complete list of violations (missing slots, out-of-enum values).
GarmentAttributes validate_attributes(const GarmentAttributes& candidate);
// Non-throwing variant; empty result means valid.
std::vector<std::string> attribute_violations(const GarmentAttributes& candidate);

// Uniform random valid record (property tests, fixtures).
GarmentAttributes random_attributes(core::Rng& rng);

}  // namespace tryon::sem
