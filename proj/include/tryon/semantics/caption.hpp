#pragma once

#include <string>

#include "tryon/semantics/attributes.hpp"

namespace tryon::sem {

enum class CaptionSource { primary, fallback, local_template };

std::string caption_source_name(CaptionSource s);

struct CaptionResult {
    std::string text;
    CaptionSource source = CaptionSource::local_template;
    std::string raw;  // pre-cleaning string
};

// Fixed template:
//   "a {fit} {color} {pattern} top with {collar}, {neckline} neckline,
//    {sleeve}, {shirt_length} length"
// Injective over attribute tuples, so parse_caption inverts it exactly.
std::string serialize_caption(const GarmentAttributes& attrs);

// Inverse of serialize_caption on template-conformant text. Throws
// CaptionParseError naming the first failing slot.
GarmentAttributes parse_caption(const std::string& text);

// Strips API metadata: bracketed/parenthesized blocks, role prefixes,
// markdown fences, duplicate whitespace. Idempotent. Throws
// EmptyCaptionError when nothing is left.
std::string clean_caption(const std::string& raw);

}  // namespace tryon::sem
