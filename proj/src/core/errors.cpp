#include "tryon/core/errors.hpp"

#include <sstream>

namespace tryon {

static std::string join_violations(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "attribute validation failed:";
    for (const auto& s : v) os << " [" << s << "]";
    return os.str();
}

ValidationError::ValidationError(std::vector<std::string> v)
    : std::runtime_error(join_violations(v)), violations(std::move(v)) {}

CaptionParseError::CaptionParseError(const std::string& slot_name, const std::string& msg)
    : std::runtime_error("caption parse failed at slot '" + slot_name + "': " + msg),
      slot(slot_name) {}

AssetError::AssetError(const std::string& asset_name, const std::string& msg)
    : std::runtime_error("asset '" + asset_name + "': " + msg), asset(asset_name) {}

}  // namespace tryon
