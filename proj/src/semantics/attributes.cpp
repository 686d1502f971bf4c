#include "tryon/semantics/attributes.hpp"

#include <algorithm>
#include <sstream>

namespace tryon::sem {

const std::vector<std::string>& fit_values() {
    static const std::vector<std::string> v{"slim", "loose", "straight"};
    return v;
}
const std::vector<std::string>& neckline_values() {
    static const std::vector<std::string> v{"low", "mid", "high"};
    return v;
}
const std::vector<std::string>& collar_values() {
    static const std::vector<std::string> v{"v-neck", "deep v-neck", "round neck", "square neck",
                                            "irregular"};
    return v;
}
const std::vector<std::string>& sleeve_values() {
    static const std::vector<std::string> v{"sleeveless", "short sleeve", "long sleeve"};
    return v;
}
const std::vector<std::string>& shirt_length_values() {
    static const std::vector<std::string> v{"high waist", "normal", "long", "extra-long"};
    return v;
}

static bool is_token(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-')) return false;
    return true;
}

static std::string allowed(const std::vector<std::string>& values) {
    std::ostringstream os;
    for (size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << values[i];
    return os.str();
}

static void check_enum(std::vector<std::string>& out, const std::string& slot,
                       const std::string& value, const std::vector<std::string>& values) {
    if (value.empty()) {
        out.push_back(slot + ": missing");
        return;
    }
    if (std::find(values.begin(), values.end(), value) == values.end())
        out.push_back(slot + ": '" + value + "' not in {" + allowed(values) + "}");
}

std::vector<std::string> attribute_violations(const GarmentAttributes& a) {
    std::vector<std::string> out;
    check_enum(out, "fit", a.fit, fit_values());
    if (a.pattern.empty())
        out.push_back("pattern: missing");
    else if (!is_token(a.pattern))
        out.push_back("pattern: '" + a.pattern + "' is not a lowercase token");
    if (a.color.empty())
        out.push_back("color: missing");
    else if (!is_token(a.color))
        out.push_back("color: '" + a.color + "' is not a lowercase token");
    check_enum(out, "neckline", a.neckline, neckline_values());
    check_enum(out, "collar", a.collar, collar_values());
    check_enum(out, "sleeve", a.sleeve, sleeve_values());
    check_enum(out, "shirt_length", a.shirt_length, shirt_length_values());
    return out;
}

GarmentAttributes validate_attributes(const GarmentAttributes& candidate) {
    auto violations = attribute_violations(candidate);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return candidate;
}

GarmentAttributes random_attributes(core::Rng& rng) {
    static const std::vector<std::string> colors{"red",   "blue",  "green", "black", "white",
                                                 "gray",  "navy",  "beige", "pink",  "yellow",
                                                 "brown", "purple"};
    static const std::vector<std::string> patterns{"plain",  "striped", "floral", "dotted",
                                                   "checked", "solid",  "graphic", "paisley"};
    auto pick = [&](const std::vector<std::string>& v) {
        return v[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(v.size())))];
    };
    GarmentAttributes a;
    a.fit = pick(fit_values());
    a.pattern = pick(patterns);
    a.color = pick(colors);
    a.neckline = pick(neckline_values());
    a.collar = pick(collar_values());
    a.sleeve = pick(sleeve_values());
    a.shirt_length = pick(shirt_length_values());
    return a;
}

}  // namespace tryon::sem
