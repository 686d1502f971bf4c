#include "tryon/semantics/caption.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace tryon::sem {

std::string caption_source_name(CaptionSource s) {
    switch (s) {
        case CaptionSource::primary: return "primary";
        case CaptionSource::fallback: return "fallback";
        case CaptionSource::local_template: return "local_template";
    }
    return "unknown";
}

std::string serialize_caption(const GarmentAttributes& attrs) {
    GarmentAttributes a = validate_attributes(attrs);
    std::ostringstream os;
    os << "a " << a.fit << " " << a.color << " " << a.pattern << " top with " << a.collar << ", "
       << a.neckline << " neckline, " << a.sleeve << ", " << a.shirt_length << " length";
    return os.str();
}

namespace {

// Sequential template reader; reports the slot it was trying to fill.
struct Reader {
    const std::string& s;
    size_t pos = 0;

    bool eat(const std::string& literal) {
        if (s.compare(pos, literal.size(), literal) != 0) return false;
        pos += literal.size();
        return true;
    }
    std::string until(const std::string& delim, const std::string& slot) {
        size_t at = s.find(delim, pos);
        if (at == std::string::npos)
            throw CaptionParseError(slot, "expected '" + delim + "' after slot value");
        std::string out = s.substr(pos, at - pos);
        pos = at + delim.size();
        return out;
    }
    std::string token(const std::string& slot) {
        size_t at = s.find(' ', pos);
        if (at == std::string::npos || at == pos)
            throw CaptionParseError(slot, "expected a token");
        std::string out = s.substr(pos, at - pos);
        pos = at + 1;
        return out;
    }
    std::string rest() { return s.substr(pos); }
};

void check_slot(const std::string& slot, const std::string& value,
                const std::vector<std::string>& allowed) {
    if (std::find(allowed.begin(), allowed.end(), value) == allowed.end())
        throw CaptionParseError(slot, "'" + value + "' is not a valid value");
}

}  // namespace

GarmentAttributes parse_caption(const std::string& text) {
    Reader r{text};
    GarmentAttributes a;
    if (!r.eat("a ")) throw CaptionParseError("fit", "caption must start with 'a '");
    a.fit = r.token("fit");
    check_slot("fit", a.fit, fit_values());
    a.color = r.token("color");
    if (a.color == "top") throw CaptionParseError("color", "missing color token");
    a.pattern = r.token("pattern");
    if (a.pattern == "top") throw CaptionParseError("pattern", "missing pattern token");
    if (!r.eat("top with "))
        throw CaptionParseError("collar", "expected 'top with' before the collar slot");
    a.collar = r.until(", ", "collar");
    check_slot("collar", a.collar, collar_values());
    a.neckline = r.until(" neckline, ", "neckline");
    check_slot("neckline", a.neckline, neckline_values());
    a.sleeve = r.until(", ", "sleeve");
    check_slot("sleeve", a.sleeve, sleeve_values());
    std::string tail = r.rest();
    const std::string suffix = " length";
    if (tail.size() <= suffix.size() || tail.compare(tail.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw CaptionParseError("shirt_length", "caption must end with '<length> length'");
    a.shirt_length = tail.substr(0, tail.size() - suffix.size());
    check_slot("shirt_length", a.shirt_length, shirt_length_values());
    return validate_attributes(a);
}

std::string clean_caption(const std::string& raw) {
    std::string s = raw;

    // Markdown fences (with optional language tag) and stray backticks.
    static const std::regex fence(R"(```[a-zA-Z0-9_-]*)");
    s = std::regex_replace(s, fence, " ");
    s.erase(std::remove(s.begin(), s.end(), '`'), s.end());

    // Role prefixes at the start of the text or a line.
    static const std::regex role(R"((^|\n)\s*(assistant|system|user|model|ai|bot)\s*:\s*)",
                                 std::regex::icase);
    s = std::regex_replace(s, role, "$1");

    // Bracketed metadata blocks, innermost-first until stable.
    static const std::regex paren(R"(\([^()]*\))");
    static const std::regex square(R"(\[[^\[\]]*\])");
    static const std::regex curly(R"(\{[^{}]*\})");
    for (;;) {
        std::string next = std::regex_replace(s, paren, " ");
        next = std::regex_replace(next, square, " ");
        next = std::regex_replace(next, curly, " ");
        if (next == s) break;
        s = std::move(next);
    }

    // Whitespace normalization; no space before closing punctuation.
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            bool punct = (c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?');
            if (!punct) out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    if (out.empty()) throw EmptyCaptionError();
    return out;
}

}  // namespace tryon::sem
