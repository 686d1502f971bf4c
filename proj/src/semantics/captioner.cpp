#include "tryon/semantics/captioner.hpp"

namespace tryon::sem {

CaptionResponse CaptionClient::call(const CaptionRequest& req) {
    if (concurrent_safe()) return request(req);
    std::lock_guard<std::mutex> lock(serial_gate_);
    return request(req);
}

CaptionResponse ScriptedClient::request(const CaptionRequest&) {
    if (responses_.empty()) return {CaptionStatus::error, ""};
    CaptionResponse r = responses_.front();
    responses_.pop_front();
    return r;
}

static std::optional<CaptionResult> try_client(CaptionClient* client, const CaptionRequest& req,
                                               CaptionSource source) {
    if (!client) return std::nullopt;
    CaptionResponse resp = client->call(req);
    if (resp.status != CaptionStatus::ok) return std::nullopt;
    try {
        std::string cleaned = clean_caption(resp.text);
        parse_caption(cleaned);  // malformed output falls through to the next client
        return CaptionResult{cleaned, source, resp.text};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

CaptionResult generate_caption(const CaptionRequest& request, CaptionClient* primary,
                               CaptionClient* fallback,
                               const std::optional<GarmentAttributes>& local_attrs,
                               const CaptionPolicy& policy) {
    if (policy.allow_remote) {
        if (auto r = try_client(primary, request, CaptionSource::primary)) return *r;
        if (auto r = try_client(fallback, request, CaptionSource::fallback)) return *r;
    }
    if (local_attrs) {
        std::string text = serialize_caption(*local_attrs);
        return CaptionResult{text, CaptionSource::local_template, text};
    }
    throw CaptionUnavailableError();
}

}  // namespace tryon::sem
