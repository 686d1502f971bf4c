#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "tryon/semantics/caption.hpp"

namespace tryon::sem {

struct CaptionRequest {
    std::string image_id;  // opaque reference to the garment image
};

enum class CaptionStatus { ok, timeout, safety_rejection, error };

struct CaptionResponse {
    CaptionStatus status = CaptionStatus::error;
    std::string text;
};

// Abstract remote captioner. Implementations either tolerate concurrent
// requests or declare a serial contract; call() honors both.
class CaptionClient {
public:
    virtual ~CaptionClient() = default;
    virtual bool concurrent_safe() const { return true; }

    CaptionResponse call(const CaptionRequest& request);

protected:
    virtual CaptionResponse request(const CaptionRequest& request) = 0;

private:
    std::mutex serial_gate_;
};

// Test/deterministic client that replays a scripted response sequence.
class ScriptedClient : public CaptionClient {
public:
    explicit ScriptedClient(std::deque<CaptionResponse> responses, bool concurrent = true)
        : responses_(std::move(responses)), concurrent_(concurrent) {}
    bool concurrent_safe() const override { return concurrent_; }
    size_t remaining() const { return responses_.size(); }

protected:
    CaptionResponse request(const CaptionRequest&) override;

private:
    std::deque<CaptionResponse> responses_;
    bool concurrent_;
};

struct CaptionPolicy {
    bool allow_remote = true;
};

// Dual-client strategy: primary first, fallback on timeout / safety rejection
// / malformed output, deterministic local template as the last resort. The
// returned caption always survives clean_caption + parse_caption.
CaptionResult generate_caption(const CaptionRequest& request, CaptionClient* primary,
                               CaptionClient* fallback,
                               const std::optional<GarmentAttributes>& local_attrs,
                               const CaptionPolicy& policy = {});

}  // namespace tryon::sem
