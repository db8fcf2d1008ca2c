#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace slicing4meta {

/// Structured event log serialized as JSON lines.
class TraceLog {
public:
    void emit(double time, std::string kind, nlohmann::json fields = nlohmann::json::object());

    const std::vector<nlohmann::json>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    /// One compact JSON object per line, '\n' terminated.
    std::string to_jsonl() const;

private:
    std::vector<nlohmann::json> records_;
};

}  // namespace slicing4meta
