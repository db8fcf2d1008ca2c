#include "slicing4meta/trace.hpp"

namespace slicing4meta {

void TraceLog::emit(double time, std::string kind, nlohmann::json fields)
{
    nlohmann::json record = nlohmann::json::object();
    record["t"] = time;
    record["event"] = std::move(kind);
    for (auto& [key, value] : fields.items()) record[key] = value;
    records_.push_back(std::move(record));
}

std::string TraceLog::to_jsonl() const
{
    std::string out;
    for (const auto& r : records_) {
        out += r.dump();
        out += '\n';
    }
    return out;
}

}  // namespace slicing4meta
