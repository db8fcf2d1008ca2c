#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "slicing4meta/orchestrator.hpp"
#include "slicing4meta/qoe.hpp"
#include "slicing4meta/rng.hpp"
#include "slicing4meta/scenario.hpp"
#include "slicing4meta/trace.hpp"

namespace slicing4meta {

enum class EventKind { Arrival, Departure, EpochTick, MonitorTick };

std::string_view to_string(EventKind k) noexcept;

struct Event {
    double time = 0.0;  // ms
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::Arrival;
    std::size_t payload = 0;  // request index for arrivals and departures
};

/// Min-queue on (time, sequence). Sequence numbers are assigned on push.
class EventQueue {
public:
    Event push(double time, EventKind kind, std::size_t payload = 0);
    Event pop();
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
    std::optional<Event> last_;
};

/// n_objects uniform on [objects_min, objects_max], demand = n_objects * per_object_capacity.
UserSession sample_user(Rng& rng, std::string id, double rate, double bep, int objects_min, int objects_max,
                        const QoEParams& params);

struct UserRecord {
    std::string user;
    std::string request;
    ServiceKind service = ServiceKind::ARVR;
    bool admitted = false;
    MsiId msi = 0;
    int n_objects = 0;
    double demand = 0.0;
    double rate = 0.0;
    double bep = 0.0;
    double allocated = 0.0;
    MIResult mi;
    double arrival_ms = 0.0;
    std::optional<double> departure_ms;
};

struct LedgerSample {
    double time = 0.0;
    MsiId msi = 0;
    MsiState state = MsiState::Preparation;
    ResourceVector capacity;
};

struct MetricsReport {
    std::vector<UserRecord> users;
    std::vector<LedgerSample> ledger_history;
    TraceLog trace;
    std::size_t msis_created = 0;
    std::size_t msis_reused = 0;
    std::size_t msis_modified = 0;
    std::size_t rejected = 0;
    std::size_t events_processed = 0;
    std::size_t control_reports = 0;
    nlohmann::json final_pool;

    /// Mean MI over admitted users, 0 when there are none.
    double mean_mi() const;

    std::string users_csv() const;
    std::string ledger_csv() const;
    nlohmann::json summary() const;
};

/// Runs the scenario to completion. Output is a pure function of the
/// scenario (seed included). The pool conservation identity and the
/// orchestrator's reservation consistency are checked after every event.
MetricsReport run(const Scenario& scenario);

}  // namespace slicing4meta
