#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include "slicing4meta/catalog.hpp"
#include "slicing4meta/controllers.hpp"
#include "slicing4meta/orchestrator.hpp"
#include "slicing4meta/qoe.hpp"

namespace slicing4meta {

struct ArrivalRequest {
    double time_ms = 0.0;
    std::string user;
    ServiceKind service = ServiceKind::ARVR;
    double rate = 100.0;  // Mb/s
    double bep = 0.0;
    std::optional<double> holding_ms;  // absent: stays until the end of the run
    std::optional<int> n_objects;      // absent: sampled
    RequirementOverrides overrides;
};

/// Poisson arrivals with exponential holding times.
struct ArrivalProcess {
    int count = 0;
    double mean_interarrival_ms = 100.0;
    double mean_holding_ms = 0.0;  // 0: users never leave
    double arvr_fraction = 1.0;
    double rate = 100.0;
    double bep = 0.001;
};

struct ControllerConfig {
    AllocationPolicy policy = AllocationPolicy::Even;
    double alpha = 0.3;
    double headroom = 1.2;
    ScalingPolicy scaling;
    double epoch_ms = 1000.0;
    double monitor_ms = 100.0;
};

struct Scenario {
    std::uint64_t seed = 0;
    std::optional<double> duration_ms;
    std::vector<MaaSModel> catalog;
    QoEParams qoe;
    ControllerConfig controllers;
    OrchestratorConfig orchestrator;
    int objects_min = 1;
    int objects_max = 56;
    std::vector<ArrivalRequest> requests;
    std::optional<ArrivalProcess> arrival_process;

    Catalog build_catalog() const;
};

/// Validates against the scenario schema. Failures throw ScenarioInvalid whose
/// message starts with the path of the offending field, e.g.
/// "catalog[1].supply.rendering: must be >= 0".
Scenario parse_scenario(const nlohmann::json& doc);

/// As above from text; malformed JSON is reported as ScenarioInvalid too.
Scenario parse_scenario_text(std::string_view text);

/// Throws IoError if the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace slicing4meta
