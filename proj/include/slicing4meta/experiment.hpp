#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicing4meta/controllers.hpp"
#include "slicing4meta/qoe.hpp"

namespace slicing4meta {

/// Virtual-travel sweep: a fixed rendering server shared by N users under
/// several downlink-rate conditions.
struct SweepConfig {
    double total_rendering = 4000.0;  // K
    std::vector<int> n_users{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> rates{50.0, 100.0, 200.0, 400.0};  // Mb/s
    double bep = 0.001;
    std::uint64_t seed = 1;
    AllocationPolicy policy = AllocationPolicy::Even;
    int objects_min = 1;
    int objects_max = 56;
    QoEParams qoe;

    /// Throws ConfigInvalid.
    void validate() const;
};

struct SweepRow {
    int n_users = 0;
    double rate = 0.0;
    double mean_mi = 0.0;
    double min_mi = 0.0;
    double max_mi = 0.0;
};

/// One row per (N, rate) in config order, N-major. A single population of
/// max(N) users is drawn from the seed; the cell for N uses its first N
/// users, and every rate condition sees the same users.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Header "n_users,rate_mbps,mean_mi,min_mi,max_mi", '\n' line endings.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace slicing4meta
