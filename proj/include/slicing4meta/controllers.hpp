#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "slicing4meta/orchestrator.hpp"
#include "slicing4meta/qoe.hpp"
#include "slicing4meta/resource_vector.hpp"

namespace slicing4meta {

struct Prediction {
    std::map<ServiceKind, double> expected_arrivals;  // per epoch
};

/// p_1 = x_1, p_t = alpha x_t + (1 - alpha) p_{t-1}.
double exponential_moving_average(std::span<const double> history, double alpha);

/// Throws EmptyHistory if any cluster has no observations.
Prediction predict_demand(const std::map<ServiceKind, std::vector<double>>& history, double alpha);

/// prediction * per_request_demand * headroom.
ResourceVector design_cluster_capacity(double prediction, const ResourceVector& per_request_demand, double headroom);

enum class AllocationPolicy { Even, MIMax };

std::string_view to_string(AllocationPolicy p) noexcept;
AllocationPolicy allocation_policy_from_string(std::string_view s);

std::vector<double> local_allocate(std::span<const UserSession> users, double budget, AllocationPolicy policy,
                                   const QoEParams& params);

struct ScalingPolicy {
    double u_lo = 0.2;
    double u_hi = 0.9;
    ResourceVector step = ResourceVector::rendering_only(100.0);

    void validate() const;
};

enum class ScalingAction { None, ScaleUp, ScaleDown };

std::string_view to_string(ScalingAction a) noexcept;

using Utilization = std::array<double, ResourceVector::kDimensions>;

/// Threshold rule alone: ScaleUp if any dimension >= u_hi, ScaleDown if all <= u_lo.
ScalingAction scaling_decision(const Utilization& utilization, const ScalingPolicy& policy);

struct ScalingOutcome {
    ScalingAction requested = ScalingAction::None;
    ScalingAction applied = ScalingAction::None;
    std::string warning;
};

/// Applies the threshold rule to one MSI. ScaleUp grows its extra reservation
/// by one step; if the pool cannot cover it the action is downgraded to None
/// and a warning is returned. ScaleDown shrinks the extra reservation by one
/// step without dropping capacity below current usage.
ScalingOutcome monitor_and_scale(Orchestrator& orchestrator, MsiId msi, const Utilization& utilization,
                                 const ScalingPolicy& policy);

struct ControlReport {
    double time = 0.0;
    ServiceKind cluster = ServiceKind::ARVR;
    MsiId msi = 0;
    std::string action;
};

struct ClusterFeedback {
    ServiceKind cluster = ServiceKind::ARVR;
    ResourceVector budget;
    std::size_t acknowledged = 0;
};

/// Coarse-timescale controller: counts arrivals per epoch, predicts the next
/// epoch's demand and designs per-cluster capacity. Consumes every report the
/// local controllers send.
class GlobalController {
public:
    GlobalController(double alpha, double headroom);

    void record_arrival(ServiceKind kind);
    void receive(const ControlReport& report);

    /// Closes the current epoch and returns feedback for each cluster.
    std::vector<ClusterFeedback> on_epoch(const std::map<ServiceKind, ResourceVector>& per_request_demand);

    const std::vector<ControlReport>& log() const { return log_; }
    const Prediction& prediction() const { return prediction_; }
    const std::map<ServiceKind, std::vector<double>>& history() const { return history_; }

private:
    double alpha_;
    double headroom_;
    std::map<ServiceKind, double> current_{{ServiceKind::ARVR, 0.0}, {ServiceKind::DT, 0.0}};
    std::map<ServiceKind, std::vector<double>> history_;
    Prediction prediction_;
    std::vector<ControlReport> log_;
    std::size_t acknowledged_ = 0;
};

/// Fine-timescale controller for one service cluster.
class LocalController {
public:
    LocalController(ServiceKind cluster, AllocationPolicy policy, ScalingPolicy scaling, QoEParams params,
                    GlobalController& global);

    std::vector<double> allocate(double time, MsiId msi, std::span<const UserSession> users, double budget);
    ScalingOutcome monitor(double time, Orchestrator& orchestrator, MsiId msi, const Utilization& utilization);

    void apply_feedback(const ClusterFeedback& feedback) { budget_ = feedback.budget; }
    const ResourceVector& budget() const { return budget_; }
    std::size_t reports_sent() const { return reports_; }
    ServiceKind cluster() const { return cluster_; }

private:
    void report(double time, MsiId msi, std::string action);

    ServiceKind cluster_;
    AllocationPolicy policy_;
    ScalingPolicy scaling_;
    QoEParams params_;
    GlobalController& global_;
    ResourceVector budget_;
    std::size_t reports_ = 0;
};

}  // namespace slicing4meta
