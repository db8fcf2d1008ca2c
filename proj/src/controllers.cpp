#include "slicing4meta/controllers.hpp"

#include <algorithm>

#include "slicing4meta/error.hpp"

namespace slicing4meta {

double exponential_moving_average(std::span<const double> history, double alpha)
{
    if (history.empty()) throw Error(Errc::EmptyHistory, "prediction needs at least one observation");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidParams, "alpha must be in (0,1]");
    double p = history.front();
    for (std::size_t t = 1; t < history.size(); ++t) p = alpha * history[t] + (1.0 - alpha) * p;
    return p;
}

Prediction predict_demand(const std::map<ServiceKind, std::vector<double>>& history, double alpha)
{
    if (history.empty()) throw Error(Errc::EmptyHistory, "no clusters observed");
    Prediction p;
    for (const auto& [kind, series] : history) {
        if (std::any_of(series.begin(), series.end(), [](double x) { return x < 0.0; }))
            throw Error(Errc::DomainError, "arrival counts must be >= 0");
        p.expected_arrivals[kind] = exponential_moving_average(series, alpha);
    }
    return p;
}

ResourceVector design_cluster_capacity(double prediction, const ResourceVector& per_request_demand, double headroom)
{
    if (!(headroom >= 1.0)) throw Error(Errc::InvalidParams, "headroom must be >= 1");
    if (prediction < 0.0) throw Error(Errc::DomainError, "prediction must be >= 0");
    return per_request_demand * (prediction * headroom);
}

std::string_view to_string(AllocationPolicy p) noexcept
{
    return p == AllocationPolicy::Even ? "even" : "mimax";
}

AllocationPolicy allocation_policy_from_string(std::string_view s)
{
    if (s == "even") return AllocationPolicy::Even;
    if (s == "mimax") return AllocationPolicy::MIMax;
    throw Error(Errc::ConfigInvalid, "unknown allocation policy '" + std::string(s) + "'");
}

std::vector<double> local_allocate(std::span<const UserSession> users, double budget, AllocationPolicy policy,
                                   const QoEParams& params)
{
    if (!(budget >= 0.0)) throw Error(Errc::InvalidParams, "budget must be >= 0");
    return policy == AllocationPolicy::Even ? even_allocation(budget, users)
                                            : mi_max_allocation(budget, users, params);
}

void ScalingPolicy::validate() const
{
    if (!(u_hi > 0.0 && u_hi <= 1.0)) throw Error(Errc::InvalidParams, "u_hi must be in (0,1]");
    if (!(u_lo >= 0.0 && u_lo < u_hi)) throw Error(Errc::InvalidParams, "u_lo must be in [0,u_hi)");
    if (!step.is_nonnegative()) throw Error(Errc::InvalidParams, "scaling step must be >= 0");
}

std::string_view to_string(ScalingAction a) noexcept
{
    switch (a) {
    case ScalingAction::None: return "None";
    case ScalingAction::ScaleUp: return "ScaleUp";
    case ScalingAction::ScaleDown: return "ScaleDown";
    }
    return "None";
}

ScalingAction scaling_decision(const Utilization& utilization, const ScalingPolicy& policy)
{
    for (double u : utilization)
        if (!(u >= 0.0 && u <= 1.0)) throw Error(Errc::DomainError, "utilization must be in [0,1]");
    if (std::any_of(utilization.begin(), utilization.end(), [&](double u) { return u >= policy.u_hi; }))
        return ScalingAction::ScaleUp;
    if (std::all_of(utilization.begin(), utilization.end(), [&](double u) { return u <= policy.u_lo; }))
        return ScalingAction::ScaleDown;
    return ScalingAction::None;
}

ScalingOutcome monitor_and_scale(Orchestrator& orchestrator, MsiId msi, const Utilization& utilization,
                                 const ScalingPolicy& policy)
{
    policy.validate();
    ScalingOutcome out;
    out.requested = scaling_decision(utilization, policy);
    if (out.requested == ScalingAction::None) return out;

    const ResourceVector extra = orchestrator.extra_of(msi);
    if (out.requested == ScalingAction::ScaleUp) {
        try {
            orchestrator.set_extra(msi, extra + policy.step);
            out.applied = ScalingAction::ScaleUp;
        } catch (const Error& e) {
            if (e.code() != Errc::InsufficientResources) throw;
            out.warning = e.what();
        }
        return out;
    }

    // Shrink by one step, but keep capacity >= utilization * capacity.
    const auto capacity = orchestrator.capacity_of(msi).as_array();
    const auto current = extra.as_array();
    const auto step = policy.step.as_array();
    std::array<double, ResourceVector::kDimensions> shrunk{};
    for (std::size_t d = 0; d < shrunk.size(); ++d) {
        const double usage = utilization[d] * capacity[d];
        const double slack = capacity[d] - usage;
        shrunk[d] = std::max({0.0, current[d] - step[d], current[d] - slack});
    }
    orchestrator.set_extra(msi, ResourceVector::from_array(shrunk));
    out.applied = ScalingAction::ScaleDown;
    return out;
}

GlobalController::GlobalController(double alpha, double headroom) : alpha_(alpha), headroom_(headroom)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidParams, "alpha must be in (0,1]");
    if (!(headroom >= 1.0)) throw Error(Errc::InvalidParams, "headroom must be >= 1");
}

void GlobalController::record_arrival(ServiceKind kind)
{
    current_[kind] += 1.0;
}

void GlobalController::receive(const ControlReport& report)
{
    log_.push_back(report);
}

std::vector<ClusterFeedback> GlobalController::on_epoch(const std::map<ServiceKind, ResourceVector>& per_request_demand)
{
    for (auto& [kind, count] : current_) {
        history_[kind].push_back(count);
        count = 0.0;
    }
    prediction_ = predict_demand(history_, alpha_);

    std::map<ServiceKind, std::size_t> pending;
    for (std::size_t i = acknowledged_; i < log_.size(); ++i) ++pending[log_[i].cluster];
    acknowledged_ = log_.size();

    std::vector<ClusterFeedback> feedback;
    for (const auto& [kind, expected] : prediction_.expected_arrivals) {
        auto it = per_request_demand.find(kind);
        const ResourceVector demand = it == per_request_demand.end() ? ResourceVector{} : it->second;
        feedback.push_back({kind, design_cluster_capacity(expected, demand, headroom_), pending[kind]});
    }
    return feedback;
}

LocalController::LocalController(ServiceKind cluster, AllocationPolicy policy, ScalingPolicy scaling,
                                 QoEParams params, GlobalController& global)
    : cluster_(cluster), policy_(policy), scaling_(scaling), params_(params), global_(global)
{
    scaling_.validate();
    params_.validate();
}

void LocalController::report(double time, MsiId msi, std::string action)
{
    ++reports_;
    global_.receive({time, cluster_, msi, std::move(action)});
}

std::vector<double> LocalController::allocate(double time, MsiId msi, std::span<const UserSession> users,
                                              double budget)
{
    auto alloc = local_allocate(users, budget, policy_, params_);
    report(time, msi, "allocate");
    return alloc;
}

ScalingOutcome LocalController::monitor(double time, Orchestrator& orchestrator, MsiId msi,
                                        const Utilization& utilization)
{
    ScalingOutcome out = monitor_and_scale(orchestrator, msi, utilization, scaling_);
    if (out.requested != ScalingAction::None)
        report(time, msi, out.applied == ScalingAction::None ? "scale-rejected" : std::string(to_string(out.applied)));
    return out;
}

}  // namespace slicing4meta
