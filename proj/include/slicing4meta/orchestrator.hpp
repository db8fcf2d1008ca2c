#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slicing4meta/catalog.hpp"
#include "slicing4meta/resources.hpp"
#include "slicing4meta/trace.hpp"

namespace slicing4meta {

enum class ServiceKind { ARVR, DT };

std::string_view to_string(ServiceKind k) noexcept;
/// Throws UnknownServiceKind.
ServiceKind service_kind_from_string(std::string_view s);

struct ServiceRequirements {
    ServiceKind kind = ServiceKind::ARVR;
    double peak_rate = 0.0;             // Mb/s
    double reliability = 0.0;           // probability
    double max_latency = 0.0;           // ms
    double rendering_per_object = 0.0;  // K
    IsolationDegree isolation = IsolationDegree::None;
};

struct RequirementOverrides {
    std::optional<double> peak_rate;
    std::optional<double> reliability;
    std::optional<double> max_latency;
    std::optional<double> rendering_per_object;
    std::optional<IsolationDegree> isolation;
};

struct ServiceRequest {
    std::string id;
    std::string user_id;
    ServiceKind kind = ServiceKind::ARVR;
    RequirementOverrides overrides;
};

struct SubInstanceRequirements {
    std::vector<std::string> models;
    ResourceVector demand;
    ServiceRequirements targets;
};

enum class MsiState { Preparation, Planning, RunTime, Decommissioned };

std::string_view to_string(MsiState s) noexcept;

/// A model attached to an MSI. When the model is shared, the reservation is
/// owned by one member of the sharing group and referenced by the others.
struct ModelAttachment {
    std::string model_id;
    ReservationId reservation = 0;
};

struct Msi {
    MsiId id = 0;
    ServiceKind cluster = ServiceKind::ARVR;
    MsiState state = MsiState::Preparation;
    std::vector<ModelAttachment> attachments;
    std::optional<ReservationId> extra;  // growth beyond the attached footprints
    std::vector<std::string> members;
    IsolationDegree isolation = IsolationDegree::None;
    ServiceRequirements requirements;

    bool live() const { return state != MsiState::Decommissioned; }
    const ModelAttachment* attachment(std::string_view model) const;
};

/// AR/VR template: 1 Tb/s peak rate, seven-nines reliability, sub-millisecond
/// interaction time, 20 K per virtual object. The DT template is an
/// overridable configuration default.
ServiceRequirements default_template(ServiceKind kind);

struct OrchestratorConfig {
    std::map<ServiceKind, ServiceRequirements> templates{{ServiceKind::ARVR, default_template(ServiceKind::ARVR)},
                                                         {ServiceKind::DT, default_template(ServiceKind::DT)}};
    std::map<ServiceKind, std::vector<std::string>> bundles;
    double tau = 0.1;  // similarity tolerance for reuse
};

/// Step I: template for the cluster merged with the request's overrides.
ServiceRequirements msmf_translate(const ServiceRequest& request, const OrchestratorConfig& config);

/// Step II: the configured TaaS bundle and its summed footprint.
SubInstanceRequirements vmof_convert(const ServiceRequirements& req, const Catalog& catalog,
                                     const OrchestratorConfig& config);

/// max over (peak_rate, reliability, max_latency, rendering_per_object) of |a-b| / max(|a|, |b|, eps).
double requirement_distance(const ServiceRequirements& a, const ServiceRequirements& b);

enum class DecisionKind { Reuse, Create, Modify };

std::string_view to_string(DecisionKind k) noexcept;

struct Decision {
    DecisionKind kind = DecisionKind::Create;
    MsiId msi = 0;  // target for Reuse / Modify
};

/// MMF, VMOF and MSMF acting on one catalog and one pool.
///
/// Every MSI reserves each attached model's footprint separately, so the
/// ledger can always be reconciled against the attachments. Decommissioning
/// hands a shared reservation to the lowest-id remaining sharer instead of
/// releasing it.
class Orchestrator {
public:
    Orchestrator(const Catalog& catalog, Pool& pool, OrchestratorConfig config, TraceLog* trace = nullptr);

    /// Step III. Throws InsufficientResources when neither Modify nor Create fits.
    Decision mmf_decide(const SubInstanceRequirements& sub) const;

    struct Admission {
        Decision decision;
        MsiId msi = 0;
    };

    /// Steps I-III for one request, then applies the decision and adds the
    /// user as a member. New MSIs are driven through to RunTime.
    Admission admit(const ServiceRequest& request, double time = 0.0);

    /// New MSI in Preparation holding one reservation per bundle model.
    MsiId create_msi(const SubInstanceRequirements& sub);

    void apply_modify(MsiId id, const SubInstanceRequirements& sub);

    /// Single forward step only; entering Decommissioned gives up every reservation.
    void advance_lifecycle(MsiId id, MsiState target);

    /// Shares `model` from a with b when the isolation rule allows it.
    /// Returns false and changes nothing otherwise.
    bool attach_shared_model(MsiId a, MsiId b, std::string_view model);

    void add_member(MsiId id, const std::string& user);
    void remove_member(MsiId id, const std::string& user);

    /// Sets the MSI's extra (scaling) reservation to `amount`.
    void set_extra(MsiId id, const ResourceVector& amount);
    ResourceVector extra_of(MsiId id) const;

    /// Total capacity the MSI can use: attached footprints (shared ones
    /// included) plus its extra reservation.
    ResourceVector capacity_of(MsiId id) const;

    const Msi& msi(MsiId id) const;
    const std::map<MsiId, Msi>& msis() const { return msis_; }
    std::size_t live_count() const;

    /// Reservations agree with attachments; returns an empty string when consistent.
    std::string check_consistency() const;

    std::size_t created() const { return created_; }
    std::size_t reused() const { return reused_; }
    std::size_t modified() const { return modified_; }

    const Catalog& catalog() const { return catalog_; }
    const Pool& pool() const { return pool_; }
    const OrchestratorConfig& config() const { return config_; }

private:
    Msi& mutable_msi(MsiId id);
    bool shareable_with(const Msi& msi, IsolationDegree isolation) const;
    void detach(Msi& msi, std::size_t attachment_index);
    std::vector<MsiId> sharers(ReservationId reservation) const;

    const Catalog& catalog_;
    Pool& pool_;
    OrchestratorConfig config_;
    TraceLog* trace_;
    std::map<MsiId, Msi> msis_;
    MsiId next_id_ = 1;
    std::size_t created_ = 0;
    std::size_t reused_ = 0;
    std::size_t modified_ = 0;
};

}  // namespace slicing4meta
