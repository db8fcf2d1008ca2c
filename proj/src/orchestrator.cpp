#include "slicing4meta/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slicing4meta/error.hpp"

namespace slicing4meta {

std::string_view to_string(ServiceKind k) noexcept
{
    return k == ServiceKind::ARVR ? "ARVR" : "DT";
}

ServiceKind service_kind_from_string(std::string_view s)
{
    if (s == "ARVR") return ServiceKind::ARVR;
    if (s == "DT") return ServiceKind::DT;
    throw Error(Errc::UnknownServiceKind, std::string(s));
}

std::string_view to_string(MsiState s) noexcept
{
    switch (s) {
    case MsiState::Preparation: return "Preparation";
    case MsiState::Planning: return "Planning";
    case MsiState::RunTime: return "RunTime";
    case MsiState::Decommissioned: return "Decommissioned";
    }
    return "Preparation";
}

std::string_view to_string(DecisionKind k) noexcept
{
    switch (k) {
    case DecisionKind::Reuse: return "Reuse";
    case DecisionKind::Create: return "Create";
    case DecisionKind::Modify: return "Modify";
    }
    return "Create";
}

const ModelAttachment* Msi::attachment(std::string_view model) const
{
    for (const auto& a : attachments)
        if (a.model_id == model) return &a;
    return nullptr;
}

ServiceRequirements default_template(ServiceKind kind)
{
    if (kind == ServiceKind::ARVR) return {ServiceKind::ARVR, 1e6, 0.9999999, 1.0, 20.0, IsolationDegree::None};
    return {ServiceKind::DT, 1000.0, 0.99999, 10.0, 20.0, IsolationDegree::Scheduling};
}

ServiceRequirements msmf_translate(const ServiceRequest& request, const OrchestratorConfig& config)
{
    auto it = config.templates.find(request.kind);
    if (it == config.templates.end())
        throw Error(Errc::UnknownServiceKind, "no template for " + std::string(to_string(request.kind)));
    ServiceRequirements req = it->second;
    req.kind = request.kind;
    const auto& o = request.overrides;
    if (o.peak_rate) req.peak_rate = *o.peak_rate;
    if (o.reliability) req.reliability = *o.reliability;
    if (o.max_latency) req.max_latency = *o.max_latency;
    if (o.rendering_per_object) req.rendering_per_object = *o.rendering_per_object;
    if (o.isolation) req.isolation = *o.isolation;
    if (req.reliability < 0.0 || req.reliability > 1.0)
        throw Error(Errc::DomainError, "reliability must be in [0,1]");
    if (req.peak_rate < 0.0 || req.max_latency < 0.0 || req.rendering_per_object < 0.0)
        throw Error(Errc::DomainError, "requirement magnitudes must be >= 0");
    return req;
}

SubInstanceRequirements vmof_convert(const ServiceRequirements& req, const Catalog& catalog,
                                     const OrchestratorConfig& config)
{
    auto it = config.bundles.find(req.kind);
    if (it == config.bundles.end() || it->second.empty())
        throw Error(Errc::MissingBundle, "no model bundle for " + std::string(to_string(req.kind)));
    SubInstanceRequirements sub;
    sub.targets = req;
    for (const auto& id : it->second) {
        sub.demand += catalog.effective_footprint(id);
        sub.models.push_back(id);
    }
    return sub;
}

double requirement_distance(const ServiceRequirements& a, const ServiceRequirements& b)
{
    constexpr double eps = 1e-12;
    auto rel = [](double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), eps}); };
    return std::max({rel(a.peak_rate, b.peak_rate), rel(a.reliability, b.reliability),
                     rel(a.max_latency, b.max_latency), rel(a.rendering_per_object, b.rendering_per_object)});
}

Orchestrator::Orchestrator(const Catalog& catalog, Pool& pool, OrchestratorConfig config, TraceLog* trace)
    : catalog_(catalog), pool_(pool), config_(std::move(config)), trace_(trace)
{
    if (!(config_.tau >= 0.0)) throw Error(Errc::InvalidParams, "similarity tolerance must be >= 0");
}

const Msi& Orchestrator::msi(MsiId id) const
{
    auto it = msis_.find(id);
    if (it == msis_.end()) throw Error(Errc::UnknownMsi, std::to_string(id));
    return it->second;
}

Msi& Orchestrator::mutable_msi(MsiId id)
{
    auto it = msis_.find(id);
    if (it == msis_.end()) throw Error(Errc::UnknownMsi, std::to_string(id));
    return it->second;
}

std::size_t Orchestrator::live_count() const
{
    return static_cast<std::size_t>(
        std::count_if(msis_.begin(), msis_.end(), [](const auto& kv) { return kv.second.live(); }));
}

bool Orchestrator::shareable_with(const Msi& m, IsolationDegree isolation) const
{
    if (std::max(m.isolation, isolation) == IsolationDegree::Physical) return false;
    return std::all_of(m.attachments.begin(), m.attachments.end(), [&](const ModelAttachment& a) {
        return may_share(catalog_.get(a.model_id), m.isolation, isolation);
    });
}

ResourceVector Orchestrator::capacity_of(MsiId id) const
{
    const Msi& m = msi(id);
    ResourceVector total;
    for (const auto& a : m.attachments) total += pool_.reservation(a.reservation).amount;
    if (m.extra) total += pool_.reservation(*m.extra).amount;
    return total;
}

ResourceVector Orchestrator::extra_of(MsiId id) const
{
    const Msi& m = msi(id);
    return m.extra ? pool_.reservation(*m.extra).amount : ResourceVector{};
}

Decision Orchestrator::mmf_decide(const SubInstanceRequirements& sub) const
{
    const Msi* nearest = nullptr;
    double nearest_distance = std::numeric_limits<double>::infinity();
    for (const auto& [id, m] : msis_) {
        if (m.cluster != sub.targets.kind) continue;
        if (m.state != MsiState::Planning && m.state != MsiState::RunTime) continue;
        if (!shareable_with(m, sub.targets.isolation)) continue;
        const double d = requirement_distance(m.requirements, sub.targets);
        if (d < nearest_distance) {  // strict: ties keep the lowest id
            nearest = &m;
            nearest_distance = d;
        }
    }

    if (nearest && nearest_distance <= config_.tau) return {DecisionKind::Reuse, nearest->id};

    if (nearest && nearest_distance <= 2.0 * config_.tau) {
        const ResourceVector current = capacity_of(nearest->id);
        const ResourceVector growth = elementwise_max(current, sub.demand) - current;
        if (pool_.can_reserve(growth)) return {DecisionKind::Modify, nearest->id};
    }

    if (pool_.can_reserve(sub.demand)) return {DecisionKind::Create, 0};
    throw Error(Errc::InsufficientResources,
                "cannot admit " + std::string(to_string(sub.targets.kind)) + " demand " + sub.demand.to_string());
}

MsiId Orchestrator::create_msi(const SubInstanceRequirements& sub)
{
    Msi m;
    m.id = next_id_;
    m.cluster = sub.targets.kind;
    m.isolation = sub.targets.isolation;
    m.requirements = sub.targets;
    try {
        for (const auto& model : sub.models) {
            const auto& r = pool_.reserve(m.id, catalog_.effective_footprint(model), m.isolation);
            m.attachments.push_back({model, r.id});
        }
    } catch (const Error&) {
        for (const auto& a : m.attachments) pool_.release(a.reservation);
        throw;
    }
    ++next_id_;
    ++created_;
    const MsiId id = m.id;
    msis_.emplace(id, std::move(m));
    return id;
}

void Orchestrator::apply_modify(MsiId id, const SubInstanceRequirements& sub)
{
    Msi& m = mutable_msi(id);
    if (!m.live()) throw Error(Errc::InvalidTransition, "cannot modify a decommissioned MSI");
    const ResourceVector current = capacity_of(id);
    const ResourceVector growth = elementwise_max(current, sub.demand) - current;
    if (!growth.is_zero()) set_extra(id, extra_of(id) + growth);

    auto& r = m.requirements;
    r.peak_rate = std::max(r.peak_rate, sub.targets.peak_rate);
    r.reliability = std::max(r.reliability, sub.targets.reliability);
    r.max_latency = std::min(r.max_latency, sub.targets.max_latency);
    r.rendering_per_object = std::max(r.rendering_per_object, sub.targets.rendering_per_object);
    ++modified_;
}

Orchestrator::Admission Orchestrator::admit(const ServiceRequest& request, double time)
{
    const ServiceRequirements req = msmf_translate(request, config_);
    const SubInstanceRequirements sub = vmof_convert(req, catalog_, config_);

    Decision decision;
    try {
        decision = mmf_decide(sub);
    } catch (const Error& e) {
        if (trace_ && e.code() == Errc::InsufficientResources)
            trace_->emit(time, "decision",
                         {{"request", request.id}, {"user", request.user_id}, {"decision", "Reject"}, {"msi", 0}});
        throw;
    }

    MsiId target = decision.msi;
    switch (decision.kind) {
    case DecisionKind::Create:
        target = create_msi(sub);
        advance_lifecycle(target, MsiState::Planning);
        advance_lifecycle(target, MsiState::RunTime);
        break;
    case DecisionKind::Modify:
        apply_modify(target, sub);
        break;
    case DecisionKind::Reuse:
        ++reused_;
        break;
    }
    add_member(target, request.user_id);
    if (trace_)
        trace_->emit(time, "decision",
                     {{"request", request.id},
                      {"user", request.user_id},
                      {"decision", std::string(to_string(decision.kind))},
                      {"msi", target}});
    return {decision, target};
}

std::vector<MsiId> Orchestrator::sharers(ReservationId reservation) const
{
    std::vector<MsiId> ids;
    for (const auto& [id, m] : msis_) {
        if (!m.live()) continue;
        for (const auto& a : m.attachments)
            if (a.reservation == reservation) {
                ids.push_back(id);
                break;
            }
    }
    return ids;
}

void Orchestrator::detach(Msi& m, std::size_t index)
{
    const ReservationId r = m.attachments[index].reservation;
    m.attachments.erase(m.attachments.begin() + static_cast<std::ptrdiff_t>(index));
    if (pool_.reservation(r).owner != m.id) return;
    std::vector<MsiId> others = sharers(r);
    std::erase(others, m.id);
    if (others.empty())
        pool_.release(r);
    else
        pool_.transfer(r, others.front());
}

void Orchestrator::advance_lifecycle(MsiId id, MsiState target)
{
    Msi& m = mutable_msi(id);
    if (static_cast<int>(target) != static_cast<int>(m.state) + 1)
        throw Error(Errc::InvalidTransition,
                    std::string(to_string(m.state)) + " -> " + std::string(to_string(target)));
    if (target == MsiState::Decommissioned) {
        while (!m.attachments.empty()) detach(m, m.attachments.size() - 1);
        if (m.extra) {
            pool_.release(*m.extra);
            m.extra.reset();
        }
        m.members.clear();
    }
    m.state = target;
}

bool Orchestrator::attach_shared_model(MsiId a, MsiId b, std::string_view model)
{
    if (a == b) throw Error(Errc::InvalidParams, "an MSI cannot share with itself");
    Msi& from = mutable_msi(a);
    Msi& to = mutable_msi(b);
    if (!from.live() || !to.live()) throw Error(Errc::InvalidTransition, "sharing requires two live MSIs");
    const ModelAttachment* source = from.attachment(model);
    if (!source) throw Error(Errc::ModelNotAttached, std::string(model) + " not attached to MSI " + std::to_string(a));
    const ReservationId shared = source->reservation;

    if (const ModelAttachment* existing = to.attachment(model); existing && existing->reservation == shared)
        return true;
    if (!may_share(catalog_.get(model), from.isolation, to.isolation)) return false;

    for (std::size_t i = 0; i < to.attachments.size(); ++i)
        if (to.attachments[i].model_id == model) {
            detach(to, i);
            break;
        }
    to.attachments.push_back({std::string(model), shared});
    return true;
}

void Orchestrator::add_member(MsiId id, const std::string& user)
{
    Msi& m = mutable_msi(id);
    if (!m.live()) throw Error(Errc::InvalidTransition, "cannot add a member to a decommissioned MSI");
    m.members.push_back(user);
}

void Orchestrator::remove_member(MsiId id, const std::string& user)
{
    Msi& m = mutable_msi(id);
    auto it = std::find(m.members.begin(), m.members.end(), user);
    if (it != m.members.end()) m.members.erase(it);
}

void Orchestrator::set_extra(MsiId id, const ResourceVector& amount)
{
    Msi& m = mutable_msi(id);
    if (!m.live()) throw Error(Errc::InvalidTransition, "decommissioned MSIs hold no reservations");
    if (m.extra) {
        if (amount.is_zero()) {
            pool_.release(*m.extra);
            m.extra.reset();
        } else {
            pool_.resize(*m.extra, amount);
        }
    } else if (!amount.is_zero()) {
        m.extra = pool_.reserve(id, amount, m.isolation).id;
    }
}

std::string Orchestrator::check_consistency() const
{
    std::map<ReservationId, std::vector<const Msi*>> referenced;
    for (const auto& [id, m] : msis_) {
        if (!m.live()) {
            if (!pool_.open_reservations_of(id).empty())
                return "decommissioned MSI " + std::to_string(id) + " holds open reservations";
            continue;
        }
        for (std::size_t i = 0; i < m.attachments.size(); ++i) {
            const auto& a = m.attachments[i];
            for (std::size_t j = 0; j < i; ++j)
                if (m.attachments[j].model_id == a.model_id)
                    return "MSI " + std::to_string(id) + " attaches " + a.model_id + " twice";
            const Reservation& r = pool_.reservation(a.reservation);
            if (!r.open) return "MSI " + std::to_string(id) + " references closed reservation";
            const auto expected = catalog_.effective_footprint(a.model_id).as_array();
            const auto held = r.amount.as_array();
            for (std::size_t d = 0; d < held.size(); ++d)
                if (std::abs(held[d] - expected[d]) > Pool::kResolution)
                    return "reservation " + std::to_string(r.id) + " differs from footprint of " + a.model_id;
            referenced[a.reservation].push_back(&m);
        }
        if (m.extra) {
            if (!pool_.reservation(*m.extra).open) return "extra reservation closed";
            referenced[*m.extra].push_back(&m);
        }
    }
    for (const auto& [rid, users] : referenced) {
        const MsiId owner = pool_.reservation(rid).owner;
        if (std::none_of(users.begin(), users.end(), [&](const Msi* m) { return m->id == owner; }))
            return "reservation " + std::to_string(rid) + " owned outside its sharing group";
        for (std::size_t i = 0; i < users.size(); ++i)
            for (std::size_t j = i + 1; j < users.size(); ++j) {
                const ModelAttachment* a = nullptr;
                for (const auto& att : users[i]->attachments)
                    if (att.reservation == rid) a = &att;
                if (a && !may_share(catalog_.get(a->model_id), users[i]->isolation, users[j]->isolation))
                    return "reservation " + std::to_string(rid) + " shared across incompatible isolation";
            }
    }
    if (referenced.size() != pool_.open_count()) return "pool holds reservations no MSI references";
    return {};
}

}  // namespace slicing4meta
