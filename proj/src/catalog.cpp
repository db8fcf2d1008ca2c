#include "slicing4meta/catalog.hpp"

#include "slicing4meta/error.hpp"

namespace slicing4meta {

std::string_view to_string(ModelKind k) noexcept
{
    return k == ModelKind::CaaS ? "CaaS" : "TaaS";
}

ModelKind model_kind_from_string(std::string_view s)
{
    if (s == "CaaS") return ModelKind::CaaS;
    if (s == "TaaS") return ModelKind::TaaS;
    throw Error(Errc::InvalidModel, "unknown model kind '" + std::string(s) + "'");
}

const std::string& Catalog::register_model(MaaSModel model)
{
    if (model.id.empty()) throw Error(Errc::InvalidModel, "model id must be nonempty");
    if (contains(model.id)) throw Error(Errc::DuplicateId, model.id);
    if (!model.supply.is_nonnegative() || !model.consumption.is_nonnegative())
        throw Error(Errc::InvalidModel, model.id + ": resource quantities must be >= 0");
    if (model.kind == ModelKind::CaaS && !model.consumption.is_zero())
        throw Error(Errc::KindMismatch, model.id + ": CaaS model declares consumption");
    if (model.kind == ModelKind::TaaS && !model.supply.is_zero())
        throw Error(Errc::KindMismatch, model.id + ": TaaS model declares supply");

    if (model.is_composite()) {
        if (!model.supply.is_zero() || !model.consumption.is_zero())
            throw Error(Errc::InvalidModel, model.id + ": composite footprint comes from its children");
        for (const auto& child : model.children) {
            // The only way to close a cycle when children must pre-exist.
            if (child == model.id) throw Error(Errc::CycleDetected, model.id + " lists itself as a child");
            if (!contains(child)) throw Error(Errc::UnknownChild, model.id + " -> " + child);
            if (get(child).kind != model.kind)
                throw Error(Errc::KindMismatch, model.id + ": child " + child + " has a different kind");
        }
    }

    index_.emplace(model.id, models_.size());
    models_.push_back(std::move(model));
    return models_.back().id;
}

bool Catalog::contains(std::string_view id) const
{
    return index_.find(std::string(id)) != index_.end();
}

const MaaSModel& Catalog::get(std::string_view id) const
{
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw Error(Errc::UnknownModel, std::string(id));
    return models_[it->second];
}

ResourceVector Catalog::effective_footprint(std::string_view id) const
{
    const MaaSModel& m = get(id);
    if (!m.is_composite()) return m.kind == ModelKind::CaaS ? m.supply : m.consumption;
    ResourceVector total;
    for (const auto& child : m.children) total += effective_footprint(child);
    return total;
}

}  // namespace slicing4meta
