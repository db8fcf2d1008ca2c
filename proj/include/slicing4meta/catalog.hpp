#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slicing4meta/resource_vector.hpp"

namespace slicing4meta {

/// CaaS models supply resources to the pool, TaaS models consume them.
enum class ModelKind { CaaS, TaaS };

std::string_view to_string(ModelKind k) noexcept;
ModelKind model_kind_from_string(std::string_view s);

struct MaaSModel {
    std::string id;
    ModelKind kind = ModelKind::CaaS;
    std::string label;
    ResourceVector supply;       // CaaS only
    ResourceVector consumption;  // TaaS only
    std::vector<std::string> children;  // nonempty => composite
    IsolationDegree max_isolation_degree_for_sharing = IsolationDegree::Logical;

    bool is_composite() const { return !children.empty(); }
};

/// Registry of MaaS delivery models. Children must be registered before the
/// composite that references them, so the child graph stays acyclic.
class Catalog {
public:
    const std::string& register_model(MaaSModel model);

    bool contains(std::string_view id) const;
    const MaaSModel& get(std::string_view id) const;

    /// Leaf: own supply (CaaS) or consumption (TaaS). Composite: sum over children.
    ResourceVector effective_footprint(std::string_view id) const;

    /// Registration order.
    const std::vector<MaaSModel>& models() const { return models_; }
    std::size_t size() const { return models_.size(); }

private:
    std::vector<MaaSModel> models_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace slicing4meta
