#include "slicing4meta/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "slicing4meta/error.hpp"

namespace slicing4meta {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
    throw Error(Errc::ScenarioInvalid, (path.empty() ? std::string("<root>") : path) + ": " + message);
}

std::string join(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

// Typed access to one JSON object, reporting errors against its path.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    void allow(std::initializer_list<std::string_view> keys) const
    {
        const std::set<std::string_view> allowed(keys);
        for (const auto& [key, value] : j_.items())
            if (!allowed.count(key)) fail(join(path_, key), "unknown field");
    }

    bool has(std::string_view key) const { return j_.contains(std::string(key)); }

    const json& at(std::string_view key) const
    {
        if (!has(key)) fail(join(path_, key), "missing required field");
        return j_.at(std::string(key));
    }

    std::string path(std::string_view key) const { return join(path_, key); }

    double number(std::string_view key, std::optional<double> fallback = std::nullopt) const
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(path(key), "missing required field");
        }
        const json& v = at(key);
        if (!v.is_number()) fail(path(key), "expected a number");
        return v.get<double>();
    }

    double nonnegative(std::string_view key, std::optional<double> fallback = std::nullopt) const
    {
        const double v = number(key, fallback);
        if (!(v >= 0.0)) fail(path(key), "must be >= 0");
        return v;
    }

    double positive(std::string_view key, std::optional<double> fallback = std::nullopt) const
    {
        const double v = number(key, fallback);
        if (!(v > 0.0)) fail(path(key), "must be > 0");
        return v;
    }

    std::optional<double> optional_nonnegative(std::string_view key) const
    {
        if (!has(key)) return std::nullopt;
        return nonnegative(key);
    }

    int integer(std::string_view key, int fallback) const
    {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_number_integer()) fail(path(key), "expected an integer");
        return v.get<int>();
    }

    std::string string(std::string_view key, std::optional<std::string> fallback = std::nullopt) const
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(path(key), "missing required field");
        }
        const json& v = at(key);
        if (!v.is_string()) fail(path(key), "expected a string");
        return v.get<std::string>();
    }

    const json& array(std::string_view key) const
    {
        const json& v = at(key);
        if (!v.is_array()) fail(path(key), "expected an array");
        return v;
    }

    Node object(std::string_view key) const { return Node(at(key), path(key)); }

private:
    const json& j_;
    std::string path_;
};

template <typename F>
auto converted(const std::string& path, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

ResourceVector parse_vector(const Node& n)
{
    n.allow({"comm_rate", "compute", "storage", "rendering"});
    return {n.nonnegative("comm_rate", 0.0), n.nonnegative("compute", 0.0), n.nonnegative("storage", 0.0),
            n.nonnegative("rendering", 0.0)};
}

IsolationDegree parse_isolation(const Node& n, std::string_view key, IsolationDegree fallback)
{
    if (!n.has(key)) return fallback;
    const std::string s = n.string(key);
    return converted(n.path(key), [&] { return isolation_from_string(s); });
}

MaaSModel parse_model(const Node& n)
{
    n.allow({"id", "kind", "label", "supply", "consumption", "children", "max_isolation_degree_for_sharing"});
    MaaSModel m;
    m.id = n.string("id");
    const std::string kind = n.string("kind");
    m.kind = converted(n.path("kind"), [&] { return model_kind_from_string(kind); });
    m.label = n.string("label", std::string{});
    if (n.has("supply")) m.supply = parse_vector(n.object("supply"));
    if (n.has("consumption")) m.consumption = parse_vector(n.object("consumption"));
    if (n.has("children")) {
        const json& children = n.array("children");
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (!children[i].is_string()) fail(index(n.path("children"), i), "expected a model id");
            m.children.push_back(children[i].get<std::string>());
        }
    }
    m.max_isolation_degree_for_sharing =
        parse_isolation(n, "max_isolation_degree_for_sharing", IsolationDegree::Logical);
    return m;
}

RequirementOverrides parse_overrides(const Node& n)
{
    n.allow({"peak_rate", "reliability", "max_latency", "rendering_per_object", "isolation"});
    RequirementOverrides o;
    o.peak_rate = n.optional_nonnegative("peak_rate");
    o.reliability = n.optional_nonnegative("reliability");
    if (o.reliability && *o.reliability > 1.0) fail(n.path("reliability"), "must be in [0,1]");
    o.max_latency = n.optional_nonnegative("max_latency");
    o.rendering_per_object = n.optional_nonnegative("rendering_per_object");
    if (n.has("isolation")) o.isolation = parse_isolation(n, "isolation", IsolationDegree::None);
    return o;
}

ServiceRequirements apply(ServiceRequirements base, const RequirementOverrides& o)
{
    if (o.peak_rate) base.peak_rate = *o.peak_rate;
    if (o.reliability) base.reliability = *o.reliability;
    if (o.max_latency) base.max_latency = *o.max_latency;
    if (o.rendering_per_object) base.rendering_per_object = *o.rendering_per_object;
    if (o.isolation) base.isolation = *o.isolation;
    return base;
}

double probability(const Node& n, std::string_view key, double fallback)
{
    const double v = n.number(key, fallback);
    if (!(v >= 0.0 && v <= 1.0)) fail(n.path(key), "must be in [0,1]");
    return v;
}

QoEParams parse_qoe(const Node& n)
{
    n.allow({"k", "c0", "r_ref", "per_object_capacity", "readjust_fraction"});
    QoEParams p;
    p.k = n.positive("k", p.k);
    p.c0 = n.positive("c0", p.c0);
    p.r_ref = n.positive("r_ref", p.r_ref);
    p.per_object_capacity = n.positive("per_object_capacity", p.per_object_capacity);
    p.readjust_fraction = n.positive("readjust_fraction", p.readjust_fraction);
    if (p.readjust_fraction >= 1.0) fail(n.path("readjust_fraction"), "must be in (0,1)");
    return p;
}

ControllerConfig parse_controllers(const Node& n)
{
    n.allow({"policy", "alpha", "headroom", "u_lo", "u_hi", "scaling_step", "epoch_ms", "monitor_ms"});
    ControllerConfig c;
    if (n.has("policy")) {
        const std::string s = n.string("policy");
        c.policy = converted(n.path("policy"), [&] { return allocation_policy_from_string(s); });
    }
    c.alpha = n.positive("alpha", c.alpha);
    if (c.alpha > 1.0) fail(n.path("alpha"), "must be in (0,1]");
    c.headroom = n.number("headroom", c.headroom);
    if (!(c.headroom >= 1.0)) fail(n.path("headroom"), "must be >= 1");
    c.scaling.u_lo = n.nonnegative("u_lo", c.scaling.u_lo);
    c.scaling.u_hi = n.positive("u_hi", c.scaling.u_hi);
    if (c.scaling.u_hi > 1.0) fail(n.path("u_hi"), "must be in (0,1]");
    if (!(c.scaling.u_lo < c.scaling.u_hi)) fail(n.path("u_lo"), "must be < u_hi");
    if (n.has("scaling_step")) c.scaling.step = parse_vector(n.object("scaling_step"));
    c.epoch_ms = n.positive("epoch_ms", c.epoch_ms);
    c.monitor_ms = n.positive("monitor_ms", c.monitor_ms);
    return c;
}

ArrivalRequest parse_request(const Node& n, std::size_t i)
{
    n.allow({"time_ms", "user", "service", "rate_mbps", "bep", "holding_ms", "n_objects", "overrides"});
    ArrivalRequest r;
    r.time_ms = n.nonnegative("time_ms", 0.0);
    r.user = n.string("user", "u" + std::to_string(i));
    const std::string service = n.string("service");
    r.service = converted(n.path("service"), [&] { return service_kind_from_string(service); });
    r.rate = n.nonnegative("rate_mbps", r.rate);
    r.bep = probability(n, "bep", r.bep);
    r.holding_ms = n.optional_nonnegative("holding_ms");
    if (n.has("n_objects")) {
        r.n_objects = n.integer("n_objects", 1);
        if (*r.n_objects < 1) fail(n.path("n_objects"), "must be >= 1");
    }
    if (n.has("overrides")) r.overrides = parse_overrides(n.object("overrides"));
    return r;
}

ArrivalProcess parse_process(const Node& n)
{
    n.allow({"count", "mean_interarrival_ms", "mean_holding_ms", "arvr_fraction", "rate_mbps", "bep"});
    ArrivalProcess p;
    p.count = n.integer("count", 0);
    if (p.count < 0) fail(n.path("count"), "must be >= 0");
    p.mean_interarrival_ms = n.positive("mean_interarrival_ms", p.mean_interarrival_ms);
    p.mean_holding_ms = n.nonnegative("mean_holding_ms", p.mean_holding_ms);
    p.arvr_fraction = probability(n, "arvr_fraction", p.arvr_fraction);
    p.rate = n.nonnegative("rate_mbps", p.rate);
    p.bep = probability(n, "bep", p.bep);
    return p;
}

}  // namespace

Catalog Scenario::build_catalog() const
{
    Catalog catalog;
    for (const auto& m : this->catalog) catalog.register_model(m);
    return catalog;
}

Scenario parse_scenario(const json& doc)
{
    const Node root(doc, "");
    root.allow({"seed", "duration_ms", "catalog", "qoe", "controllers", "clusters", "similarity_tolerance", "objects",
                "requests", "arrival_process"});
    Scenario s;

    const json& seed = root.at("seed");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<long long>() < 0))
        fail("seed", "expected an unsigned 64-bit integer");
    s.seed = seed.get<std::uint64_t>();

    if (root.has("duration_ms")) s.duration_ms = root.nonnegative("duration_ms");

    const json& catalog = root.array("catalog");
    Catalog built;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const std::string path = index("catalog", i);
        MaaSModel m = parse_model(Node(catalog[i], path));
        converted(path, [&] { return built.register_model(m); });
        s.catalog.push_back(std::move(m));
    }

    if (root.has("qoe")) s.qoe = parse_qoe(root.object("qoe"));
    if (root.has("controllers")) s.controllers = parse_controllers(root.object("controllers"));
    s.orchestrator.tau = root.nonnegative("similarity_tolerance", s.orchestrator.tau);

    const Node clusters = root.object("clusters");
    clusters.allow({"ARVR", "DT"});
    for (const auto kind : {ServiceKind::ARVR, ServiceKind::DT}) {
        const std::string_view name = to_string(kind);
        if (!clusters.has(name)) continue;
        const Node cluster = clusters.object(name);
        cluster.allow({"bundle", "template"});
        const json& bundle = cluster.array("bundle");
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < bundle.size(); ++i) {
            const std::string path = index(cluster.path("bundle"), i);
            if (!bundle[i].is_string()) fail(path, "expected a model id");
            const std::string id = bundle[i].get<std::string>();
            if (!built.contains(id)) fail(path, "unknown model '" + id + "'");
            if (built.get(id).kind != ModelKind::TaaS) fail(path, "bundle entries must be TaaS models");
            ids.push_back(id);
        }
        if (ids.empty()) fail(cluster.path("bundle"), "must list at least one model");
        s.orchestrator.bundles[kind] = std::move(ids);
        if (cluster.has("template"))
            s.orchestrator.templates[kind] =
                apply(s.orchestrator.templates[kind], parse_overrides(cluster.object("template")));
    }

    if (root.has("objects")) {
        const Node objects = root.object("objects");
        objects.allow({"min", "max"});
        s.objects_min = objects.integer("min", s.objects_min);
        s.objects_max = objects.integer("max", s.objects_max);
        if (s.objects_min < 1) fail(objects.path("min"), "must be >= 1");
        if (s.objects_max < s.objects_min) fail(objects.path("max"), "must be >= min");
    }

    if (root.has("requests")) {
        const json& requests = root.array("requests");
        for (std::size_t i = 0; i < requests.size(); ++i) {
            const std::string path = index("requests", i);
            ArrivalRequest r = parse_request(Node(requests[i], path), i);
            if (!s.orchestrator.bundles.count(r.service))
                fail(path + ".service", "no cluster configured for " + std::string(to_string(r.service)));
            s.requests.push_back(std::move(r));
        }
    }
    if (root.has("arrival_process")) {
        s.arrival_process = parse_process(root.object("arrival_process"));
        const auto& p = *s.arrival_process;
        if (p.arvr_fraction > 0.0 && !s.orchestrator.bundles.count(ServiceKind::ARVR))
            fail("arrival_process.arvr_fraction", "ARVR arrivals need an ARVR cluster");
        if (p.arvr_fraction < 1.0 && !s.orchestrator.bundles.count(ServiceKind::DT))
            fail("arrival_process.arvr_fraction", "DT arrivals need a DT cluster");
    }
    return s;
}

Scenario parse_scenario_text(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ScenarioInvalid, std::string("parse error: ") + e.what());
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

}  // namespace slicing4meta
