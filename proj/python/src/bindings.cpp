#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "slicing4meta/catalog.hpp"
#include "slicing4meta/controllers.hpp"
#include "slicing4meta/error.hpp"
#include "slicing4meta/experiment.hpp"
#include "slicing4meta/qoe.hpp"
#include "slicing4meta/resources.hpp"
#include "slicing4meta/simkernel.hpp"

namespace py = pybind11;
using namespace slicing4meta;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

MetricsReport run_text(const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> policy)
{
    Scenario s = parse_scenario_text(text);
    if (seed) s.seed = *seed;
    if (policy) s.controllers.policy = allocation_policy_from_string(*policy);
    py::gil_scoped_release release;
    return run(s);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Metaverse service slicing simulator";
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    py::class_<ResourceVector>(m, "ResourceVector")
        .def(py::init<double, double, double, double>(), py::arg("comm_rate") = 0.0, py::arg("compute") = 0.0,
             py::arg("storage") = 0.0, py::arg("rendering") = 0.0)
        .def_readwrite("comm_rate", &ResourceVector::comm_rate)
        .def_readwrite("compute", &ResourceVector::compute)
        .def_readwrite("storage", &ResourceVector::storage)
        .def_readwrite("rendering", &ResourceVector::rendering)
        .def("fits_within", &ResourceVector::fits_within)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self == py::self)
        .def("__repr__", [](const ResourceVector& v) { return "ResourceVector" + v.to_string(); });

    py::enum_<IsolationDegree>(m, "IsolationDegree")
        .value("None_", IsolationDegree::None)
        .value("Scheduling", IsolationDegree::Scheduling)
        .value("Logical", IsolationDegree::Logical)
        .value("Physical", IsolationDegree::Physical);

    py::enum_<ModelKind>(m, "ModelKind").value("CaaS", ModelKind::CaaS).value("TaaS", ModelKind::TaaS);

    py::class_<MaaSModel>(m, "MaaSModel")
        .def(py::init([](std::string id, ModelKind kind, std::string label, ResourceVector supply,
                         ResourceVector consumption, std::vector<std::string> children, IsolationDegree threshold) {
                 MaaSModel model{std::move(id), kind, std::move(label), supply, consumption, std::move(children)};
                 model.max_isolation_degree_for_sharing = threshold;
                 return model;
             }),
             py::arg("id"), py::arg("kind"), py::arg("label") = "", py::arg("supply") = ResourceVector{},
             py::arg("consumption") = ResourceVector{}, py::arg("children") = std::vector<std::string>{},
             py::arg("max_isolation_degree_for_sharing") = IsolationDegree::Logical)
        .def_readonly("id", &MaaSModel::id)
        .def_readonly("kind", &MaaSModel::kind)
        .def_readonly("label", &MaaSModel::label)
        .def_readonly("supply", &MaaSModel::supply)
        .def_readonly("consumption", &MaaSModel::consumption)
        .def_readonly("children", &MaaSModel::children)
        .def_readonly("max_isolation_degree_for_sharing", &MaaSModel::max_isolation_degree_for_sharing);

    py::class_<Catalog>(m, "Catalog")
        .def(py::init<>())
        .def("register_model", &Catalog::register_model)
        .def("contains", &Catalog::contains)
        .def("get", &Catalog::get, py::return_value_policy::copy)
        .def("effective_footprint", &Catalog::effective_footprint)
        .def("__len__", &Catalog::size);

    py::class_<Pool>(m, "Pool")
        .def(py::init<const ResourceVector&>())
        .def("capacity", &Pool::capacity)
        .def("remaining", &Pool::remaining)
        .def("can_reserve", &Pool::can_reserve)
        .def(
            "reserve",
            [](Pool& p, MsiId owner, const ResourceVector& amount, IsolationDegree iso) {
                return p.reserve(owner, amount, iso).id;
            },
            py::arg("owner"), py::arg("amount"), py::arg("isolation") = IsolationDegree::None)
        .def("release", &Pool::release)
        .def("resize", &Pool::resize)
        .def("open_count", &Pool::open_count)
        .def("conservation_holds", &Pool::conservation_holds)
        .def("snapshot", [](const Pool& p) { return to_python(p.snapshot()); });

    m.def("build_pool", &build_pool);
    m.def("may_share", &may_share, py::arg("model"), py::arg("a"), py::arg("b"));

    py::class_<QoEParams>(m, "QoEParams")
        .def(py::init([](double k, double c0, double r_ref, double per_object_capacity, double readjust_fraction) {
                 QoEParams p{k, c0, r_ref, per_object_capacity, readjust_fraction};
                 p.validate();
                 return p;
             }),
             py::arg("k") = 1.0, py::arg("c0") = 1.0, py::arg("r_ref") = 100.0, py::arg("per_object_capacity") = 20.0,
             py::arg("readjust_fraction") = 0.1)
        .def_readonly("k", &QoEParams::k)
        .def_readonly("c0", &QoEParams::c0)
        .def_readonly("r_ref", &QoEParams::r_ref)
        .def_readonly("per_object_capacity", &QoEParams::per_object_capacity)
        .def_readonly("readjust_fraction", &QoEParams::readjust_fraction);

    py::class_<UserSession>(m, "UserSession")
        .def(py::init(&UserSession::make), py::arg("id"), py::arg("rate"), py::arg("bep"), py::arg("n_objects"),
             py::arg("params") = QoEParams{})
        .def_readonly("id", &UserSession::id)
        .def_readonly("rate", &UserSession::rate)
        .def_readonly("bep", &UserSession::bep)
        .def_readonly("n_objects", &UserSession::n_objects)
        .def_readonly("demand", &UserSession::demand);

    py::class_<MIResult>(m, "MIResult")
        .def_readonly("user_id", &MIResult::user_id)
        .def_readonly("perception", &MIResult::perception)
        .def_readonly("objective_quality", &MIResult::objective_quality)
        .def_readonly("mi", &MIResult::mi);

    const QoEParams defaults;
    m.def("rendering_perception", &rendering_perception, py::arg("allocated"), py::arg("demand"),
          py::arg("params") = defaults);
    m.def("objective_quality", &objective_quality, py::arg("rate"), py::arg("bep"), py::arg("params") = defaults);
    m.def("meta_immersion", &meta_immersion, py::arg("user"), py::arg("allocated"), py::arg("params") = defaults);
    m.def(
        "even_allocation",
        [](double total, const std::vector<UserSession>& users) { return even_allocation(total, users); },
        py::arg("total"), py::arg("users"));
    m.def(
        "mi_max_allocation",
        [](double total, const std::vector<UserSession>& users, const QoEParams& p) {
            return mi_max_allocation(total, users, p);
        },
        py::arg("total"), py::arg("users"), py::arg("params") = defaults);
    m.def(
        "allocation_objective",
        [](const std::vector<UserSession>& users, const std::vector<double>& alloc, const QoEParams& p) {
            return allocation_objective(users, alloc, p);
        },
        py::arg("users"), py::arg("allocation"), py::arg("params") = defaults);
    m.def(
        "mean_mi",
        [](const std::vector<UserSession>& users, const std::vector<double>& alloc, const QoEParams& p) {
            return mean_mi(users, alloc, p);
        },
        py::arg("users"), py::arg("allocation"), py::arg("params") = defaults);
    m.def("needs_readjustment", &needs_readjustment, py::arg("old_stimulus"), py::arg("new_stimulus"),
          py::arg("params") = defaults);

    m.def(
        "exponential_moving_average",
        [](const std::vector<double>& history, double alpha) { return exponential_moving_average(history, alpha); },
        py::arg("history"), py::arg("alpha"));
    m.def("design_cluster_capacity", &design_cluster_capacity, py::arg("prediction"), py::arg("per_request_demand"),
          py::arg("headroom"));

    m.def(
        "validate_scenario", [](const std::string& text) { parse_scenario_text(text); }, py::arg("text"));
    m.def(
        "run_scenario",
        [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> policy) {
            const MetricsReport r = run_text(text, seed, policy);
            py::dict out;
            out["summary"] = to_python(r.summary());
            out["users_csv"] = r.users_csv();
            out["ledger_csv"] = r.ledger_csv();
            out["trace_jsonl"] = r.trace.to_jsonl();
            out["final_pool"] = to_python(r.final_pool);
            return out;
        },
        py::arg("text"), py::arg("seed") = py::none(), py::arg("policy") = py::none());

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("n_users", &SweepRow::n_users)
        .def_readonly("rate", &SweepRow::rate)
        .def_readonly("mean_mi", &SweepRow::mean_mi)
        .def_readonly("min_mi", &SweepRow::min_mi)
        .def_readonly("max_mi", &SweepRow::max_mi);

    m.def(
        "run_sweep",
        [](std::vector<int> n_users, std::vector<double> rates, double total_rendering, std::uint64_t seed,
           const std::string& policy, double bep) {
            SweepConfig c;
            c.n_users = std::move(n_users);
            c.rates = std::move(rates);
            c.total_rendering = total_rendering;
            c.seed = seed;
            c.policy = allocation_policy_from_string(policy);
            c.bep = bep;
            return run_sweep(c);
        },
        py::arg("n_users") = SweepConfig{}.n_users, py::arg("rates") = SweepConfig{}.rates,
        py::arg("total_rendering") = 4000.0, py::arg("seed") = 1, py::arg("policy") = "even", py::arg("bep") = 0.001);
    m.def("sweep_csv", &sweep_csv, py::arg("rows"));

    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
}
