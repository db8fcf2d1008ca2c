#include "slicing4meta/simkernel.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "slicing4meta/controllers.hpp"
#include "slicing4meta/error.hpp"

namespace slicing4meta {

std::string_view to_string(EventKind k) noexcept
{
    switch (k) {
    case EventKind::Arrival: return "Arrival";
    case EventKind::Departure: return "Departure";
    case EventKind::EpochTick: return "EpochTick";
    case EventKind::MonitorTick: return "MonitorTick";
    }
    return "Arrival";
}

Event EventQueue::push(double time, EventKind kind, std::size_t payload)
{
    if (!(time >= 0.0)) throw Error(Errc::DomainError, "event time must be >= 0");
    Event e{time, next_sequence_++, kind, payload};
    heap_.push(e);
    return e;
}

Event EventQueue::pop()
{
    Event e = heap_.top();
    heap_.pop();
    assert(!last_ || last_->time < e.time || (last_->time == e.time && last_->sequence < e.sequence));
    last_ = e;
    return e;
}

UserSession sample_user(Rng& rng, std::string id, double rate, double bep, int objects_min, int objects_max,
                        const QoEParams& params)
{
    const int n = static_cast<int>(rng.uniform_int(objects_min, objects_max));
    return UserSession::make(std::move(id), rate, bep, n, params);
}

namespace {

struct Request {
    ArrivalRequest arrival;
    std::string id;
};

class Simulation {
public:
    explicit Simulation(const Scenario& s)
        : scenario_(s),
          catalog_(s.build_catalog()),
          pool_(build_pool(catalog_)),
          orchestrator_(catalog_, pool_, s.orchestrator, &report_.trace),
          global_(s.controllers.alpha, s.controllers.headroom),
          rng_(s.seed)
    {
        s.qoe.validate();
        for (const auto kind : {ServiceKind::ARVR, ServiceKind::DT}) {
            locals_.emplace(std::piecewise_construct, std::forward_as_tuple(kind),
                            std::forward_as_tuple(kind, s.controllers.policy, s.controllers.scaling, s.qoe, global_));
            auto it = s.orchestrator.bundles.find(kind);
            if (it == s.orchestrator.bundles.end()) continue;
            ResourceVector demand;
            for (const auto& id : it->second) demand += catalog_.effective_footprint(id);
            per_request_demand_[kind] = demand;
        }
        build_requests();
    }

    MetricsReport run()
    {
        schedule();
        while (!queue_.empty()) {
            const Event e = queue_.pop();
            if (scenario_.duration_ms && e.time > *scenario_.duration_ms) break;
            dispatch(e);
            ++report_.events_processed;
            if (!pool_.conservation_holds())
                throw std::logic_error(fmt::format("pool conservation violated after event {}", e.sequence));
            if (const std::string problem = orchestrator_.check_consistency(); !problem.empty())
                throw std::logic_error("orchestrator inconsistent: " + problem);
            record_ledger(e.time);
        }
        report_.msis_created = orchestrator_.created();
        report_.msis_reused = orchestrator_.reused();
        report_.msis_modified = orchestrator_.modified();
        report_.control_reports = global_.log().size();
        report_.final_pool = pool_.snapshot();
        return std::move(report_);
    }

private:
    void build_requests()
    {
        for (const auto& r : scenario_.requests) requests_.push_back({r, "r" + std::to_string(requests_.size())});
        if (const auto& p = scenario_.arrival_process) {
            double t = 0.0;
            for (int i = 0; i < p->count; ++i) {
                ArrivalRequest r;
                t += rng_.exponential(p->mean_interarrival_ms);
                r.time_ms = t;
                r.service = rng_.uniform01() < p->arvr_fraction ? ServiceKind::ARVR : ServiceKind::DT;
                r.rate = p->rate;
                r.bep = p->bep;
                if (p->mean_holding_ms > 0.0) r.holding_ms = rng_.exponential(p->mean_holding_ms);
                r.user = "u" + std::to_string(requests_.size());
                requests_.push_back({r, "r" + std::to_string(requests_.size())});
            }
        }
    }

    void schedule()
    {
        double horizon = 0.0;
        for (std::size_t i = 0; i < requests_.size(); ++i) {
            const auto& r = requests_[i].arrival;
            queue_.push(r.time_ms, EventKind::Arrival, i);
            horizon = std::max(horizon, r.time_ms + r.holding_ms.value_or(0.0));
        }
        if (scenario_.duration_ms) horizon = *scenario_.duration_ms;
        const auto& c = scenario_.controllers;
        for (double t = c.monitor_ms; t <= horizon; t += c.monitor_ms) queue_.push(t, EventKind::MonitorTick);
        for (double t = c.epoch_ms; t <= horizon; t += c.epoch_ms) queue_.push(t, EventKind::EpochTick);
    }

    void dispatch(const Event& e)
    {
        switch (e.kind) {
        case EventKind::Arrival: on_arrival(e); break;
        case EventKind::Departure: on_departure(e); break;
        case EventKind::EpochTick: on_epoch(e); break;
        case EventKind::MonitorTick: on_monitor(e); break;
        }
    }

    void on_arrival(const Event& e)
    {
        const Request& req = requests_[e.payload];
        const ArrivalRequest& a = req.arrival;
        global_.record_arrival(a.service);

        UserSession session =
            a.n_objects ? UserSession::make(a.user, a.rate, a.bep, *a.n_objects, scenario_.qoe)
                        : sample_user(rng_, a.user, a.rate, a.bep, scenario_.objects_min, scenario_.objects_max,
                                      scenario_.qoe);

        UserRecord record;
        record.user = a.user;
        record.request = req.id;
        record.service = a.service;
        record.n_objects = session.n_objects;
        record.demand = session.demand;
        record.rate = a.rate;
        record.bep = a.bep;
        record.arrival_ms = e.time;
        record.mi.user_id = a.user;

        ServiceRequest sr{req.id, a.user, a.service, a.overrides};
        try {
            const auto admission = orchestrator_.admit(sr, e.time);
            record.admitted = true;
            record.msi = admission.msi;
            if (admission.decision.kind == DecisionKind::Create)
                report_.trace.emit(e.time, "lifecycle", {{"msi", admission.msi}, {"state", "RunTime"}});
        } catch (const Error& err) {
            if (err.code() != Errc::InsufficientResources) throw;
            ++report_.rejected;
        }

        const std::size_t index = report_.users.size();
        report_.users.push_back(record);
        if (!record.admitted) return;

        record_of_request_[e.payload] = index;
        sessions_[record.msi].push_back({std::move(session), index});
        reallocate(record.msi, e.time);
        if (a.holding_ms) queue_.push(e.time + *a.holding_ms, EventKind::Departure, e.payload);
    }

    void on_departure(const Event& e)
    {
        const std::size_t index = record_of_request_.at(e.payload);
        UserRecord& record = report_.users[index];
        record.departure_ms = e.time;
        const MsiId msi = record.msi;
        auto& members = sessions_[msi];
        std::erase_if(members, [&](const Member& m) { return m.record == index; });
        orchestrator_.remove_member(msi, record.user);
        report_.trace.emit(e.time, "departure", {{"user", record.user}, {"msi", msi}});

        if (members.empty()) {
            orchestrator_.advance_lifecycle(msi, MsiState::Decommissioned);
            sessions_.erase(msi);
            report_.trace.emit(e.time, "lifecycle", {{"msi", msi}, {"state", "Decommissioned"}});
        } else {
            reallocate(msi, e.time);
        }
    }

    void on_epoch(const Event& e)
    {
        const auto feedback = global_.on_epoch(per_request_demand_);
        nlohmann::json budgets = nlohmann::json::object();
        for (const auto& f : feedback) {
            locals_.at(f.cluster).apply_feedback(f);
            budgets[std::string(to_string(f.cluster))] = {{"rendering", f.budget.rendering},
                                                          {"comm_rate", f.budget.comm_rate},
                                                          {"acknowledged", f.acknowledged}};
        }
        report_.trace.emit(e.time, "epoch", {{"feedback", budgets}});
    }

    void on_monitor(const Event& e)
    {
        for (const auto& [id, m] : orchestrator_.msis()) {
            if (m.state != MsiState::RunTime) continue;
            const ResourceVector cap = orchestrator_.capacity_of(id);
            double rate = 0.0;
            double demand = 0.0;
            for (const auto& member : sessions_[id]) {
                rate += member.session.rate;
                demand += member.session.demand;
            }
            auto ratio = [](double used, double available) {
                return available > 0.0 ? std::min(1.0, used / available) : 0.0;
            };
            const Utilization u{ratio(rate, cap.comm_rate), 0.0, 0.0, ratio(demand, cap.rendering)};
            const ScalingOutcome out = locals_.at(m.cluster).monitor(e.time, orchestrator_, id, u);
            if (out.requested == ScalingAction::None) continue;
            nlohmann::json fields = {{"msi", id},
                                     {"requested", std::string(to_string(out.requested))},
                                     {"applied", std::string(to_string(out.applied))}};
            if (!out.warning.empty()) fields["warning"] = out.warning;
            report_.trace.emit(e.time, "scaling", fields);
            if (out.applied != ScalingAction::None) reallocate(id, e.time);
        }
    }

    void reallocate(MsiId msi, double time)
    {
        auto& members = sessions_[msi];
        std::vector<UserSession> users;
        users.reserve(members.size());
        for (const auto& m : members) users.push_back(m.session);
        const double budget = orchestrator_.capacity_of(msi).rendering;
        const auto alloc = locals_.at(orchestrator_.msi(msi).cluster).allocate(time, msi, users, budget);
        for (std::size_t i = 0; i < members.size(); ++i) {
            UserRecord& record = report_.users[members[i].record];
            const double previous = record.allocated;
            record.allocated = alloc[i];
            record.mi = meta_immersion(users[i], alloc[i], scenario_.qoe);
            if (previous > 0.0 && needs_readjustment(previous, alloc[i], scenario_.qoe))
                report_.trace.emit(time, "readjust",
                                   {{"user", record.user}, {"msi", msi}, {"from", previous}, {"to", alloc[i]}});
        }
    }

    void record_ledger(double time)
    {
        for (const auto& [id, m] : orchestrator_.msis()) {
            const ResourceVector cap = m.live() ? orchestrator_.capacity_of(id) : ResourceVector{};
            auto it = last_sample_.find(id);
            if (it != last_sample_.end() && it->second.state == m.state && it->second.capacity == cap) continue;
            LedgerSample sample{time, id, m.state, cap};
            last_sample_[id] = sample;
            report_.ledger_history.push_back(sample);
        }
    }

    struct Member {
        UserSession session;
        std::size_t record;
    };

    const Scenario& scenario_;
    MetricsReport report_;
    Catalog catalog_;
    Pool pool_;
    Orchestrator orchestrator_;
    GlobalController global_;
    std::map<ServiceKind, LocalController> locals_;
    std::map<ServiceKind, ResourceVector> per_request_demand_;
    Rng rng_;
    EventQueue queue_;
    std::vector<Request> requests_;
    std::map<std::size_t, std::size_t> record_of_request_;
    std::map<MsiId, std::vector<Member>> sessions_;
    std::map<MsiId, LedgerSample> last_sample_;
};

std::string fmt_double(double v)
{
    return fmt::format("{}", v);
}

}  // namespace

double MetricsReport::mean_mi() const
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& u : users) {
        if (!u.admitted) continue;
        sum += u.mi.mi;
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

std::string MetricsReport::users_csv() const
{
    std::string out =
        "user,request,service,admitted,msi,n_objects,demand_k,rate_mbps,bep,allocated_k,perception,"
        "objective_quality,mi,arrival_ms,departure_ms\n";
    for (const auto& u : users) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", u.user, u.request, to_string(u.service),
                           u.admitted ? 1 : 0, u.msi, u.n_objects, fmt_double(u.demand), fmt_double(u.rate),
                           fmt_double(u.bep), fmt_double(u.allocated), fmt_double(u.mi.perception),
                           fmt_double(u.mi.objective_quality), fmt_double(u.mi.mi), fmt_double(u.arrival_ms),
                           u.departure_ms ? fmt_double(*u.departure_ms) : std::string{});
    }
    return out;
}

std::string MetricsReport::ledger_csv() const
{
    std::string out = "time_ms,msi,state,comm_rate,compute,storage,rendering\n";
    for (const auto& s : ledger_history)
        out += fmt::format("{},{},{},{},{},{},{}\n", fmt_double(s.time), s.msi, to_string(s.state),
                           fmt_double(s.capacity.comm_rate), fmt_double(s.capacity.compute),
                           fmt_double(s.capacity.storage), fmt_double(s.capacity.rendering));
    return out;
}

nlohmann::json MetricsReport::summary() const
{
    return {{"users", users.size()},
            {"admitted", users.size() - rejected},
            {"rejected", rejected},
            {"msis_created", msis_created},
            {"msis_reused", msis_reused},
            {"msis_modified", msis_modified},
            {"mean_mi", mean_mi()},
            {"events", events_processed},
            {"control_reports", control_reports}};
}

MetricsReport run(const Scenario& scenario)
{
    return Simulation(scenario).run();
}

}  // namespace slicing4meta
