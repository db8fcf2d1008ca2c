#include "slicing4meta/qoe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slicing4meta/error.hpp"

namespace slicing4meta {

void QoEParams::validate() const
{
    if (!(k > 0.0)) throw Error(Errc::InvalidParams, "k must be > 0");
    if (!(c0 > 0.0)) throw Error(Errc::InvalidParams, "c0 must be > 0");
    if (!(r_ref > 0.0)) throw Error(Errc::InvalidParams, "r_ref must be > 0");
    if (!(per_object_capacity > 0.0)) throw Error(Errc::InvalidParams, "per_object_capacity must be > 0");
    if (!(readjust_fraction > 0.0 && readjust_fraction < 1.0))
        throw Error(Errc::InvalidParams, "readjust_fraction must be in (0,1)");
}

UserSession UserSession::make(std::string id, double rate, double bep, int n_objects, const QoEParams& params)
{
    if (n_objects < 1) throw Error(Errc::DomainError, "n_objects must be >= 1");
    return UserSession{std::move(id), rate, bep, n_objects, n_objects * params.per_object_capacity};
}

double rendering_perception(double allocated, double demand, const QoEParams& params)
{
    if (!(params.k > 0.0) || !(params.c0 > 0.0)) throw Error(Errc::InvalidParams, "k and c0 must be > 0");
    if (allocated < 0.0 || demand < 0.0) throw Error(Errc::DomainError, "capacities must be >= 0");
    const double effective = std::max(params.c0, std::min(allocated, demand));
    return params.k * std::log(effective / params.c0);
}

double objective_quality(double rate, double bep, const QoEParams& params)
{
    if (!(params.r_ref > 0.0)) throw Error(Errc::InvalidParams, "r_ref must be > 0");
    if (rate < 0.0) throw Error(Errc::DomainError, "rate must be >= 0");
    if (!(bep >= 0.0 && bep <= 1.0)) throw Error(Errc::DomainError, "bep must be in [0,1]");
    return -std::expm1(-rate / params.r_ref) * (1.0 - bep);
}

MIResult meta_immersion(const UserSession& user, double allocated, const QoEParams& params)
{
    MIResult r;
    r.user_id = user.id;
    r.perception = rendering_perception(allocated, user.demand, params);
    r.objective_quality = objective_quality(user.rate, user.bep, params);
    r.mi = r.perception * r.objective_quality;
    return r;
}

double allocation_objective(std::span<const UserSession> users, std::span<const double> allocation,
                            const QoEParams& params)
{
    if (users.size() != allocation.size()) throw Error(Errc::InvalidParams, "allocation size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i) sum += meta_immersion(users[i], allocation[i], params).mi;
    return sum;
}

double mean_mi(std::span<const UserSession> users, std::span<const double> allocation, const QoEParams& params)
{
    if (users.empty()) return 0.0;
    return allocation_objective(users, allocation, params) / static_cast<double>(users.size());
}

std::vector<double> even_allocation(double total, std::span<const UserSession> users)
{
    if (users.empty()) throw Error(Errc::EmptyUserSet, "even allocation needs at least one user");
    if (!(total >= 0.0)) throw Error(Errc::InvalidParams, "total must be >= 0");
    return std::vector<double>(users.size(), total / static_cast<double>(users.size()));
}

namespace {

constexpr int kMaxBisectionIterations = 200;
constexpr double kBisectionTolerance = 1e-6;

struct Candidate {
    std::size_t index;
    double weight;
    double demand;
};

double share(const Candidate& c, double lambda, double floor)
{
    return std::clamp(c.weight / lambda, floor, c.demand);
}

// Water-filling over one active set. Every member gets at least c0, so the
// caller guarantees sum(c0) <= total.
std::vector<double> water_fill(std::span<const Candidate> active, double total, double c0)
{
    std::vector<double> alloc(active.size());
    double demand_sum = 0.0;
    for (const auto& c : active) demand_sum += c.demand;
    if (demand_sum <= total) {
        for (std::size_t j = 0; j < active.size(); ++j) alloc[j] = active[j].demand;
        return alloc;
    }
    const double target = total;

    auto filled = [&](double lambda) {
        double s = 0.0;
        for (const auto& c : active) s += share(c, lambda, c0);
        return s;
    };

    // lo: everyone at demand (sum > target). hi: everyone at c0 (sum <= target).
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& c : active) {
        lo = std::min(lo, c.weight / c.demand);
        hi = std::max(hi, c.weight / c0);
    }
    lo *= 0.5;
    hi *= 2.0;

    bool converged = target - filled(hi) <= kBisectionTolerance * total;
    for (int it = 0; !converged && it < kMaxBisectionIterations; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (filled(mid) > target)
            lo = mid;
        else
            hi = mid;
        converged = target - filled(hi) <= kBisectionTolerance * total;
    }
    if (!converged) throw Error(Errc::NonConvergence, "multiplier bisection exceeded iteration limit");

    for (std::size_t j = 0; j < active.size(); ++j) alloc[j] = share(active[j], hi, c0);

    // Closed-form solve on the free set, repeated until the clamp pattern is stable.
    enum class Side { Floor, Free, Cap };
    auto classify = [&](double lambda) {
        std::vector<Side> sides(active.size());
        for (std::size_t j = 0; j < active.size(); ++j) {
            const double raw = active[j].weight / lambda;
            sides[j] = raw <= c0 ? Side::Floor : raw >= active[j].demand ? Side::Cap : Side::Free;
        }
        return sides;
    };
    std::vector<Side> sides = classify(hi);
    for (std::size_t round = 0; round <= active.size(); ++round) {
        double fixed = 0.0;
        double free_weight = 0.0;
        for (std::size_t j = 0; j < active.size(); ++j) {
            if (sides[j] == Side::Free)
                free_weight += active[j].weight;
            else
                fixed += sides[j] == Side::Floor ? c0 : active[j].demand;
        }
        if (free_weight <= 0.0 || target - fixed <= 0.0) break;
        const double lambda = free_weight / (target - fixed);
        std::vector<Side> next = classify(lambda);
        if (next == sides) {
            for (std::size_t j = 0; j < active.size(); ++j)
                alloc[j] = sides[j] == Side::Free ? active[j].weight / lambda
                                                  : (sides[j] == Side::Floor ? c0 : active[j].demand);
            break;
        }
        sides = std::move(next);
    }
    return alloc;
}

}  // namespace

std::vector<double> mi_max_allocation(double total, std::span<const UserSession> users, const QoEParams& params)
{
    if (users.empty()) throw Error(Errc::EmptyUserSet, "allocation needs at least one user");
    if (!(total >= 0.0)) throw Error(Errc::InvalidParams, "total must be >= 0");
    params.validate();

    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const double w = objective_quality(users[i].rate, users[i].bep, params) * params.k;
        if (w > 0.0 && users[i].demand > params.c0) candidates.push_back({i, w, users[i].demand});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });

    std::vector<double> best(users.size(), 0.0);
    double best_objective = 0.0;
    double floor_sum = 0.0;
    for (std::size_t m = 1; m <= candidates.size(); ++m) {
        floor_sum += params.c0;
        if (floor_sum > total) break;
        const std::span<const Candidate> active(candidates.data(), m);
        const std::vector<double> alloc = water_fill(active, total, params.c0);
        double objective = 0.0;
        for (std::size_t j = 0; j < m; ++j) objective += active[j].weight * std::log(alloc[j] / params.c0);
        if (objective > best_objective) {
            best_objective = objective;
            std::fill(best.begin(), best.end(), 0.0);
            for (std::size_t j = 0; j < m; ++j) best[active[j].index] = alloc[j];
        }
    }
    return best;
}

bool needs_readjustment(double old_stimulus, double new_stimulus, const QoEParams& params)
{
    if (!(old_stimulus > 0.0)) throw Error(Errc::DomainError, "old stimulus must be > 0");
    return std::abs(new_stimulus - old_stimulus) / old_stimulus >= params.readjust_fraction;
}

}  // namespace slicing4meta
