#pragma once

#include <span>
#include <string>
#include <vector>

namespace slicing4meta {

/// Constants of the Meta-Immersion model. Only per_object_capacity (20 K)
/// comes from the virtual-travel setup; the rest are tunable defaults.
struct QoEParams {
    double k = 1.0;                     // Weber-Fechner proportionality constant
    double c0 = 1.0;                    // perception threshold, K
    double r_ref = 100.0;               // rate normalization, Mb/s
    double per_object_capacity = 20.0;  // K per virtual object
    double readjust_fraction = 0.1;     // relative stimulus change that triggers readjustment

    /// Throws InvalidParams on any out-of-range constant.
    void validate() const;
};

struct UserSession {
    std::string id;
    double rate = 0.0;  // downlink, Mb/s
    double bep = 0.0;   // uplink bit error probability
    int n_objects = 1;
    double demand = 0.0;  // K

    /// Builds a session whose demand is n_objects * per_object_capacity.
    static UserSession make(std::string id, double rate, double bep, int n_objects, const QoEParams& params);
};

struct MIResult {
    std::string user_id;
    double perception = 0.0;
    double objective_quality = 0.0;
    double mi = 0.0;
};

/// k * ln(c_eff / c0) with c_eff = max(c0, min(allocated, demand)).
double rendering_perception(double allocated, double demand, const QoEParams& params);

/// (1 - exp(-rate / r_ref)) * (1 - bep), in [0, 1).
double objective_quality(double rate, double bep, const QoEParams& params);

MIResult meta_immersion(const UserSession& user, double allocated, const QoEParams& params);

/// Sum of per-user MI for a given allocation.
double allocation_objective(std::span<const UserSession> users, std::span<const double> allocation,
                            const QoEParams& params);

double mean_mi(std::span<const UserSession> users, std::span<const double> allocation, const QoEParams& params);

/// total / |users| to every user.
std::vector<double> even_allocation(double total, std::span<const UserSession> users);

/// Rendering split maximizing the summed MI under the budget.
///
/// Each active user's optimal share is clamp(G_i k / lambda, c0, demand_i),
/// G_i being its objective quality. The multiplier lambda is located by
/// bisection; the free set found there is then solved in closed form so the
/// budget is met to rounding. Because perception is flat below c0, users at
/// the bottom of the active set may be better off dropped entirely: active
/// sets are tried as prefixes of the users ordered by weight and the best
/// one is kept. Users with G_i = 0 or demand <= c0 receive nothing.
std::vector<double> mi_max_allocation(double total, std::span<const UserSession> users, const QoEParams& params);

/// |new - old| / old >= readjust_fraction.
bool needs_readjustment(double old_stimulus, double new_stimulus, const QoEParams& params);

}  // namespace slicing4meta
