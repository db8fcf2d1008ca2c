#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>
#include "slicing4meta/catalog.hpp"
#include "slicing4meta/resource_vector.hpp"

namespace slicing4meta {

using MsiId = std::uint64_t;
using ReservationId = std::uint64_t;

struct Reservation {
    ReservationId id = 0;
    MsiId owner = 0;
    ResourceVector amount;
    IsolationDegree isolation = IsolationDegree::None;
    bool open = true;
};

/// Virtual multi-dimensional resource pool with a reservation ledger.
///
/// The ledger keeps its books in fixed point (one millionth of a unit per
/// dimension), so the conservation identity
///     sum(open reservations) + remaining == capacity
/// holds exactly rather than to floating-point tolerance. Amounts are
/// quantized to that resolution when they enter the ledger.
class Pool {
public:
    using Fixed = std::array<std::int64_t, ResourceVector::kDimensions>;
    static constexpr double kResolution = 1e-6;

    Pool() = default;
    explicit Pool(const ResourceVector& capacity);

    ResourceVector capacity() const { return to_vector(capacity_); }
    ResourceVector remaining() const { return to_vector(remaining_); }

    bool can_reserve(const ResourceVector& amount) const;

    /// Throws InsufficientResources if any dimension would go negative.
    const Reservation& reserve(MsiId owner, const ResourceVector& amount, IsolationDegree isolation);
    void release(ReservationId id);

    /// Grow or shrink an open reservation in place.
    void resize(ReservationId id, const ResourceVector& new_amount);

    void transfer(ReservationId id, MsiId new_owner);

    const Reservation& reservation(ReservationId id) const;
    std::vector<ReservationId> open_reservations_of(MsiId owner) const;
    std::size_t open_count() const;
    ResourceVector reserved_by(MsiId owner) const;

    /// Exact check of the ledger identity and of non-negative remaining capacity.
    bool conservation_holds() const;

    /// capacity, remaining and open reservations.
    nlohmann::json snapshot() const;

private:
    struct Entry {
        Reservation reservation;
        Fixed amount{};
    };

    static Fixed to_fixed(const ResourceVector& v);
    static ResourceVector to_vector(const Fixed& f);
    Entry& open_entry(ReservationId id);

    Fixed capacity_{};
    Fixed remaining_{};
    std::map<ReservationId, Entry> ledger_;
    ReservationId next_id_ = 1;
};

/// Pool mapped from the catalog: capacity is the sum of all leaf CaaS
/// supplies, so a supplier that also appears inside a composite is counted once.
Pool build_pool(const Catalog& catalog);

/// True iff the stronger of the two degrees is within the model's sharing
/// threshold and below Physical.
bool may_share(const MaaSModel& model, IsolationDegree a, IsolationDegree b);

}  // namespace slicing4meta
