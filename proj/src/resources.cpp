#include "slicing4meta/resources.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slicing4meta/error.hpp"

namespace slicing4meta {

namespace {

constexpr double kScale = 1.0 / Pool::kResolution;

bool fixed_fits(const Pool::Fixed& amount, const Pool::Fixed& available)
{
    for (std::size_t d = 0; d < amount.size(); ++d)
        if (amount[d] > available[d]) return false;
    return true;
}

}  // namespace

Pool::Pool(const ResourceVector& capacity)
{
    if (!capacity.is_nonnegative()) throw Error(Errc::InvalidParams, "pool capacity must be >= 0");
    capacity_ = to_fixed(capacity);
    remaining_ = capacity_;
}

Pool::Fixed Pool::to_fixed(const ResourceVector& v)
{
    const auto a = v.as_array();
    Fixed f{};
    for (std::size_t d = 0; d < a.size(); ++d) f[d] = std::llround(a[d] * kScale);
    return f;
}

ResourceVector Pool::to_vector(const Fixed& f)
{
    std::array<double, ResourceVector::kDimensions> a{};
    for (std::size_t d = 0; d < a.size(); ++d) a[d] = static_cast<double>(f[d]) / kScale;
    return ResourceVector::from_array(a);
}

bool Pool::can_reserve(const ResourceVector& amount) const
{
    return amount.is_nonnegative() && fixed_fits(to_fixed(amount), remaining_);
}

const Reservation& Pool::reserve(MsiId owner, const ResourceVector& amount, IsolationDegree isolation)
{
    if (!amount.is_nonnegative()) throw Error(Errc::InvalidParams, "reservation amount must be >= 0");
    const Fixed fixed = to_fixed(amount);
    if (!fixed_fits(fixed, remaining_))
        throw Error(Errc::InsufficientResources,
                    "requested " + amount.to_string() + ", remaining " + remaining().to_string());
    for (std::size_t d = 0; d < fixed.size(); ++d) remaining_[d] -= fixed[d];

    const ReservationId id = next_id_++;
    Entry entry;
    entry.amount = fixed;
    entry.reservation = Reservation{id, owner, to_vector(fixed), isolation, true};
    return ledger_.emplace(id, entry).first->second.reservation;
}

Pool::Entry& Pool::open_entry(ReservationId id)
{
    auto it = ledger_.find(id);
    if (it == ledger_.end()) throw Error(Errc::UnknownReservation, std::to_string(id));
    if (!it->second.reservation.open) throw Error(Errc::DoubleRelease, std::to_string(id));
    return it->second;
}

void Pool::release(ReservationId id)
{
    Entry& e = open_entry(id);
    for (std::size_t d = 0; d < e.amount.size(); ++d) remaining_[d] += e.amount[d];
    e.reservation.open = false;
}

void Pool::resize(ReservationId id, const ResourceVector& new_amount)
{
    if (!new_amount.is_nonnegative()) throw Error(Errc::InvalidParams, "reservation amount must be >= 0");
    Entry& e = open_entry(id);
    const Fixed target = to_fixed(new_amount);
    Fixed available = remaining_;
    for (std::size_t d = 0; d < target.size(); ++d) available[d] += e.amount[d];
    if (!fixed_fits(target, available))
        throw Error(Errc::InsufficientResources,
                    "cannot grow reservation " + std::to_string(id) + " to " + new_amount.to_string());
    for (std::size_t d = 0; d < target.size(); ++d) remaining_[d] = available[d] - target[d];
    e.amount = target;
    e.reservation.amount = to_vector(target);
}

void Pool::transfer(ReservationId id, MsiId new_owner)
{
    open_entry(id).reservation.owner = new_owner;
}

const Reservation& Pool::reservation(ReservationId id) const
{
    auto it = ledger_.find(id);
    if (it == ledger_.end()) throw Error(Errc::UnknownReservation, std::to_string(id));
    return it->second.reservation;
}

std::vector<ReservationId> Pool::open_reservations_of(MsiId owner) const
{
    std::vector<ReservationId> ids;
    for (const auto& [id, e] : ledger_)
        if (e.reservation.open && e.reservation.owner == owner) ids.push_back(id);
    return ids;
}

std::size_t Pool::open_count() const
{
    return static_cast<std::size_t>(
        std::count_if(ledger_.begin(), ledger_.end(), [](const auto& kv) { return kv.second.reservation.open; }));
}

ResourceVector Pool::reserved_by(MsiId owner) const
{
    Fixed sum{};
    for (const auto& [id, e] : ledger_) {
        if (!e.reservation.open || e.reservation.owner != owner) continue;
        for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += e.amount[d];
    }
    return to_vector(sum);
}

bool Pool::conservation_holds() const
{
    Fixed sum = remaining_;
    for (const auto& [id, e] : ledger_) {
        if (!e.reservation.open) continue;
        for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += e.amount[d];
    }
    for (std::size_t d = 0; d < sum.size(); ++d)
        if (remaining_[d] < 0 || sum[d] != capacity_[d]) return false;
    return true;
}

namespace {

nlohmann::json vector_json(const ResourceVector& v)
{
    return {{"comm_rate", v.comm_rate}, {"compute", v.compute}, {"storage", v.storage}, {"rendering", v.rendering}};
}

}  // namespace

nlohmann::json Pool::snapshot() const
{
    nlohmann::json open = nlohmann::json::array();
    for (const auto& [id, e] : ledger_) {
        if (!e.reservation.open) continue;
        open.push_back({{"id", id},
                        {"owner", e.reservation.owner},
                        {"amount", vector_json(e.reservation.amount)},
                        {"isolation", std::string(to_string(e.reservation.isolation))}});
    }
    return {{"capacity", vector_json(capacity())}, {"remaining", vector_json(remaining())}, {"reservations", open}};
}

Pool build_pool(const Catalog& catalog)
{
    ResourceVector capacity;
    for (const auto& m : catalog.models())
        if (m.kind == ModelKind::CaaS && !m.is_composite()) capacity += m.supply;
    return Pool(capacity);
}

bool may_share(const MaaSModel& model, IsolationDegree a, IsolationDegree b)
{
    const IsolationDegree strongest = std::max(a, b);
    return strongest <= model.max_isolation_degree_for_sharing && strongest < IsolationDegree::Physical;
}

}  // namespace slicing4meta
